#pragma once

#include "hartogs/basis.hpp"
#include "hartogs/domain.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hartogs {

enum class KernelMethod { ClosedForm, Series };

struct KernelValue {
    cplx value;
    CPoint z;
    CPoint w;
    KernelMethod method = KernelMethod::ClosedForm;
    int truncation = -1;  // N for series values
};

/// Bergman kernel of the product of balls and disks under normalized measure:
/// prod (1 - <eta~_j, zeta~_j>)^{-(k_j+1)} prod (1 - eta_m conj(zeta_m))^{-2}.
cplx product_kernel(const DomainSpec& spec, std::span<const cplx> eta, std::span<const cplx> zeta);
cplx product_kernel(const DomainSpec& spec, const CPoint& eta, const CPoint& zeta);

/// Same product restricted to one factor.
cplx factor_kernel(const Factor& f, std::span<const cplx> eta, std::span<const cplx> zeta);

/// Kernel of H by the transformation rule through Psi.
KernelValue bergman_kernel(const DomainSpec& spec, const CPoint& z, const CPoint& w);

/// K(z,z) in closed form.
double bergman_diag(const DomainSpec& spec, const CPoint& z);
/// K(G(eta), G(eta)) for a point of Pi, unchecked.
double bergman_diag_pi(const DomainSpec& spec, std::span<const cplx> eta);

/// Partial sum of z^a conj(w^a) / ||z^a||^2 over enumerate_basis(spec, N).
KernelValue kernel_series(const DomainSpec& spec, const CPoint& z, const CPoint& w, int N);

/// Involutive automorphism of the unit ball exchanging a and 0.
std::vector<cplx> mobius(std::span<const cplx> a, std::span<const cplx> z);
double mobius_norm(std::span<const cplx> a, std::span<const cplx> z);

struct GreenValue {
    bool pole = false;  // z == w: the value is -infinity
    double value = 0.0;
};

/// Pluricomplex Green function of H with pole w, as the maximum over the
/// factors of Pi of log |phi_{Psi(w)_j}(Psi(z)_j)|.
GreenValue green_function(const DomainSpec& spec, const CPoint& z, const CPoint& w);

struct SublevelResolution {
    int radial = 24;
    int angular = 32;
};

struct HerbortBlockiReport {
    double lhs = 0.0;    // integral of |z^a|^2 over {G(., w) < -s}
    double rhs = 0.0;    // e^{-2ns} |w^a|^2 / K(w,w)
    double ratio = 0.0;
};

/// Lower bound of the L^2 mass of f = z^alpha on a Green sublevel set. The
/// sublevel set is the product of Mobius images of balls of radius e^{-s}, so
/// the integral is computed factor by factor through that parametrization.
HerbortBlockiReport check_herbort_blocki(const DomainSpec& spec, const MultiIndex& alpha, const CPoint& w,
                                         double s, SublevelResolution resolution = {});

struct ComparabilityReport {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double lower_bound = 0.0;   // C_1(s)^{-D}
    double upper_bound = 0.0;   // C_1(s)^{D}
    std::size_t samples = 0;

    bool within_bounds(double rel_tol = 1e-12) const {
        return min_ratio >= lower_bound * (1 - rel_tol) && max_ratio <= upper_bound * (1 + rel_tol);
    }
};

/// C_1(s) = (1 + e^{-s}) / (1 - e^{-s}).
double comparability_constant(double s);

/// Extremes of [K(z,z)/K(w,w)] / |det Psi'(z) / det Psi'(w)|^2 over random z in
/// the sublevel set {G(., w) < -s}.
ComparabilityReport check_comparability(const DomainSpec& spec, const CPoint& w, double s,
                                        std::size_t n_samples, std::uint64_t seed = 1);

} // namespace hartogs

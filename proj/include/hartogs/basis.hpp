#pragma once

#include "hartogs/domain.hpp"
#include "hartogs/quadrature.hpp"
#include "hartogs/rational.hpp"

#include <iosfwd>
#include <vector>

namespace hartogs {

/// Exponent vector alpha in N^k x Z^{n-k}.
struct MultiIndex {
    std::vector<int> entries;

    int operator[](std::size_t i) const { return entries[i]; }
    std::size_t size() const { return entries.size(); }
    auto operator<=>(const MultiIndex&) const = default;
};

std::string to_string(const MultiIndex& alpha);

/// Integer power by repeated squaring; negative exponents invert.
cplx ipow(cplx base, long long exponent);

/// E_m = sum_{j<=m} alpha_j + (b-1) sum_{j<k} alpha_j for each disk
/// coordinate m = k..n-1: z^alpha pulled back through G is
/// eta~^alpha~ * prod_m eta_m^{E_m}.
std::vector<long long> pullback_exponents(const DomainSpec& spec, const MultiIndex& alpha);

/// e_m = E_m + m + C: exponent of |eta_m|^2 in |z^alpha|^2 |det G'|^2.
std::vector<long long> norm_exponents(const DomainSpec& spec, const MultiIndex& alpha);

/// Square-integrability of z^alpha on H (all e_m >= 0).
bool is_admissible(const DomainSpec& spec, const MultiIndex& alpha);

/// All admissible alpha with |alpha_j| <= bound, ordered by sum |alpha_j|
/// and then lexicographically.
std::vector<MultiIndex> enumerate_basis(const DomainSpec& spec, int bound);

struct MonomialNorm {
    Rational exact;
    double value = 0.0;
};

/// ||z^alpha||^2 over H: product of normalized ball moments
/// k! beta! / (k + |beta|)! and disk moments 1 / (e_m + 1).
MonomialNorm monomial_norm_sq(const DomainSpec& spec, const MultiIndex& alpha);

/// Floating-point version of monomial_norm_sq, safe for large entries.
double monomial_norm_sq_value(const DomainSpec& spec, const MultiIndex& alpha);

cplx eval_monomial(const MultiIndex& alpha, std::span<const cplx> z);

/// Grid exact for the Gram matrix of the basis up to `bound`: per factor the
/// angular rule exceeds the largest phase difference and the radial rule the
/// largest |eta|^2 degree.
SampleSet monomial_grid(const DomainSpec& spec, int bound, std::size_t node_cap = kDefaultNodeCap);

struct OrthogonalityReport {
    std::vector<MultiIndex> basis;
    std::vector<double> diagonal;        // quadrature <z^a, z^a>
    std::vector<double> closed_form;     // monomial_norm_sq
    double max_offdiag = 0.0;
    double max_diag_rel_err = 0.0;
};

/// Gram matrix of the basis up to `bound` under integrate_H's pullback rule.
OrthogonalityReport check_orthogonality(const DomainSpec& spec, int bound, const SampleSet& samples);

/// index entries, admissible flag, exact norm numerator/denominator, float norm.
void write_basis_csv(std::ostream& out, const DomainSpec& spec, int bound);

} // namespace hartogs

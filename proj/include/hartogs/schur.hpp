#pragma once

#include "hartogs/domain.hpp"
#include "hartogs/rational.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace hartogs {

/// Parameters of the Schur-test weights f, h1, h2 for T_{K^{-t}}: L^p -> L^q.
struct SchurWitness {
    Rational p;
    Rational q;
    Rational t;
    int regime = 2;           // 2 or 3: which m-range was used
    Rational r;               // 1/p*
    Rational lambda;
    std::vector<Rational> m;  // one per disk coordinate

    double p_conj() const;    // p*
};

/// Interval (lower, upper] for m_j of one disk coordinate with Jacobian
/// exponent d in the given regime.
std::pair<Rational, Rational> m_range(int d, const Rational& p, const Rational& q, const Rational& t, int regime);

/// Midpoint parameters when every m-range is nonempty, std::nullopt otherwise.
/// lambda is half of min(1/q, 1/p*) in both regimes.
std::optional<SchurWitness> feasible_params(const DomainSpec& spec, const Rational& p, const Rational& q,
                                            const Rational& t, int regime);

struct TestFunctionValues {
    double f = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

/// f, h1 and h2 at the point G(eta) for eta in Pi.
TestFunctionValues test_functions(const DomainSpec& spec, const SchurWitness& witness, const CPoint& eta);

/// h1^{-1} h2 K^{-t} at G(eta), evaluated from the definitions.
double symbol_value(const DomainSpec& spec, const SchurWitness& witness, double t, std::span<const cplx> eta);

/// Same quantity from the closed form K^{1/p-1/q-t} prod |eta_j|^{d_j(1/p-2/q)-m_j}.
double symbol_value_closed(const DomainSpec& spec, const SchurWitness& witness, double t, std::span<const cplx> eta);

struct SchurLevel {
    int depth = 0;        // probes reach 1 - |eta|^2 = 10^{-depth}
    double c1 = 0.0;
    double c2 = 0.0;
    double sup_symbol = 0.0;
};

struct SchurReport {
    std::vector<SchurLevel> levels;
    double c1 = 0.0;            // final level
    double c2 = 0.0;
    double sup_symbol = 0.0;
    double norm_bound = 0.0;    // C1^{(p-1)/p} C2^{1/q} sup_symbol
    double max_level_ratio = 0.0;  // largest final/previous ratio over the three statistics
    bool stable = false;        // max_level_ratio < stability_tol
};

inline constexpr int kDefaultSchurLevels = 6;
inline constexpr double kSchurStabilityTol = 1.1;

/// One radial probe of a factor: |eta_j| and 1 - |eta_j|^2 kept separately.
struct SchurProbe {
    double radius;
    double gap;
};

/// Boundary depths 1, 2, 4, ..., 2^level.
std::vector<int> schur_depths(int level);

/// Probes at radii 0, 0.3, 0.6 and 1 - |eta|^2 = 10^{-depth} for each depth;
/// with `puncture`, 0 is replaced by radii 10^{-depth}.
std::vector<SchurProbe> schur_probes(int level, bool puncture);

/// Empirical Schur constants over probe sets refined level by level:
/// C1 = sup_x [int |K|^{r p*} h1^{p*}] / f^{p*}(x), C2 likewise for the dual
/// inequality, and the sup of h1^{-1} h2 K^{-t}. All three factor over the
/// product domain, so each is the product of one-dimensional sups. Throws
/// NonFiniteIntegrand when a factor integral diverges for the witness.
SchurReport verify_schur(const DomainSpec& spec, const SchurWitness& witness, double t,
                         int levels = kDefaultSchurLevels, double stability_tol = kSchurStabilityTol);

/// Per-level sup of h1^{-1} h2 K^{-t} alone; usable when the integrals diverge.
std::vector<SchurLevel> symbol_sup(const DomainSpec& spec, const SchurWitness& witness, double t,
                                   int levels = kDefaultSchurLevels);

/// Sup of symbol_value over the tensor product of the factor probes at a level,
/// evaluated point by point (levels up to 3 keep the radii representable).
double symbol_sup_direct(const DomainSpec& spec, const SchurWitness& witness, double t, int level);

void to_json(nlohmann::json& j, const SchurWitness& w);
void to_json(nlohmann::json& j, const SchurReport& r);

} // namespace hartogs

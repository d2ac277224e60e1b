#pragma once

#include "hartogs/basis.hpp"
#include "hartogs/domain.hpp"
#include "hartogs/kernel.hpp"
#include "hartogs/quadrature.hpp"
#include "hartogs/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hartogs {

enum class Regime { One = 1, Two = 2, Three = 3, NotApplicable = 0 };

std::string to_string(Regime r);

/// Exact boundedness classification of T_{K^{-t}}: L^p -> L^q.
struct Verdict {
    Regime regime = Regime::NotApplicable;
    bool bounded = false;
    bool boundary_case = false;
    Rational q_unbounded;    // (2n+2C)/(n-1+C): regime 1 from here on
    Rational q_lower;        // (2(n-1)+2C)/(n+1+C-2/p): regime 3 up to here
    Rational t_threshold;    // 1/p - 1/q in regime 2, the open threshold in regime 3
};

/// Regime boundaries; q equal to q_lower belongs to regime 3. Exact equalities
/// with any threshold set boundary_case.
Verdict predicted_verdict(const DomainSpec& spec, const Rational& p, const Rational& q, const Rational& t);

/// (2n+2C)/(n-1+C).
Rational regime1_threshold(const DomainSpec& spec);
/// (2(n-1)+2C)/(n+1+C-2/p).
Rational regime3_upper(const DomainSpec& spec, const Rational& p);
/// 1/(2p) + (1-p)/(2p) (n+1+C)/(n-1+C).
Rational regime3_threshold(const DomainSpec& spec, const Rational& p);

/// Quadrature of int_H K(z,w) K(w,w)^{-t} f(w) dv(w).
cplx apply_toeplitz(const DomainSpec& spec, double t, const FunctionH& f, const CPoint& z, const SampleSet& samples);

/// z^alpha in L^q(H): every disk exponent satisfies q E_m + 2 d_m > -2.
bool membership_Lq(const DomainSpec& spec, const MultiIndex& alpha, const Rational& q);

/// (0, ..., 0, 1-n-C): the image direction of conj(z_n)^{n-1+C}.
MultiIndex regime1_witness_index(const DomainSpec& spec);

/// Exact constant c in T(conj(z_n)^{n-1+C}) = c z_n^{1-n-C}.
double regime1_constant(const DomainSpec& spec, double t);

struct InnerProductRow {
    MultiIndex beta;
    cplx value;
};

struct Regime1Report {
    MultiIndex witness;
    std::vector<InnerProductRow> table;   // <T(conj(z_n)^N), z^beta> for admissible beta
    double max_off_witness = 0.0;
    cplx witness_value;
    std::vector<CPoint> points;
    std::vector<cplx> constants;          // T f(z) z_n^N at each point
    double constant_spread = 0.0;         // max relative deviation from the mean
    double exact_constant = 0.0;
    Rational threshold;                   // (2n+2C)/(n-1+C)
    bool member_at_q = true;              // membership_Lq(witness, q)
    bool member_below_threshold = false;
    bool member_at_threshold = true;
    bool pass = false;
};

struct Regime1Options {
    int bound = 2;                 // basis bound for the inner-product table
    int radial = 16;
    int angular = 32;
    double off_tol = 1e-8;
    double spread_tol = 5e-4;      // three significant digits
    std::vector<std::vector<cplx>> points;  // H-points; defaults when empty
};

/// Checks that T maps conj(z_n)^N onto the single direction z_n^{-N}, which
/// leaves L^q for q at or beyond the regime-1 threshold.
Regime1Report witness_regime1(const DomainSpec& spec, const Rational& q, double t, const Regime1Options& options = {});

struct SequenceReport {
    int j = 0;
    double norm_p = 0.0;         // ||f_j||_p
    double log_proxy = 0.0;      // log of sum_l int (1-r)^{2t} r^{x+(2+2t)N+1} dr
    double proxy = 0.0;
};

/// log a_l = -l log l.
double log_shell_radius(int l);

/// ||f_j||_p^p in closed form.
double sequence_norm_pp(const DomainSpec& spec, int j, double p);

/// log int_a^b (1-r^s)^{e2} r^{e} dr over one shell, given log a and log b;
/// s = 1 gives the proxy weight, s = 2 the exact operator weight.
double log_shell_integral(double log_a, double log_b, double e, double e2, int s);

/// The shell sequence f_j = h(|z_n|) conj(z_n)^{n-1+C} on |z_n| > a_{j+1}.
SequenceReport witness_sequence_fj(const DomainSpec& spec, int j, double p, double q, double t);

struct NecessityReport {
    double indicator = 0.0;   // K(w,w)^{-t+1/p-1/q} |det Psi'(w)|^{-2-2/p+2/q}
    double lower = 0.0;       // int over {G(., w) < -s} of K^{-t} |g_w|^2
    double upper = 0.0;       // ||g_w||_{q*} ||T g_w||_q
    double pairing = 0.0;     // <g_w, T g_w> = int_H K^{-t} |g_w|^2
};

struct NecessityOptions {
    double s = 1.0;
    int per_panel = 8;
    SublevelResolution sublevel{};
};

/// g_w(z) = K(z,w)/det Psi'(z): lower and upper estimates of <g_w, T g_w>
/// and the indicator that must stay bounded when T is bounded.
NecessityReport necessity_probe_gw(const DomainSpec& spec, double p, double q, double t, const CPoint& w,
                                   const NecessityOptions& options = {});

void to_json(nlohmann::json& j, const Verdict& v);

} // namespace hartogs

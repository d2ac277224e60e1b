#include "hartogs/schur.hpp"

#include "hartogs/errors.hpp"
#include "hartogs/estimates.hpp"
#include "hartogs/kernel.hpp"
#include "hartogs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hartogs {

double SchurWitness::p_conj() const {
    const double pd = to_double(p);
    return pd / (pd - 1.0);
}

std::pair<Rational, Rational> m_range(int d, const Rational& p, const Rational& q, const Rational& t, int regime) {
    const Rational inv_p = Rational(1) / p;
    const Rational lower = Rational(d + 2) * (inv_p - 1);
    if (regime == 2) return {lower, Rational(d) * (q - 2 * p) / (p * q)};
    if (regime == 3) return {lower, Rational(d) * (2 * t - inv_p)};
    throw ParameterOutOfRange("Schur regime must be 2 or 3");
}

std::optional<SchurWitness> feasible_params(const DomainSpec& spec, const Rational& p, const Rational& q,
                                            const Rational& t, int regime) {
    if (!(p > 1) || !(q >= p)) throw ParameterOutOfRange("need 1 < p <= q");
    if (t < 0) throw ParameterOutOfRange("need t >= 0");
    SchurWitness w;
    w.p = p;
    w.q = q;
    w.t = t;
    w.regime = regime;
    w.r = 1 - Rational(1) / p;
    w.lambda = std::min(Rational(1) / q, w.r) / 2;
    for (int m = spec.k(); m < spec.n(); ++m) {
        const auto [lo, hi] = m_range(spec.jacobian_exponent(m), p, q, t, regime);
        if (!(lo < hi)) return std::nullopt;
        w.m.push_back((lo + hi) / 2);
    }
    return w;
}

namespace {

double factor_rho(const Factor& f, std::span<const cplx> eta) {
    double s = 0.0;
    for (int i = 0; i < f.dim; ++i) s += std::norm(eta[f.offset + i]);
    return 1.0 - s;
}

double rho(const DomainSpec& spec, std::span<const cplx> eta) {
    double v = 1.0;
    for (const Factor& f : spec.factors()) v *= factor_rho(f, eta);
    return v;
}

double product_diag(const DomainSpec& spec, std::span<const cplx> eta) {
    double v = 1.0;
    for (const Factor& f : spec.factors()) v *= std::pow(factor_rho(f, eta), -f.kernel_exp);
    return v;
}

} // namespace

TestFunctionValues test_functions(const DomainSpec& spec, const SchurWitness& witness, const CPoint& eta) {
    if (eta.frame != Frame::Pi || !contains_Pi(spec, eta)) throw DomainViolation("test functions need a point of Pi");
    const double lambda = to_double(witness.lambda);
    const double p = to_double(witness.p);
    const double q = to_double(witness.q);
    const double base = std::pow(rho(spec, eta.coords), -lambda);
    const double jac = std::abs(jacobian_G_raw(spec, eta.coords));
    TestFunctionValues v;
    v.f = base * std::pow(jac, -1.0 / witness.p_conj());
    v.h1 = base;
    for (int m = spec.k(); m < spec.n(); ++m)
        v.h1 *= std::pow(std::abs(eta[m]), to_double(witness.m[m - spec.k()]));
    v.h2 = base * std::pow(product_diag(spec, eta.coords), 1.0 / p - 1.0 / q) * std::pow(jac, -1.0 / p);
    return v;
}

double symbol_value(const DomainSpec& spec, const SchurWitness& witness, double t, std::span<const cplx> eta) {
    const auto v = test_functions(spec, witness, make_point({eta.begin(), eta.end()}, Frame::Pi));
    return v.h2 / v.h1 * std::pow(bergman_diag_pi(spec, eta), -t);
}

double symbol_value_closed(const DomainSpec& spec, const SchurWitness& witness, double t, std::span<const cplx> eta) {
    const double p = to_double(witness.p);
    const double q = to_double(witness.q);
    double v = std::pow(bergman_diag_pi(spec, eta), 1.0 / p - 1.0 / q - t);
    for (int m = spec.k(); m < spec.n(); ++m) {
        const double d = spec.jacobian_exponent(m);
        v *= std::pow(std::abs(eta[m]), d * (1.0 / p - 2.0 / q) - to_double(witness.m[m - spec.k()]));
    }
    return v;
}

std::vector<int> schur_depths(int level) {
    std::vector<int> depths;
    for (int i = 0; i <= level; ++i) depths.push_back(1 << i);
    return depths;
}

std::vector<SchurProbe> schur_probes(int level, bool puncture) {
    std::vector<SchurProbe> probes;
    for (double r : {0.0, 0.3, 0.6}) {
        if (puncture && r == 0.0) continue;
        probes.push_back({r, (1.0 - r) * (1.0 + r)});
    }
    for (int depth : schur_depths(level)) {
        const double gap = std::pow(10.0, -depth);
        probes.push_back({std::sqrt(1.0 - gap), gap});
        if (puncture) {
            const double r = std::pow(10.0, -depth);
            probes.push_back({r, (1.0 - r) * (1.0 + r)});
        }
    }
    return probes;
}

namespace {

/// Per-factor ratio of the first Schur integral to f^{p*}.
double first_ratio(const Factor& f, double U, double c, double gap) {
    const double lhs = f.disk ? disk_weighted_integral_gap(U, c, 2.0, gap)
                              : ball_weighted_integral_gap(f.dim, U, f.dim + 1.0, gap);
    return lhs / std::exp(U * std::log(gap));
}

/// Per-factor ratio of the second Schur integral to h2^q.
double second_ratio(const Factor& f, double U, double c, double a, double gap) {
    const double A = a * f.kernel_exp;
    const double lhs = f.disk ? disk_weighted_integral_gap(U, c, A, gap) : ball_weighted_integral_gap(f.dim, U, A, gap);
    return lhs / std::exp((U - f.kernel_exp * (a - 1.0)) * std::log(gap));
}

void require_convergent(double U, double c, const std::string& what) {
    if (!(U > -1.0) || !(c > -2.0))
        throw NonFiniteIntegrand(what + " diverges (weight exponent " + std::to_string(U) + ", puncture exponent " +
                                 std::to_string(c) + ")");
}

/// The symbol is a product over factors of gap^{-kappa e} |eta_m|^{g_m - 2 d_m e},
/// e = 1/p - 1/q - t, so its sup is the product of per-factor sups.
double symbol_sup_at_level(const DomainSpec& spec, const SchurWitness& witness, double t, int level) {
    const double p = to_double(witness.p);
    const double q = to_double(witness.q);
    const double e = 1.0 / p - 1.0 / q - t;
    double sup = 1.0;
    for (const Factor& f : spec.factors()) {
        double best = -std::numeric_limits<double>::infinity();
        double radial = 0.0;
        if (f.disk) {
            const double d = f.jac_exp;
            radial = d * (1.0 / p - 2.0 / q) - to_double(witness.m[f.offset - spec.k()]) - 2.0 * d * e;
        }
        for (const SchurProbe& probe : schur_probes(level, f.disk)) {
            double log_value = -e * f.kernel_exp * std::log(probe.gap);
            if (f.disk) log_value += radial * std::log(probe.radius);
            best = std::max(best, log_value);
        }
        sup *= std::exp(best);
    }
    if (!std::isfinite(sup)) throw NonFiniteIntegrand("symbol is not finite on the probe set");
    return sup;
}

} // namespace

double symbol_sup_direct(const DomainSpec& spec, const SchurWitness& witness, double t, int level) {
    const auto& factors = spec.factors();
    std::vector<std::vector<SchurProbe>> probes;
    for (const Factor& f : factors) probes.push_back(schur_probes(level, f.disk));
    std::size_t total = 1;
    for (const auto& r : probes) total *= r.size();
    std::vector<double> values(total, 0.0);
    parallel_for(total, [&](std::size_t index) {
        std::vector<cplx> eta(spec.n(), 0.0);
        std::size_t rest = index;
        for (std::size_t j = factors.size(); j-- > 0;) {
            eta[factors[j].offset] = probes[j][rest % probes[j].size()].radius;
            rest /= probes[j].size();
        }
        values[index] = symbol_value(spec, witness, t, eta);
    });
    double sup = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteIntegrand("symbol is not finite on the probe set");
        sup = std::max(sup, v);
    }
    return sup;
}

std::vector<SchurLevel> symbol_sup(const DomainSpec& spec, const SchurWitness& witness, double t, int levels) {
    std::vector<SchurLevel> out;
    for (int level = 1; level <= levels; ++level) {
        SchurLevel s;
        s.depth = 1 << level;
        s.sup_symbol = symbol_sup_at_level(spec, witness, t, level);
        out.push_back(s);
    }
    return out;
}

SchurReport verify_schur(const DomainSpec& spec, const SchurWitness& witness, double t, int levels,
                         double stability_tol) {
    if (levels < 2) throw ParameterOutOfRange("verify_schur needs at least two refinement levels");
    if (witness.m.size() != static_cast<std::size_t>(spec.disk_count()))
        throw ParameterOutOfRange("witness has the wrong number of m parameters");
    const double p = to_double(witness.p);
    const double q = to_double(witness.q);
    const double ps = witness.p_conj();
    const double lambda = to_double(witness.lambda);

    struct FactorExp {
        double U1, c1, U2, c2, a;
    };
    std::vector<FactorExp> exps;
    for (const Factor& f : spec.factors()) {
        FactorExp e{-lambda * ps, 0.0, -lambda * q, 0.0, q / p};
        if (f.disk) {
            const double d = f.jac_exp;
            e.c1 = to_double(witness.m[f.offset - spec.k()]) * ps + d;
            e.c2 = (2.0 - q) * d;
        }
        require_convergent(e.U1, e.c1, "first Schur integral");
        require_convergent(e.U2, e.c2, "second Schur integral");
        exps.push_back(e);
    }

    SchurReport report;
    const auto& factors = spec.factors();
    for (int level = 1; level <= levels; ++level) {
        SchurLevel s;
        s.depth = 1 << level;
        s.c1 = 1.0;
        s.c2 = 1.0;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            const auto probes = schur_probes(level, false);
            std::vector<double> r1(probes.size()), r2(probes.size());
            parallel_for(probes.size(), [&](std::size_t i) {
                r1[i] = first_ratio(factors[j], exps[j].U1, exps[j].c1, probes[i].gap);
                r2[i] = second_ratio(factors[j], exps[j].U2, exps[j].c2, exps[j].a, probes[i].gap);
            });
            s.c1 *= *std::max_element(r1.begin(), r1.end());
            s.c2 *= *std::max_element(r2.begin(), r2.end());
        }
        s.sup_symbol = symbol_sup_at_level(spec, witness, t, level);
        if (!std::isfinite(s.c1) || !std::isfinite(s.c2)) throw NonFiniteIntegrand("Schur constant is not finite");
        report.levels.push_back(s);
    }
    const SchurLevel& last = report.levels.back();
    const SchurLevel& prev = report.levels[report.levels.size() - 2];
    report.c1 = last.c1;
    report.c2 = last.c2;
    report.sup_symbol = last.sup_symbol;
    report.norm_bound = std::pow(last.c1, (p - 1.0) / p) * std::pow(last.c2, 1.0 / q) * last.sup_symbol;
    report.max_level_ratio = std::max({last.c1 / prev.c1, last.c2 / prev.c2, last.sup_symbol / prev.sup_symbol});
    report.stable = report.max_level_ratio < stability_tol;
    return report;
}

void to_json(nlohmann::json& j, const SchurWitness& w) {
    std::vector<std::string> m;
    for (const auto& v : w.m) m.push_back(to_string(v));
    j = {{"p", to_string(w.p)}, {"q", to_string(w.q)}, {"t", to_string(w.t)}, {"regime", w.regime},
         {"r", to_string(w.r)}, {"lambda", to_string(w.lambda)}, {"m", m}};
}

void to_json(nlohmann::json& j, const SchurReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& s : r.levels)
        levels.push_back({{"depth", s.depth}, {"C1", s.c1}, {"C2", s.c2}, {"sup_symbol", s.sup_symbol}});
    j = {{"C1_hat", r.c1},
         {"C2_hat", r.c2},
         {"sup_symbol", r.sup_symbol},
         {"norm_bound", r.norm_bound},
         {"max_level_ratio", r.max_level_ratio},
         {"stable", r.stable},
         {"levels", levels}};
}

} // namespace hartogs

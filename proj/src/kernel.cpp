#include "hartogs/kernel.hpp"

#include "hartogs/errors.hpp"
#include "hartogs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hartogs {

namespace {

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

double norm_sq(std::span<const cplx> a) {
    double s = 0.0;
    for (cplx v : a) s += std::norm(v);
    return s;
}

std::span<const cplx> block(std::span<const cplx> x, const Factor& f) {
    return x.subspan(f.offset, f.dim);
}

void require_pi(const DomainSpec& spec, const CPoint& p, const char* what) {
    if (p.frame != Frame::Pi) throw DomainViolation(std::string(what) + " must be in the Pi frame");
    if (p.size() != static_cast<std::size_t>(spec.n())) throw DomainViolation(std::string(what) + " has wrong length");
}

void require_h(const DomainSpec& spec, const CPoint& p, const char* what) {
    if (p.frame != Frame::H) throw DomainViolation(std::string(what) + " must be in the H frame");
    if (!contains_H(spec, p)) throw DomainViolation(std::string(what) + " is not in H");
}

} // namespace

cplx factor_kernel(const Factor& f, std::span<const cplx> eta, std::span<const cplx> zeta) {
    const cplx base = 1.0 - inner(eta, zeta);
    if (std::abs(base) == 0.0) throw SingularPair("kernel denominator vanishes");
    return std::pow(base, -f.kernel_exp);
}

cplx product_kernel(const DomainSpec& spec, std::span<const cplx> eta, std::span<const cplx> zeta) {
    cplx value = 1.0;
    for (const Factor& f : spec.factors()) value *= factor_kernel(f, block(eta, f), block(zeta, f));
    return value;
}

cplx product_kernel(const DomainSpec& spec, const CPoint& eta, const CPoint& zeta) {
    require_pi(spec, eta, "eta");
    require_pi(spec, zeta, "zeta");
    for (const Factor& f : spec.factors()) {
        if (norm_sq(block(eta.coords, f)) > 1.0 || norm_sq(block(zeta.coords, f)) > 1.0)
            throw DomainViolation("point outside the closed product domain");
    }
    return product_kernel(spec, std::span<const cplx>(eta.coords), std::span<const cplx>(zeta.coords));
}

KernelValue bergman_kernel(const DomainSpec& spec, const CPoint& z, const CPoint& w) {
    require_h(spec, z, "z");
    require_h(spec, w, "w");
    std::vector<cplx> eta(spec.n()), zeta(spec.n());
    push_forward(spec, z.coords, eta);
    push_forward(spec, w.coords, zeta);
    const cplx jz = jacobian_G_raw(spec, eta);
    const cplx jw = jacobian_G_raw(spec, zeta);
    const cplx value = product_kernel(spec, std::span<const cplx>(eta), std::span<const cplx>(zeta)) / (jz * std::conj(jw));
    return {value, z, w, KernelMethod::ClosedForm, -1};
}

namespace {

double product_diag(const DomainSpec& spec, std::span<const cplx> eta) {
    double denom = 1.0;
    for (const Factor& f : spec.factors()) denom *= std::pow(1.0 - norm_sq(block(eta, f)), f.kernel_exp);
    return 1.0 / denom;
}

} // namespace

double bergman_diag_pi(const DomainSpec& spec, std::span<const cplx> eta) {
    return product_diag(spec, eta) / std::norm(jacobian_G_raw(spec, eta));
}

double bergman_diag(const DomainSpec& spec, const CPoint& z) {
    require_h(spec, z, "z");
    std::vector<cplx> eta(spec.n());
    push_forward(spec, z.coords, eta);
    return bergman_diag_pi(spec, eta);
}

KernelValue kernel_series(const DomainSpec& spec, const CPoint& z, const CPoint& w, int N) {
    require_h(spec, z, "z");
    require_h(spec, w, "w");
    cplx sum = 0.0;
    for (const MultiIndex& a : enumerate_basis(spec, N))
        sum += eval_monomial(a, z.coords) * std::conj(eval_monomial(a, w.coords)) / monomial_norm_sq_value(spec, a);
    return {sum, z, w, KernelMethod::Series, N};
}

std::vector<cplx> mobius(std::span<const cplx> a, std::span<const cplx> z) {
    const double aa = norm_sq(a);
    const cplx za = inner(z, a);
    const double sa = std::sqrt(1.0 - aa);
    std::vector<cplx> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const cplx proj = aa > 0.0 ? za / aa * a[i] : cplx(0.0);
        out[i] = (a[i] - proj - sa * (z[i] - proj)) / (1.0 - za);
    }
    return out;
}

double mobius_norm(std::span<const cplx> a, std::span<const cplx> z) {
    return std::sqrt(norm_sq(mobius(a, z)));
}

GreenValue green_function(const DomainSpec& spec, const CPoint& z, const CPoint& w) {
    require_h(spec, z, "z");
    require_h(spec, w, "w");
    std::vector<cplx> eta(spec.n()), zeta(spec.n());
    push_forward(spec, z.coords, eta);
    push_forward(spec, w.coords, zeta);
    double largest = 0.0;
    for (const Factor& f : spec.factors())
        largest = std::max(largest, mobius_norm(block(zeta, f), block(eta, f)));
    if (largest == 0.0) return {true, -std::numeric_limits<double>::infinity()};
    return {false, std::log(largest)};
}

namespace {

/// |P_j(eta_j)|^2 where |z^alpha|^2 |det G'|^2 = prod_j |P_j(eta_j)|^2.
struct FactorWeight {
    const Factor* factor;
    std::vector<long long> exps;

    double operator()(std::span<const cplx> x) const {
        double v = 1.0;
        for (int i = 0; i < factor->dim; ++i)
            if (exps[i]) v *= std::pow(std::norm(x[i]), static_cast<double>(exps[i]));
        return v;
    }
};

std::vector<FactorWeight> factor_weights(const DomainSpec& spec, const MultiIndex& alpha) {
    const auto e = norm_exponents(spec, alpha);
    std::vector<FactorWeight> out;
    for (const Factor& f : spec.factors()) {
        FactorWeight fw{&f, {}};
        if (f.disk) {
            if (e[f.offset - spec.k()] < 0) throw NotAdmissible(to_string(alpha) + " is not square integrable");
            fw.exps.push_back(e[f.offset - spec.k()]);
        } else {
            for (int i = 0; i < f.dim; ++i) fw.exps.push_back(alpha[f.offset + i]);
        }
        out.push_back(std::move(fw));
    }
    return out;
}

/// Real Jacobian of v -> phi_a(v) relative to the normalized ball measure.
double mobius_jacobian(std::span<const cplx> a, std::span<const cplx> v, int dim) {
    const double num = 1.0 - norm_sq(a);
    const double den = std::norm(1.0 - inner(v, a));
    return std::pow(num / den, dim + 1);
}

} // namespace

HerbortBlockiReport check_herbort_blocki(const DomainSpec& spec, const MultiIndex& alpha, const CPoint& w,
                                         double s, SublevelResolution resolution) {
    require_h(spec, w, "w");
    if (!(s > 0.0)) throw ParameterOutOfRange("s must be positive");
    const double radius = std::exp(-s);
    if (radius == 0.0) throw EmptySublevel("sublevel radius underflows for s = " + std::to_string(s));
    std::vector<cplx> zeta(spec.n());
    push_forward(spec, w.coords, zeta);

    const auto weights = factor_weights(spec, alpha);
    HerbortBlockiReport report{1.0, 1.0, 0.0};
    for (const FactorWeight& fw : weights) {
        const Factor& f = *fw.factor;
        const auto a = block(zeta, f);
        const FactorRule rule = ball_rule(f.dim, resolution.radial, resolution.angular, radius);
        if (rule.size() == 0) throw EmptySublevel("no quadrature nodes in the sublevel set");
        double lhs = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const auto v = rule.node(i);
            const auto eta = mobius(a, v);
            lhs += rule.weights[i] * fw(eta) * mobius_jacobian(a, v, f.dim);
        }
        report.lhs *= lhs;
        const double kernel = std::pow(1.0 - norm_sq(a), -f.kernel_exp);
        report.rhs *= std::exp(-2.0 * f.dim * s) * fw(a) / kernel;
    }
    report.ratio = report.lhs / report.rhs;
    return report;
}

double comparability_constant(double s) {
    const double e = std::exp(-s);
    return (1.0 + e) / (1.0 - e);
}

ComparabilityReport check_comparability(const DomainSpec& spec, const CPoint& w, double s,
                                        std::size_t n_samples, std::uint64_t seed) {
    require_h(spec, w, "w");
    if (!(s > 0.0)) throw ParameterOutOfRange("s must be positive");
    if (n_samples == 0) throw EmptySublevel("no samples requested");
    const double radius = std::exp(-s);
    if (radius == 0.0) throw EmptySublevel("sublevel radius underflows for s = " + std::to_string(s));

    std::vector<cplx> zeta(spec.n());
    push_forward(spec, w.coords, zeta);
    const double base = product_diag(spec, zeta);

    int D = 0;
    for (const Factor& f : spec.factors()) D += f.kernel_exp;
    const double c1 = comparability_constant(s);

    ComparabilityReport report;
    report.lower_bound = std::pow(c1, -D);
    report.upper_bound = std::pow(c1, D);
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = 0.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uniform;
    std::vector<cplx> eta(spec.n());
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (const Factor& f : spec.factors()) {
            std::vector<cplx> v(f.dim);
            double len = 0.0;
            for (auto& c : v) {
                c = {gauss(rng), gauss(rng)};
                len += std::norm(c);
            }
            len = std::sqrt(len);
            // Alternate interior points with points on the edge of the sublevel set.
            const double r = (i % 2 == 0) ? radius * std::pow(uniform(rng), 0.5 / f.dim) : radius * (1.0 - 1e-12);
            for (auto& c : v) c *= r / len;
            const auto mapped = mobius(block(zeta, f), v);
            std::copy(mapped.begin(), mapped.end(), eta.begin() + f.offset);
        }
        const double ratio = product_diag(spec, eta) / base;
        report.min_ratio = std::min(report.min_ratio, ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
    }
    report.samples = n_samples;
    return report;
}

} // namespace hartogs

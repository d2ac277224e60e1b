#include "hartogs/toeplitz.hpp"

#include "hartogs/errors.hpp"
#include "hartogs/estimates.hpp"
#include "hartogs/parallel.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hartogs {

std::string to_string(Regime r) {
    switch (r) {
    case Regime::One: return "1";
    case Regime::Two: return "2";
    case Regime::Three: return "3";
    default: return "not_applicable";
    }
}

Rational regime1_threshold(const DomainSpec& spec) {
    const int n = spec.n(), C = spec.camber();
    return Rational(2 * n + 2 * C, n - 1 + C);
}

Rational regime3_upper(const DomainSpec& spec, const Rational& p) {
    const int n = spec.n(), C = spec.camber();
    return Rational(2 * (n - 1) + 2 * C) / (Rational(n + 1 + C) - 2 / p);
}

Rational regime3_threshold(const DomainSpec& spec, const Rational& p) {
    const int n = spec.n(), C = spec.camber();
    return 1 / (2 * p) + (1 - p) / (2 * p) * Rational(n + 1 + C, n - 1 + C);
}

Verdict predicted_verdict(const DomainSpec& spec, const Rational& p, const Rational& q, const Rational& t) {
    Verdict v;
    v.q_unbounded = regime1_threshold(spec);
    if (!(p > 1) || p > q || t < 0) return v;
    v.q_lower = regime3_upper(spec, p);
    if (q >= v.q_unbounded) {
        v.regime = Regime::One;
        v.bounded = false;
        v.boundary_case = q == v.q_unbounded;
    } else if (q <= v.q_lower) {
        v.regime = Regime::Three;
        v.t_threshold = regime3_threshold(spec, p);
        v.bounded = t > v.t_threshold;
        v.boundary_case = t == v.t_threshold || q == v.q_lower;
    } else {
        v.regime = Regime::Two;
        v.t_threshold = 1 / p - 1 / q;
        v.bounded = t >= v.t_threshold;
        v.boundary_case = t == v.t_threshold;
    }
    return v;
}

void to_json(nlohmann::json& j, const Verdict& v) {
    j = {{"regime", to_string(v.regime)},
         {"bounded", v.bounded},
         {"boundary_case", v.boundary_case},
         {"q_unbounded", to_string(v.q_unbounded)},
         {"q_lower", to_string(v.q_lower)},
         {"t_threshold", to_string(v.t_threshold)}};
}

cplx apply_toeplitz(const DomainSpec& spec, double t, const FunctionH& f, const CPoint& z, const SampleSet& samples) {
    if (z.frame != Frame::H || !contains_H(spec, z)) throw DomainViolation("apply_toeplitz needs a point of H");
    std::vector<cplx> eta(spec.n());
    push_forward(spec, z.coords, eta);
    const cplx jac_eta = jacobian_G_raw(spec, eta);
    // K(z,w) K(w,w)^{-t} |det G'(zeta)|^2 with the Jacobian powers combined so
    // the puncture stays finite.
    const FunctionPi integrand = [&](std::span<const cplx> zeta) {
        std::vector<cplx> w(spec.n());
        pull_back(spec, zeta, w);
        const cplx jac = jacobian_G_raw(spec, zeta);
        double diag = 1.0;
        for (const Factor& fac : spec.factors()) {
            double s = 0.0;
            for (int i = 0; i < fac.dim; ++i) s += std::norm(zeta[fac.offset + i]);
            diag *= std::pow(1.0 - s, fac.kernel_exp);
        }
        return product_kernel(spec, std::span<const cplx>(eta), zeta) * std::pow(diag, t) *
               std::pow(std::norm(jac), t) * jac * f(w) / jac_eta;
    };
    const cplx value = integrate_Pi(integrand, samples);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw NonFiniteIntegrand("Toeplitz integral is not finite");
    return value;
}

bool membership_Lq(const DomainSpec& spec, const MultiIndex& alpha, const Rational& q) {
    const auto E = pullback_exponents(spec, alpha);
    for (int m = spec.k(); m < spec.n(); ++m) {
        if (!(q * E[m - spec.k()] + 2 * spec.jacobian_exponent(m) > -2)) return false;
    }
    return true;
}

MultiIndex regime1_witness_index(const DomainSpec& spec) {
    MultiIndex a{std::vector<int>(spec.n(), 0)};
    a.entries.back() = 1 - spec.n() - spec.camber();
    return a;
}

namespace {

double beta_fn(double a, double b) { return boost::math::beta(a, b); }

/// Multiplier of the weighted disk projection on rho^{2td} eta^d for the disk
/// with Jacobian exponent d, mode M: (M+1) B(M+td+1, 2t+1).
double disk_mode(int d, int M, double t) { return (M + 1) * beta_fn(M + t * d + 1.0, 2.0 * t + 1.0); }

/// T applied to the constant on a ball B^k: k B(k, (k+1)t + 1).
double ball_constant(int k, double t) { return k * beta_fn(k, (k + 1) * t + 1.0); }

} // namespace

double regime1_constant(const DomainSpec& spec, double t) {
    const int N = spec.n() - 1 + spec.camber();
    double c = 1.0;
    for (const Factor& f : spec.factors()) {
        if (!f.disk) {
            c *= ball_constant(f.dim, t);
        } else if (f.offset == spec.n() - 1) {
            c *= beta_fn(N + t * N + 1.0, 2.0 * t + 1.0);
        } else {
            c *= disk_mode(f.jac_exp, f.jac_exp, t);
        }
    }
    return c;
}

Regime1Report witness_regime1(const DomainSpec& spec, const Rational& q, double t, const Regime1Options& options) {
    Regime1Report report;
    report.witness = regime1_witness_index(spec);
    report.threshold = regime1_threshold(spec);
    report.exact_constant = regime1_constant(spec, t);
    const int N = spec.n() - 1 + spec.camber();
    const int n = spec.n();

    auto basis = enumerate_basis(spec, options.bound);
    if (std::find(basis.begin(), basis.end(), report.witness) == basis.end()) basis.push_back(report.witness);

    // <T f, z^beta> = <K^{-t} f, z^beta> because z^beta lies in A^2.
    const SampleSet grid = grid_Pi(spec, options.radial, options.angular);
    std::vector<cplx> sums(basis.size(), 0.0);
    std::vector<std::vector<cplx>> partial(basis.size());
    for (std::size_t b = 0; b < basis.size(); ++b) {
        const MultiIndex& beta = basis[b];
        const FunctionPi integrand = [&](std::span<const cplx> zeta) {
            std::vector<cplx> w(n);
            pull_back(spec, zeta, w);
            double diag = 1.0;
            for (const Factor& fac : spec.factors()) {
                double s = 0.0;
                for (int i = 0; i < fac.dim; ++i) s += std::norm(zeta[fac.offset + i]);
                diag *= std::pow(1.0 - s, fac.kernel_exp);
            }
            const double jac2 = std::norm(jacobian_G_raw(spec, zeta));
            return std::pow(diag * jac2, t) * ipow(std::conj(w[n - 1]), N) * std::conj(eval_monomial(beta, w)) * jac2;
        };
        report.table.push_back({beta, integrate_Pi(integrand, grid)});
    }
    for (const auto& row : report.table) {
        if (row.beta == report.witness) report.witness_value = row.value;
        else report.max_off_witness = std::max(report.max_off_witness, std::abs(row.value));
    }

    std::vector<std::vector<cplx>> points = options.points;
    if (points.empty()) {
        for (int i = 0; i < 5; ++i) {
            std::vector<cplx> eta(n);
            for (const Factor& f : spec.factors()) {
                if (f.disk) {
                    eta[f.offset] = std::polar(0.35 + 0.07 * i + 0.05 * (f.offset - spec.k()), 0.9 * i);
                } else {
                    for (int c = 0; c < f.dim; ++c) eta[f.offset + c] = std::polar(0.12 * i / std::sqrt(f.dim), 1.3 * i + c);
                }
            }
            std::vector<cplx> z(n);
            pull_back(spec, eta, z);
            points.push_back(z);
        }
    }
    const FunctionH probe = [&](std::span<const cplx> w) { return ipow(std::conj(w[n - 1]), N); };
    cplx mean = 0.0;
    for (const auto& coords : points) {
        const CPoint z = make_point(coords, Frame::H);
        report.points.push_back(z);
        const cplx value = apply_toeplitz(spec, t, probe, z, grid);
        report.constants.push_back(value * ipow(coords[n - 1], N));
        mean += report.constants.back();
    }
    mean /= static_cast<double>(report.constants.size());
    for (const cplx c : report.constants)
        report.constant_spread = std::max(report.constant_spread, std::abs(c - mean) / std::abs(mean));

    report.member_at_q = membership_Lq(spec, report.witness, q);
    report.member_at_threshold = membership_Lq(spec, report.witness, report.threshold);
    report.member_below_threshold = membership_Lq(spec, report.witness, report.threshold - Rational(1, 1000000000));
    report.pass = report.max_off_witness < options.off_tol &&
                  std::abs(report.witness_value) > 100.0 * options.off_tol &&
                  report.constant_spread < options.spread_tol && !report.member_at_q &&
                  report.member_below_threshold && !report.member_at_threshold;
    return report;
}

double log_shell_radius(int l) { return -static_cast<double>(l) * std::log(static_cast<double>(l)); }

double sequence_norm_pp(const DomainSpec& spec, int j, double p) {
    if (j < 1) throw ParameterOutOfRange("sequence index must be >= 1");
    double other = 1.0;
    for (int m = spec.k(); m + 1 < spec.n(); ++m) other /= spec.jacobian_exponent(m) + 1.0;
    double sum = 0.0;
    for (int l = 1; l <= j; ++l) {
        // On shell l, |f|^p |det G'|^2 reduces to 2 r^{p/l - 1} dr in the last coordinate.
        const double outer = std::exp(p / l * log_shell_radius(l));
        const double inner = std::exp(p / l * log_shell_radius(l + 1));
        sum += 2.0 * l / p * (outer - inner);
    }
    return other * sum;
}

double log_shell_integral(double log_a, double log_b, double e, double e2, int s) {
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    const double slope = e + 1.0;
    const double top = std::max(slope * log_a, slope * log_b);
    auto f = [&](double u) {
        const double w = -std::expm1(s * u);
        if (w <= 0.0) return 0.0;
        return std::exp(slope * u - top) * std::pow(w, e2);
    };
    const double value = ts.integrate(f, log_a, log_b, 1e-12);
    if (!(value > 0.0) || !std::isfinite(value)) throw NonFiniteIntegrand("shell integral failed");
    return top + std::log(value);
}

namespace {

double log_sum_exp(const std::vector<double>& logs) {
    const double top = *std::max_element(logs.begin(), logs.end());
    double s = 0.0;
    for (double v : logs) s += std::exp(v - top);
    return top + std::log(s);
}

} // namespace

SequenceReport witness_sequence_fj(const DomainSpec& spec, int j, double p, double /*q*/, double t) {
    if (j < 1) throw ParameterOutOfRange("sequence index must be >= 1");
    if (!(p > 1.0) || t < 0.0) throw ParameterOutOfRange("sequence needs p > 1 and t >= 0");
    const double N = spec.n() - 1 + spec.camber();
    SequenceReport report;
    report.j = j;
    report.norm_p = std::pow(sequence_norm_pp(spec, j, p), 1.0 / p);
    std::vector<double> logs;
    for (int l = 1; l <= j; ++l) {
        const double x = 1.0 / l - 2.0 / p * (N + 1.0) - N;
        logs.push_back(log_shell_integral(log_shell_radius(l + 1), log_shell_radius(l), x + (2.0 + 2.0 * t) * N + 1.0,
                                          2.0 * t, 1));
    }
    report.log_proxy = log_sum_exp(logs);
    report.proxy = std::exp(report.log_proxy);
    return report;
}

namespace {

double rho_factor(const Factor& f, std::span<const cplx> x) {
    double s = 0.0;
    for (int i = 0; i < f.dim; ++i) s += std::norm(x[i]);
    return 1.0 - s;
}

std::vector<double> series_coefficients(const Factor& f, double t, double r) {
    // Coefficients of T applied to the factor kernel at zeta, as a power series in
    // <eta, zeta>; truncated once the terms times r^m fall below 1e-17.
    std::vector<double> b;
    double peak = 0.0;
    for (int m = 0; m < 2'000'000; ++m) {
        double c;
        if (f.disk) {
            const int d = f.jac_exp;
            c = (m + 1.0) * (m + d + 1.0) * beta_fn(m + d + t * d + 1.0, 2.0 * t + 1.0);
        } else {
            const int k = f.dim;
            const double rising = std::exp(std::lgamma(k + 1.0 + m) - std::lgamma(k + 1.0) - std::lgamma(m + 1.0));
            c = rising * (k + m) * beta_fn(k + m, (k + 1) * t + 1.0);
        }
        b.push_back(c);
        const double term = c * std::pow(r, m);
        peak = std::max(peak, term);
        if (m > 8 && term < 1e-17 * peak) break;
    }
    return b;
}

cplx horner(const std::vector<double>& b, cplx x) {
    cplx s = 0.0;
    for (std::size_t i = b.size(); i-- > 0;) s = s * x + b[i];
    return s;
}

/// Real Jacobian of v -> phi_a(v) relative to the normalized ball measure.
double mobius_jacobian(std::span<const cplx> a, std::span<const cplx> v, int dim) {
    double aa = 0.0;
    cplx va = 0.0;
    for (int i = 0; i < dim; ++i) {
        aa += std::norm(a[i]);
        va += v[i] * std::conj(a[i]);
    }
    return std::pow((1.0 - aa) / std::norm(1.0 - va), dim + 1);
}

} // namespace

NecessityReport necessity_probe_gw(const DomainSpec& spec, double p, double q, double t, const CPoint& w,
                                   const NecessityOptions& options) {
    if (w.frame != Frame::H || !contains_H(spec, w)) throw DomainViolation("necessity probe needs a point of H");
    if (!(p > 1.0) || !(q >= p) || t < 0.0) throw ParameterOutOfRange("necessity probe needs 1 < p <= q, t >= 0");
    std::vector<cplx> zeta(spec.n());
    push_forward(spec, w.coords, zeta);
    const double jac2 = std::norm(jacobian_G_raw(spec, zeta));
    const double diag = bergman_diag_pi(spec, zeta);
    const double q_conj = q / (q - 1.0);

    NecessityReport report;
    // |det Psi'(w)|^2 = 1 / |det G'(zeta)|^2.
    report.indicator = std::pow(diag, -t + 1.0 / p - 1.0 / q) * std::pow(jac2, 1.0 + 1.0 / p - 1.0 / q);

    const double radius = std::exp(-options.s);
    double lower = 1.0 / jac2, pairing = 1.0 / jac2;
    double gq = std::pow(jac2, -0.5 * q_conj), tq = std::pow(jac2, -0.5 * q);
    for (const Factor& f : spec.factors()) {
        const auto a = std::span<const cplx>(zeta).subspan(f.offset, f.dim);
        const double r = std::sqrt(1.0 - rho_factor(f, a));
        const double d = f.disk ? f.jac_exp : 0.0;

        // Sublevel part through the Mobius parametrization.
        const FactorRule rule = ball_rule(f.dim, options.sublevel.radial, options.sublevel.angular, radius);
        double part = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const auto v = rule.node(i);
            const auto eta = mobius(a, v);
            const double rho = rho_factor(f, eta);
            const double kernel = std::norm(factor_kernel(f, eta, a));
            double weight = std::pow(rho, f.kernel_exp * t) * kernel;
            if (f.disk) weight *= std::pow(std::norm(eta[0]), (t + 1.0) * d);
            part += rule.weights[i] * weight * mobius_jacobian(a, v, f.dim);
        }
        lower *= part;

        if (f.disk) {
            pairing *= disk_weighted_integral(2.0 * t, (2.0 * t + 2.0) * d, 4.0, r);
            gq *= disk_weighted_integral(0.0, 2.0 * d, 2.0 * q_conj, r);
        } else {
            pairing *= ball_weighted_integral(f.dim, (f.dim + 1.0) * t, 2.0 * (f.dim + 1.0), r);
            gq *= ball_weighted_integral(f.dim, 0.0, (f.dim + 1.0) * q_conj, r);
        }

        // ||T_j F_j||_q^q: integrand depends on eta through eta conj(zeta) only.
        const auto coeffs = series_coefficients(f, t, r);
        const FactorRule disk = graded_disk_rule(std::max(1.0 - r, 1e-12), options.per_panel);
        std::vector<double> values(disk.size());
        parallel_for(disk.size(), [&](std::size_t i) {
            const cplx x = disk.node(i)[0];
            double v = std::pow(std::abs(horner(coeffs, r * x)), q);
            if (f.disk) v *= std::pow(std::norm(x), d);
            else if (f.dim > 1) v *= f.dim * std::pow(1.0 - std::norm(x), f.dim - 1);
            values[i] = disk.weights[i] * v;
        });
        double total = 0.0;
        for (double v : values) total += v;
        tq *= total;
    }
    report.lower = lower;
    report.pairing = pairing;
    report.upper = std::pow(gq, 1.0 / q_conj) * std::pow(tq, 1.0 / q);
    if (!std::isfinite(report.upper) || !std::isfinite(report.lower))
        throw NonFiniteIntegrand("necessity probe integrals are not finite");
    return report;
}

} // namespace hartogs

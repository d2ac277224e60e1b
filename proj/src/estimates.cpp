#include "hartogs/estimates.hpp"

#include "hartogs/errors.hpp"
#include "hartogs/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace hartogs {

namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw NonFiniteIntegrand(std::string(what) + " is not finite");
}

} // namespace

namespace {

/// (1/pi) int_0^pi |1 + y e^{i phi}|^{A-2} d phi.
double reflected_mean(double A, double y) {
    auto f = [&](double phi) { return std::pow(1.0 + y * y + 2.0 * y * std::cos(phi), 0.5 * (A - 2.0)); };
    if (A >= 2.0) return gauss_kronrod<double, 31>::integrate(f, 0.0, std::numbers::pi, 15, 1e-13) / std::numbers::pi;
    thread_local tanh_sinh<double> ts;
    return ts.integrate(f, 0.0, std::numbers::pi, 1e-13) / std::numbers::pi;
}

/// Angular mean with 1 - y^2 supplied separately. Under the harmonic-measure
/// reparametrization of the circle it equals (1-y^2)^{1-A} reflected_mean(A, y).
double angular_mean_gap(double A, double y, double gap) {
    if (y == 0.0) return 1.0;
    return std::exp((1.0 - A) * std::log(gap)) * reflected_mean(A, y);
}

} // namespace

double angular_mean(double A, double y) {
    return angular_mean_gap(A, y, (1.0 - y) * (1.0 + y));
}

double disk_weighted_integral_gap(double U, double c, double A, double gap) {
    if (!(U > -1.0) || !(c > -2.0) || !(gap > 0.0 && gap <= 1.0))
        throw ParameterOutOfRange("disk integral needs U > -1, c > -2, 0 < 1 - r^2 <= 1");
    thread_local tanh_sinh<double> ts;
    const double r2 = 1.0 - gap;
    const double r = std::sqrt(r2);
    // x = |w|^2 on [0, 1/2].
    auto near_zero = [&](double x) {
        if (x <= 0.0) return 0.0;
        return std::pow(1.0 - x, U) * std::pow(x, 0.5 * c) * angular_mean_gap(A, r * std::sqrt(x), 1.0 - r2 * x);
    };
    double total = ts.integrate(near_zero, 0.0, 0.5, 1e-12);

    // 1 - x = gap * s on (0, 1/(2 gap)]; the factor gap^{U+2-A} is pulled out so
    // the integrand stays representable for radii extremely close to 1.
    auto near_one = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double y = gap * s;
        const double w = 1.0 + s * r2;
        return std::pow(s, U) * std::pow(1.0 - y, 0.5 * c) * std::pow(w, 1.0 - A) * reflected_mean(A, r * std::sqrt(1.0 - y));
    };
    const double top = 0.5 / gap;
    std::vector<double> cuts{0.0};
    for (double b = 1.0; b < top; b *= 16.0) cuts.push_back(b);
    cuts.push_back(top);
    double scaled = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) scaled += ts.integrate(near_one, cuts[i], cuts[i + 1], 1e-12);
    total += std::exp((U + 2.0 - A) * std::log(gap)) * scaled;
    check_finite(total, "disk integral");
    return total;
}

double disk_weighted_integral(double U, double c, double A, double r) {
    if (!(r >= 0.0 && r < 1.0)) throw ParameterOutOfRange("disk integral needs 0 <= r < 1");
    return disk_weighted_integral_gap(U, c, A, (1.0 - r) * (1.0 + r));
}

double ball_weighted_integral_gap(int k, double u, double A, double gap) {
    if (k < 1) throw ParameterOutOfRange("ball dimension must be >= 1");
    if (k == 1) return disk_weighted_integral_gap(u, 0.0, A, gap);
    if (!(u > -1.0)) throw ParameterOutOfRange("ball integral needs u > -1");
    // Integrating out the k-1 coordinates orthogonal to z leaves a disk integral.
    const double slice = k * (k - 1) * boost::math::beta(u + 1.0, k - 1.0);
    return slice * disk_weighted_integral_gap(u + k - 1.0, 0.0, A, gap);
}

double ball_weighted_integral(int k, double u, double A, double r) {
    if (!(r >= 0.0 && r < 1.0)) throw ParameterOutOfRange("ball integral needs 0 <= r < 1");
    return ball_weighted_integral_gap(k, u, A, (1.0 - r) * (1.0 + r));
}

std::vector<double> default_probe_radii() {
    return {0.5, 0.9, 0.99, 0.999, 1 - 1e-4, 1 - 1e-5, 1 - 1e-6};
}

void summarize_estimate(EstimateReport& report, double slope_tol) {
    report.max_ratio = report.ratio.empty() ? 0.0 : *std::max_element(report.ratio.begin(), report.ratio.end());
    std::vector<std::size_t> tail;
    std::size_t anchor = 0;
    double best = 1e300;
    for (std::size_t i = 0; i < report.radii.size(); ++i) {
        const double r = report.radii[i];
        if (std::abs(r - 0.9) < best) {
            best = std::abs(r - 0.9);
            anchor = i;
        }
        if (r >= 0.9) tail.push_back(i);
    }
    std::sort(tail.begin(), tail.end(), [&](std::size_t x, std::size_t y) { return report.radii[x] < report.radii[y]; });
    if (tail.size() > kEstimateTailPoints) tail.erase(tail.begin(), tail.end() - kEstimateTailPoints);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i : tail) {
        const double x = -std::log1p(-report.radii[i] * report.radii[i]);
        const double y = std::log(report.ratio[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double count = static_cast<double>(tail.size());
    report.slope = tail.size() >= 2 ? (count * sxy - sx * sy) / (count * sxx - sx * sx) : 0.0;
    const bool capped = report.ratio.empty() || report.max_ratio <= 2.0 * report.ratio[anchor];
    report.bounded = report.slope <= slope_tol && capped;
}

namespace {

template <class Lhs, class RhsExp>
void fill(EstimateReport& report, Lhs lhs, RhsExp exponent, double slope_tol) {
    const std::size_t count = report.radii.size();
    report.lhs.assign(count, 0.0);
    report.rhs.assign(count, 0.0);
    report.ratio.assign(count, 0.0);
    parallel_for(count, [&](std::size_t i) {
        const double r = report.radii[i];
        if (!(r >= 0.0 && r < 1.0)) throw ParameterOutOfRange("probe radius outside [0,1)");
        report.lhs[i] = lhs(r);
        report.rhs[i] = std::exp(exponent * std::log1p(-r * r));
        report.ratio[i] = report.lhs[i] / report.rhs[i];
    });
    summarize_estimate(report, slope_tol);
}

} // namespace

EstimateReport disk_estimate(double a, double u, double c, const std::vector<double>& radii, double rhs_shift,
                             double slope_tol) {
    if (!(a >= 1.0) || !(u > -1.0 && u < 0.0) || !(c > -2.0))
        throw ParameterOutOfRange("disk estimate needs a >= 1, -1 < u < 0, c > -2");
    EstimateReport report;
    report.kind = "disk";
    report.a = a;
    report.u = u;
    report.c = c;
    report.rhs_shift = rhs_shift;
    report.radii = radii;
    fill(report, [&](double r) { return disk_weighted_integral(u, c, 2.0 * a, r); }, -2.0 * a + u + 2.0 + rhs_shift,
         slope_tol);
    return report;
}

EstimateReport ball_estimate(int k, double a, double u, const std::vector<double>& radii, double rhs_shift,
                             double slope_tol) {
    if (k < 1 || !(a >= 1.0) || !(u > -1.0 && u < 0.0))
        throw ParameterOutOfRange("ball estimate needs k >= 1, a >= 1, -1 < u < 0");
    EstimateReport report;
    report.kind = "ball";
    report.a = a;
    report.u = u;
    report.k = k;
    report.rhs_shift = rhs_shift;
    report.radii = radii;
    fill(report, [&](double r) { return ball_weighted_integral(k, u, (k + 1) * a, r); },
         u + (k + 1) * (1.0 - a) + rhs_shift, slope_tol);
    return report;
}

Rational moment_oracle_disk(const Rational& e) {
    if (e <= -1) throw Divergent("disk moment diverges for exponent " + to_string(e));
    return Rational(1) / (e + 1);
}

Rational moment_oracle_ball(const std::vector<int>& beta) {
    if (beta.empty()) throw ParameterOutOfRange("ball moment needs k >= 1");
    BigInt num = 1, den = 1;
    const int k = static_cast<int>(beta.size());
    for (int i = 2; i <= k; ++i) num *= i;
    int total = 0;
    for (int b : beta) {
        if (b < 0) throw ParameterOutOfRange("ball moment needs nonnegative exponents");
        for (int i = 2; i <= b; ++i) num *= i;
        total += b;
    }
    for (int i = 2; i <= k + total; ++i) den *= i;
    return Rational(num, den);
}

void write_csv(std::ostream& out, const EstimateReport& report, const std::string& fingerprint) {
    out << "spec,kind,a,u,c,k,radius,lhs,rhs,ratio\n";
    out.precision(17);
    for (std::size_t i = 0; i < report.radii.size(); ++i) {
        out << fingerprint << ',' << report.kind << ',' << report.a << ',' << report.u << ',' << report.c << ','
            << report.k << ',' << report.radii[i] << ',' << report.lhs[i] << ',' << report.rhs[i] << ','
            << report.ratio[i] << '\n';
    }
}

} // namespace hartogs

#include "hartogs/errors.hpp"
#include "hartogs/estimates.hpp"

#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <sstream>

using namespace hartogs;

namespace {

// Power-series oracle for I(U, c, A, r) = int_D (1-|w|^2)^U |w|^c |1 - r w|^{-A} dv(w):
// sum_m ((A/2)_m / m!)^2 r^{2m} B(m + c/2 + 1, U + 1).
double disk_series_oracle(double U, double c, double A, double r) {
    double sum = 0.0, coef = 1.0;
    for (int m = 0; m < 20000; ++m) {
        if (m > 0) coef *= (A / 2.0 + m - 1.0) / m;
        const double term = coef * coef * std::pow(r, 2 * m) * boost::math::beta(m + c / 2.0 + 1.0, U + 1.0);
        sum += term;
        if (m > 50 && term < 1e-18 * sum) break;
    }
    return sum;
}

// Two-dimensional midpoint oracle over the unit ball of C^2, normalized.
double ball2_moment_oracle(int b1, int b2) {
    // |w1|^{2b1} |w2|^{2b2} with |w_i|^2 = s_i, uniform on the simplex times 2
    const int n = 2000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n - i; ++j) {
            const double x = (i + 1.0 / 3.0) / n, y = (j + 1.0 / 3.0) / n;
            if (x + y >= 1.0) continue;
            s += std::pow(x, b1) * std::pow(y, b2);
        }
    }
    return 2.0 * s / (static_cast<double>(n) * n);
}

} // namespace

TEST_SUITE("estimates") {

TEST_CASE("moment oracles") {
    CHECK(moment_oracle_disk(0) == 1);
    CHECK(moment_oracle_disk(1) == Rational(1, 2));
    CHECK(moment_oracle_disk(Rational(-1, 2)) == 2);
    CHECK_THROWS_AS(moment_oracle_disk(-1), Divergent);
    CHECK(to_double(moment_oracle_ball({1, 0})) == doctest::Approx(ball2_moment_oracle(1, 0)).epsilon(1e-3));
    CHECK(to_double(moment_oracle_ball({1, 2})) == doctest::Approx(ball2_moment_oracle(1, 2)).epsilon(1e-3));
    CHECK(moment_oracle_ball({1, 0}) == Rational(1, 3));
}

TEST_CASE("weighted disk integral against its series") {
    for (double U : {-0.5, -0.25, 0.0, 0.7})
        for (double c : {-1.0, 0.0, 1.0, 3.0})
            for (double A : {2.0, 3.0, 4.0})
                for (double r : {0.0, 0.3, 0.9, 0.99}) {
                    const double want = disk_series_oracle(U, c, A, r);
                    CHECK(disk_weighted_integral(U, c, A, r) == doctest::Approx(want).epsilon(1e-10));
                }
    // centre value for U = -1/2, c = 0
    CHECK(disk_weighted_integral(-0.5, 0.0, 2.0, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    const double gap = 1e-6;
    CHECK(disk_weighted_integral_gap(-0.5, 0.0, 2.0, gap) ==
          doctest::Approx(disk_weighted_integral(-0.5, 0.0, 2.0, std::sqrt(1.0 - gap))).epsilon(1e-8));
}

TEST_CASE("ball of dimension one is the disk") {
    for (double r : {0.0, 0.5, 0.95})
        CHECK(ball_weighted_integral(1, -0.5, 2.0, r) == doctest::Approx(disk_weighted_integral(-0.5, 0.0, 2.0, r)).epsilon(1e-12));
    const auto radii = std::vector<double>{0.5, 0.9, 0.99};
    const auto b = ball_estimate(1, 1.0, -0.5, radii), d = disk_estimate(1.0, -0.5, 0.0, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) CHECK(b.ratio[i] == doctest::Approx(d.ratio[i]).epsilon(1e-10));
}

TEST_CASE("ball integral against a direct sum") {
    // For k = 2 and A = 3a the integrand expands as sum_m ((A/2)_m/m!)^2 ... ; test r = 0 and a mid value
    // against the centre closed form int (1-|w|^2)^u dv = 2 B(2, u + 1) for k = 2.
    CHECK(ball_weighted_integral(2, -0.5, 3.0, 0.0) == doctest::Approx(2.0 * boost::math::beta(2.0, 0.5)).epsilon(1e-12));
    // k = 2, u = 0, A = 3: int |1 - <w, z>|^{-3} dv = sum_m ((3/2)_m / m!)^2 ... compared to direct radial-angular form
    const double r = 0.6;
    double series = 0.0, coef = 1.0;
    for (int m = 0; m < 400; ++m) {
        if (m > 0) coef *= (1.5 + m - 1.0) / m;
        // int_{B^2} |<w,e1>|^{2m} dv = m! 1! / (m + 2)! * 2 = 2 / ((m + 1)(m + 2))
        series += coef * coef * std::pow(r, 2 * m) * 2.0 / ((m + 1.0) * (m + 2.0));
    }
    CHECK(ball_weighted_integral(2, 0.0, 3.0, r) == doctest::Approx(series).epsilon(1e-10));
}

TEST_CASE("stated parameter sets stay bounded") {
    const auto radii = default_probe_radii();
    for (const auto& rep : {disk_estimate(1.0, -0.5, 0.0, radii), disk_estimate(2.0, -0.25, 1.0, radii),
                            ball_estimate(2, 1.0, -0.5, radii), ball_estimate(2, 1.5, -0.3, radii)}) {
        CHECK(rep.bounded);
        CHECK(rep.slope <= kEstimateSlopeTol);
        for (std::size_t i = 0; i < rep.radii.size(); ++i) {
            CHECK(rep.lhs[i] > 0.0);
            CHECK(rep.rhs[i] > 0.0);
        }
    }
}

TEST_CASE("sharpened exponents are detected") {
    const auto radii = default_probe_radii();
    const auto d = disk_estimate(1.0, -0.5, 0.0, radii, 0.1);
    CHECK_FALSE(d.bounded);
    CHECK(d.slope > 0.08);
    const auto b = ball_estimate(2, 1.5, -0.3, radii, 0.1);
    CHECK_FALSE(b.bounded);
}

TEST_CASE("parameter ranges") {
    CHECK_THROWS_AS(disk_estimate(0.5, -0.5, 0.0, {0.5}), ParameterOutOfRange);
    CHECK_THROWS_AS(disk_estimate(1.0, 0.0, 0.0, {0.5}), ParameterOutOfRange);
    CHECK_THROWS_AS(disk_estimate(1.0, -0.5, -2.0, {0.5}), ParameterOutOfRange);
    CHECK_THROWS_AS(ball_estimate(0, 1.0, -0.5, {0.5}), ParameterOutOfRange);
    CHECK_THROWS_AS(ball_estimate(2, 1.0, -1.0, {0.5}), ParameterOutOfRange);
}

TEST_CASE("estimate csv rows carry the fingerprint") {
    std::ostringstream out;
    write_csv(out, disk_estimate(1.0, -0.5, 0.0, {0.5, 0.9}), "n=2;partition=1;b=1");
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line.find("radius") != std::string::npos);
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("n=2;partition=1;b=1,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 2);
}

}

#include "hartogs/basis.hpp"
#include "hartogs/errors.hpp"
#include "hartogs/parallel.hpp"
#include "hartogs/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace hartogs;

namespace {

// Composite midpoint rule for the normalized radial moment 2 int_0^1 r^{2e+1} dr.
double radial_moment_bruteforce(double e) {
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) / n;
        s += 2.0 * std::pow(r, 2.0 * e + 1.0) / n;
    }
    return s;
}

} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss legendre integrates polynomials exactly") {
    const auto rule = gauss_legendre(6, 0.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 11);
    CHECK(s == doctest::Approx(std::pow(2.0, 12) / 12.0).epsilon(1e-13));
}

TEST_CASE("grid on Pi integrates moments") {
    const auto spec = make_domain({1}, 2, 1);
    const auto grid = grid_Pi(spec, 8, 8);
    CHECK(std::abs(grid.measure_total() - 1.0) < 1e-10);
    CHECK(std::abs(integrate_Pi([](std::span<const cplx>) { return cplx(1.0); }, grid) - 1.0) < 1e-10);
    const cplx m = integrate_Pi([](std::span<const cplx> e) { return cplx(std::norm(e[1])); }, grid);
    CHECK(std::abs(m - radial_moment_bruteforce(1.0)) < 1e-9);
    CHECK(std::abs(m - 0.5) < 1e-10);
    CHECK(std::abs(integrate_Pi([](std::span<const cplx> e) { return e[1]; }, grid)) < 1e-10);
    for (std::size_t i = 0; i < grid.size(); ++i) REQUIRE(contains_Pi(spec, grid.point(i)));
}

TEST_CASE("ball rule weights and moments") {
    for (int dim : {1, 2, 3}) {
        const auto rule = ball_rule(dim, 6, 6, 0.5);
        double s = 0.0, m = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            s += rule.weights[i];
            m += rule.weights[i] * std::norm(rule.node(i)[0]);
        }
        CHECK(s == doctest::Approx(std::pow(0.25, dim)).epsilon(1e-12));
        // int_{rB} |w_1|^2 = r^{2 dim + 2} / (dim + 1) under the normalized measure of B
        CHECK(m == doctest::Approx(std::pow(0.5, 2 * dim + 2) / (dim + 1)).epsilon(1e-12));
    }
}

TEST_CASE("graded disk rule covers the disk") {
    for (double scale : {0.5, 1e-3, 1e-8}) {
        const auto rule = graded_disk_rule(scale, 8);
        double s = 0.0, m = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            s += rule.weights[i];
            m += rule.weights[i] * std::pow(std::norm(rule.node(i)[0]), 3);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("pullback volumes") {
    const auto g1 = grid_Pi(make_domain({1}, 2, 1), 8, 8);
    const auto one = [](std::span<const cplx>) { return cplx(1.0); };
    CHECK(std::abs(integrate_H(make_domain({1}, 2, 1), one, g1) - 0.5) < 1e-12);
    CHECK(std::abs(integrate_H(make_domain({1}, 2, 2), one, g1) - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(integrate_H(make_domain({1}, 2, 1), [](std::span<const cplx> z) { return z[1]; }, g1)) < 1e-12);
}

TEST_CASE("pullback matches closed-form monomial norms") {
    for (const auto& spec : {make_domain({1}, 2, 1), make_domain({1}, 2, 2)}) {
        const auto grid = monomial_grid(spec, 4);
        for (const auto& alpha : enumerate_basis(spec, 4)) {
            const cplx v = integrate_H(spec, [&](std::span<const cplx> z) { return cplx(std::norm(eval_monomial(alpha, z))); }, grid);
            CHECK(v.real() == doctest::Approx(monomial_norm_sq(spec, alpha).value).epsilon(1e-9));
        }
    }
}

TEST_CASE("grid refinement converges at Gauss order") {
    const auto spec = make_domain({1}, 2, 1);
    // |eta_2|^{1/2} is not polynomial in |eta|^2, so low orders show the rate
    auto f = [](std::span<const cplx> e) { return cplx(std::pow(std::norm(e[1]), 1.25) * std::exp(std::norm(e[0]))); };
    const double exact = (1.0 / 2.25) * (std::exp(1.0) - 1.0);
    const double e2 = std::abs(integrate_Pi(f, grid_Pi(spec, 2, 4)) - exact);
    const double e4 = std::abs(integrate_Pi(f, grid_Pi(spec, 4, 4)) - exact);
    CHECK(e4 * 4.0 < e2);
}

TEST_CASE("monte carlo determinism and consistency") {
    const auto spec = make_domain({1}, 2, 1);
    const auto a = montecarlo_Pi(spec, 1000, 42), b = montecarlo_Pi(spec, 1000, 42);
    CHECK(a == b);
    CHECK(a.kind() == SampleKind::MonteCarlo);
    CHECK(std::abs(integrate_Pi([](std::span<const cplx>) { return cplx(1.0); }, a) - 1.0) < 1e-12);
    const auto big = montecarlo_Pi(spec, 1000000, 3);
    const FunctionPi f = [](std::span<const cplx> e) { return cplx(std::norm(e[0])); };
    const double se = montecarlo_stderr(f, big);
    CHECK(std::abs(integrate_Pi(f, big).real() - 0.5) < 3.0 * se);
    const auto grid = grid_Pi(spec, 8, 8);
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            const FunctionPi g = [=](std::span<const cplx> e) {
                return cplx(std::pow(std::norm(e[0]), p) * std::pow(std::norm(e[1]), q));
            };
            const auto mc = montecarlo_Pi(spec, 20000, 100 + 3 * p + q);
            CHECK(std::abs(integrate_Pi(g, mc).real() - integrate_Pi(g, grid).real()) <= 4.0 * montecarlo_stderr(g, mc) + 1e-12);
        }
    }
}

TEST_CASE("errors") {
    const auto spec = make_domain({1}, 3, 1);
    CHECK_THROWS_AS(grid_Pi(spec, 64, 64, 1000), ResourceLimit);
    const auto grid = grid_Pi(make_domain({1}, 2, 1), 4, 4);
    CHECK_THROWS_AS(integrate_Pi([](std::span<const cplx>) { return cplx(NAN); }, grid), NonFiniteIntegrand);
}

TEST_CASE("sums do not depend on the thread count") {
    const auto spec = make_domain({1}, 2, 1);
    const auto grid = grid_Pi(spec, 32, 32);
    const FunctionH f = [](std::span<const cplx> z) { return std::exp(z[0] * std::conj(z[1])); };
    const int saved = thread_count();
    set_thread_count(1);
    const cplx one = integrate_H(spec, f, grid);
    set_thread_count(4);
    const cplx four = integrate_H(spec, f, grid);
    set_thread_count(saved);
    CHECK(one == four);
}

TEST_CASE("csv export") {
    const auto grid = grid_Pi(make_domain({1}, 2, 1), 2, 4);
    std::ostringstream out;
    write_csv(out, grid);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(grid.size() + 1));
    CHECK(text.find('\r') == std::string::npos);
}

}

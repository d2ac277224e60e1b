#include "hartogs/domain.hpp"
#include "hartogs/errors.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace hartogs;

namespace {

// Complex Jacobian determinant of G by central differences.
cplx fd_jacobian_det(const DomainSpec& spec, const std::vector<cplx>& eta) {
    const int n = spec.n();
    Eigen::MatrixXcd J(n, n);
    const double h = 1e-6;
    for (int j = 0; j < n; ++j) {
        auto plus = eta, minus = eta;
        plus[j] += h;
        minus[j] -= h;
        std::vector<cplx> zp(n), zm(n);
        pull_back(spec, plus, zp);
        pull_back(spec, minus, zm);
        for (int i = 0; i < n; ++i) J(i, j) = (zp[i] - zm[i]) / (2.0 * h);
    }
    return J.determinant();
}

std::vector<cplx> random_eta(const DomainSpec& spec, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 0.9), ph(0.0, 6.283185307179586);
    std::vector<cplx> eta(spec.n());
    for (const Factor& f : spec.factors()) {
        const double r = u(rng) / std::sqrt(static_cast<double>(f.dim));
        for (int i = 0; i < f.dim; ++i) eta[f.offset + i] = std::polar(r, ph(rng));
    }
    return eta;
}

} // namespace

TEST_SUITE("domain") {

TEST_CASE("construction derives k and the camber constant") {
    auto a = make_domain({1}, 2, 1);
    CHECK(a.k() == 1);
    CHECK(a.camber() == 0);
    CHECK(make_domain({1}, 2, 2).camber() == 1);
    auto c = make_domain({2, 1}, 5, 3);
    CHECK(c.k() == 3);
    CHECK(c.camber() == 6);
    CHECK(a.fingerprint() == "n=2;partition=1;b=1");
    CHECK(c.fingerprint() == "n=5;partition=2 1;b=3");
}

TEST_CASE("invalid shapes are rejected") {
    CHECK_THROWS_AS(make_domain({2}, 2, 1), InvalidPartition);
    CHECK_THROWS_AS(make_domain({0}, 3, 1), InvalidPartition);
    CHECK_THROWS_AS(make_domain({}, 3, 1), InvalidPartition);
    CHECK_THROWS_AS(make_domain({1}, 2, 0), InvalidExponent);
}

TEST_CASE("json round trip") {
    const auto spec = make_domain({2, 1}, 5, 3);
    nlohmann::json j = spec;
    CHECK(domain_from_json(j) == spec);
    CHECK_THROWS_AS(domain_from_json(nlohmann::json{{"n", 2}}), ConfigError);
}

TEST_CASE("membership") {
    const auto s1 = make_domain({1}, 2, 1), s2 = make_domain({1}, 2, 2);
    CHECK(contains_H(s1, make_point({0.25, 0.5}, Frame::H)));
    CHECK_FALSE(contains_H(s2, make_point({0.25, 0.5}, Frame::H)));
    CHECK(contains_H(s2, make_point({0.2, 0.5}, Frame::H)));
    CHECK(contains_Pi(s1, make_point({0.5, 0.5}, Frame::Pi)));
    CHECK_FALSE(contains_Pi(s1, make_point({0.5, 0.0}, Frame::Pi)));
    const auto s4 = make_domain({2, 1}, 4, 1);
    CHECK(contains_Pi(s4, make_point({0.6, 0.7, 0.5, 0.5}, Frame::Pi)));
    CHECK_FALSE(contains_Pi(s4, make_point({0.8, 0.7, 0.5, 0.5}, Frame::Pi)));
}

TEST_CASE("psi and its inverse on fixed points") {
    auto near = [](const CPoint& p, std::vector<cplx> want) {
        REQUIRE(p.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(p[i] - want[i]) < 1e-14);
    };
    const auto s1 = make_domain({1}, 2, 1), s2 = make_domain({1}, 2, 2), s3 = make_domain({1}, 3, 1);
    near(psi_forward(s1, make_point({0.25, 0.5}, Frame::H)), {0.5, 0.5});
    near(psi_forward(s2, make_point({0.2, 0.5}, Frame::H)), {0.8, 0.5});
    near(psi_forward(s3, make_point({0.1, 0.4, 0.8}, Frame::H)), {0.25, 0.5, 0.8});
    near(psi_inverse(s1, make_point({0.5, 0.5}, Frame::Pi)), {0.25, 0.5});
    near(psi_inverse(s2, make_point({0.8, 0.5}, Frame::Pi)), {0.2, 0.5});
    near(psi_inverse(s3, make_point({0.25, 0.5, 0.8}, Frame::Pi)), {0.1, 0.4, 0.8});
    CHECK(psi_forward(s1, make_point({0.25, 0.5}, Frame::H)).frame == Frame::Pi);
    CHECK_THROWS_AS(psi_forward(s1, make_point({0.6, 0.5}, Frame::H)), DomainViolation);
    CHECK_THROWS_AS(psi_inverse(s1, make_point({0.5, 0.0}, Frame::Pi)), DomainViolation);
}

TEST_CASE("jacobian values") {
    CHECK(std::abs(jacobian_G(make_domain({1}, 2, 1), make_point({0.5, 0.5}, Frame::Pi)) - 0.5) < 1e-15);
    CHECK(std::abs(jacobian_G(make_domain({1}, 2, 2), make_point({0.8, 0.5}, Frame::Pi)) - 0.25) < 1e-15);
    const auto s = make_domain({2, 1}, 5, 3);
    std::vector<cplx> ones(5, 0.0);
    ones[3] = ones[4] = 1.0;
    CHECK(std::abs(jacobian_G_raw(s, ones) - 1.0) < 1e-15);
}

TEST_CASE("jacobian matches finite differences and round trips hold") {
    std::mt19937_64 rng(7);
    for (const auto& spec : {make_domain({1}, 2, 1), make_domain({1}, 2, 3), make_domain({2}, 4, 2),
                             make_domain({1, 2}, 5, 2)}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto eta = random_eta(spec, rng);
            const CPoint pe = make_point(eta, Frame::Pi);
            REQUIRE(contains_Pi(spec, pe));
            const CPoint z = psi_inverse(spec, pe);
            CHECK(contains_H(spec, z));
            const CPoint back = psi_forward(spec, z);
            for (int i = 0; i < spec.n(); ++i) CHECK(std::abs(back[i] - eta[i]) <= 1e-12 * std::max(1.0, std::abs(eta[i])));
            if (trial < 20) {
                const cplx fd = fd_jacobian_det(spec, eta);
                CHECK(std::abs(fd - jacobian_G(spec, pe)) < 1e-6 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST_CASE("theta map") {
    const auto s1 = make_domain({1}, 2, 1);
    const CPoint z = make_point({cplx(0.1, 0.2), cplx(0.3, -0.4)}, Frame::H);
    const CPoint t1 = theta_map(s1, z);
    for (int i = 0; i < 2; ++i) CHECK(t1[i] == z[i]);
    const CPoint t2 = theta_map(make_domain({1}, 2, 2), make_point({0.2, 0.5}, Frame::H));
    CHECK(std::abs(t2[0] - 0.4) < 1e-15);
    CHECK(contains_H(s1, t2));
    const CPoint t3 = theta_map(make_domain({1}, 2, 3), make_point({0.1, 0.5}, Frame::H));
    CHECK(std::abs(t3[0] - 0.4) < 1e-15);
    CHECK_THROWS_AS(theta_map(make_domain({1}, 2, 2), make_point({0.25, 0.5}, Frame::H)), DomainViolation);
}

TEST_CASE("projection interval endpoints are exact") {
    CHECK(projection_interval(make_domain({1}, 2, 1)) == std::pair{Rational(4, 3), Rational(4)});
    CHECK(projection_interval(make_domain({1}, 2, 2)) == std::pair{Rational(3, 2), Rational(3)});
    for (int n = 2; n <= 8; ++n) {
        const auto [lo, hi] = projection_interval(make_domain({1}, n, 1));
        CHECK(lo == Rational(2 * n, n + 1));
        CHECK(hi == Rational(2 * n, n - 1));
    }
    for (int np = 1; np <= 5; ++np) {
        for (int b = 1; b <= 6; ++b) {
            const auto [lo, hi] = projection_interval(make_domain({np}, np + 1, b));
            CHECK(lo == Rational(2 * np * b + 2, np * b + 2));
            CHECK(hi == Rational(2 * np * b + 2, np * b));
        }
    }
}

TEST_CASE("interval brackets 2 and narrows monotonically in b") {
    for (const auto& part : std::vector<std::vector<int>>{{1}, {2}, {1, 1}, {2, 1}}) {
        int k = 0;
        for (int v : part) k += v;
        for (int n = k + 1; n <= k + 3; ++n) {
            Rational prev_lo = 0, prev_hi = 1000;
            for (int b = 1; b <= 50; ++b) {
                const auto [lo, hi] = projection_interval(make_domain(part, n, b));
                CHECK(lo < 2);
                CHECK(hi > 2);
                CHECK(lo > prev_lo);
                CHECK(hi < prev_hi);
                prev_lo = lo;
                prev_hi = hi;
            }
            CHECK(to_double(prev_hi - prev_lo) < 0.2);
        }
    }
}

}

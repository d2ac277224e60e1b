#include "hartogs/basis.hpp"
#include "hartogs/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace hartogs;

namespace {

// Integrability inequalities written directly on the 1-based index m = k+1..n.
bool admissible_oracle(const DomainSpec& spec, const std::vector<int>& a) {
    const int k = spec.k(), b = spec.b();
    long ball = 0;
    for (int j = 0; j < k; ++j) ball += a[j];
    for (int m = k + 1; m <= spec.n(); ++m) {
        long head = 0;
        for (int j = 0; j < m; ++j) head += a[j];
        if (!(head + (b - 1) * ball > (1 - b) * k - m)) return false;
    }
    return true;
}

// Every vector in N^k x Z^{n-k} with entries bounded by `bound`.
std::vector<std::vector<int>> box(const DomainSpec& spec, int bound) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < spec.n(); ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& v : out) {
            for (int e = i < spec.k() ? 0 : -bound; e <= bound; ++e) {
                auto w = v;
                w.push_back(e);
                next.push_back(w);
            }
        }
        out = next;
    }
    return out;
}

} // namespace

TEST_SUITE("basis") {

TEST_CASE("admissibility examples") {
    const auto s1 = make_domain({1}, 2, 1), s2 = make_domain({1}, 2, 2);
    CHECK(is_admissible(s1, {{0, -1}}));
    CHECK_FALSE(is_admissible(s1, {{0, -2}}));
    CHECK(is_admissible(s2, {{0, -2}}));
    CHECK_FALSE(is_admissible(s2, {{0, -3}}));
    CHECK(is_admissible(make_domain({2, 1}, 5, 3), {{0, 0, 0, 0, 0}}));
    CHECK_THROWS_AS(is_admissible(s1, {{-1, 0}}), MalformedIndex);
    CHECK_THROWS_AS(is_admissible(s1, {{0, 0, 0}}), MalformedIndex);
}

TEST_CASE("admissibility agrees with the inequality system and with divergence") {
    for (const auto& spec : {make_domain({1}, 2, 1), make_domain({1}, 2, 3), make_domain({1}, 3, 2),
                             make_domain({2}, 3, 1), make_domain({1, 1}, 3, 2)}) {
        for (const auto& v : box(spec, spec.n() == 2 ? 5 : 4)) {
            const MultiIndex a{v};
            const bool adm = admissible_oracle(spec, v);
            CHECK(is_admissible(spec, a) == adm);
            const auto e = norm_exponents(spec, a);
            const bool convergent = std::all_of(e.begin(), e.end(), [](long long x) { return x > -1; });
            CHECK(convergent == adm);
            if (adm) CHECK(monomial_norm_sq(spec, a).exact > 0);
            else CHECK_THROWS_AS(monomial_norm_sq(spec, a), NotAdmissible);
        }
    }
}

TEST_CASE("witness index is admissible everywhere") {
    for (int n = 2; n <= 5; ++n)
        for (int k = 1; k < n; ++k)
            for (int b = 1; b <= 4; ++b) {
                const auto spec = make_domain({k}, n, b);
                std::vector<int> v(n, 0);
                v.back() = 1 - n - spec.camber();
                CHECK(is_admissible(spec, {v}));
                v.back() -= 1;
                CHECK_FALSE(is_admissible(spec, {v}));
            }
}

TEST_CASE("enumeration") {
    const auto s1 = make_domain({1}, 2, 1);
    const auto e1 = enumerate_basis(s1, 1);
    CHECK(e1.size() == 6);
    CHECK(enumerate_basis(s1, 0) == std::vector<MultiIndex>{{{0, 0}}});
    for (const auto& spec : {make_domain({1}, 2, 2), make_domain({2}, 3, 1)}) {
        const auto list = enumerate_basis(spec, 2);
        std::size_t count = 0;
        for (const auto& v : box(spec, 2)) count += admissible_oracle(spec, v);
        CHECK(list.size() == count);
        for (std::size_t i = 1; i < list.size(); ++i) {
            auto weight = [](const MultiIndex& a) {
                int s = 0;
                for (int x : a.entries) s += std::abs(x);
                return s;
            };
            CHECK(weight(list[i - 1]) <= weight(list[i]));
        }
    }
}

TEST_CASE("closed-form norms") {
    const auto s1 = make_domain({1}, 2, 1), s2 = make_domain({1}, 2, 2);
    CHECK(monomial_norm_sq(s1, {{0, 0}}).exact == Rational(1, 2));
    CHECK(monomial_norm_sq(s1, {{0, -1}}).exact == Rational(1));
    CHECK(monomial_norm_sq(s2, {{0, -2}}).exact == Rational(1));
    // |z_1|^2 on {|z_1| < |z_2| < 1}: int |z_2|^4 / 2 dv(z_2) = 1/6
    CHECK(monomial_norm_sq(s1, {{1, 0}}).exact == Rational(1, 6));
    CHECK(monomial_norm_sq_value(s1, {{1, 0}}) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("orthogonality and norms against quadrature") {
    for (const auto& [spec, bound] : std::vector<std::pair<DomainSpec, int>>{
             {make_domain({1}, 2, 1), 2}, {make_domain({1}, 2, 2), 3}, {make_domain({2}, 3, 1), 2}}) {
        const auto report = check_orthogonality(spec, bound, monomial_grid(spec, bound));
        CHECK(report.max_offdiag < 1e-8);
        CHECK(report.max_diag_rel_err < 1e-6);
        for (std::size_t i = 0; i < report.basis.size(); ++i) {
            if (report.basis[i] == MultiIndex{std::vector<int>(spec.n(), 0)})
                CHECK(report.diagonal[i] == doctest::Approx(monomial_norm_sq_value(spec, report.basis[i])));
        }
    }
}

TEST_CASE("basis csv") {
    std::ostringstream out;
    write_basis_csv(out, make_domain({1}, 2, 1), 1);
    const std::string text = out.str();
    CHECK(text.rfind("spec,", 0) == 0);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.rfind("n=2;partition=1;b=1,", 0) == 0);
        ++rows;
    }
    CHECK(rows >= 6);
}

}

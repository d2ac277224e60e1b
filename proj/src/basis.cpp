#include "hartogs/basis.hpp"

#include "hartogs/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace hartogs {

std::string to_string(const MultiIndex& alpha) {
    std::string s = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(alpha[i]);
    }
    return s + ")";
}

cplx ipow(cplx base, long long exponent) {
    if (exponent < 0) return 1.0 / ipow(base, -exponent);
    cplx result = 1.0;
    while (exponent) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

namespace {

void check_shape(const DomainSpec& spec, const MultiIndex& alpha) {
    if (alpha.size() != static_cast<std::size_t>(spec.n()))
        throw MalformedIndex("index " + to_string(alpha) + " has wrong length");
    for (int i = 0; i < spec.k(); ++i)
        if (alpha[i] < 0) throw MalformedIndex("negative ball exponent in " + to_string(alpha));
}

BigInt factorial(long long m) {
    BigInt r = 1;
    for (long long i = 2; i <= m; ++i) r *= i;
    return r;
}

} // namespace

std::vector<long long> pullback_exponents(const DomainSpec& spec, const MultiIndex& alpha) {
    check_shape(spec, alpha);
    const int k = spec.k();
    long long ball_total = 0;
    for (int i = 0; i < k; ++i) ball_total += alpha[i];
    std::vector<long long> e;
    long long running = ball_total;
    for (int m = k; m < spec.n(); ++m) {
        running += alpha[m];
        e.push_back(running + static_cast<long long>(spec.b() - 1) * ball_total);
    }
    return e;
}

std::vector<long long> norm_exponents(const DomainSpec& spec, const MultiIndex& alpha) {
    auto e = pullback_exponents(spec, alpha);
    for (int m = spec.k(); m < spec.n(); ++m) e[m - spec.k()] += spec.jacobian_exponent(m);
    return e;
}

bool is_admissible(const DomainSpec& spec, const MultiIndex& alpha) {
    const auto e = norm_exponents(spec, alpha);
    return std::all_of(e.begin(), e.end(), [](long long v) { return v >= 0; });
}

std::vector<MultiIndex> enumerate_basis(const DomainSpec& spec, int bound) {
    if (bound < 0) throw ParameterOutOfRange("bound must be >= 0");
    const int n = spec.n();
    const int k = spec.k();
    std::vector<MultiIndex> out;
    MultiIndex alpha{std::vector<int>(n)};
    for (int i = 0; i < n; ++i) alpha.entries[i] = i < k ? 0 : -bound;
    while (true) {
        if (is_admissible(spec, alpha)) out.push_back(alpha);
        int d = n - 1;
        while (d >= 0) {
            if (++alpha.entries[d] <= bound) break;
            alpha.entries[d] = d < k ? 0 : -bound;
            --d;
        }
        if (d < 0) break;
    }
    std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        auto grade = [](const MultiIndex& m) {
            long long g = 0;
            for (int v : m.entries) g += std::abs(v);
            return g;
        };
        const long long ga = grade(a), gb = grade(b);
        if (ga != gb) return ga < gb;
        return a.entries < b.entries;
    });
    return out;
}

MonomialNorm monomial_norm_sq(const DomainSpec& spec, const MultiIndex& alpha) {
    const auto e = norm_exponents(spec, alpha);
    for (long long v : e)
        if (v < 0) throw NotAdmissible(to_string(alpha) + " is not square integrable");
    Rational exact = 1;
    for (const Factor& f : spec.factors()) {
        if (f.disk) continue;
        BigInt num = factorial(f.dim);
        long long total = 0;
        for (int i = 0; i < f.dim; ++i) {
            num *= factorial(alpha[f.offset + i]);
            total += alpha[f.offset + i];
        }
        exact *= Rational(num, factorial(f.dim + total));
    }
    for (long long v : e) exact /= (v + 1);
    return {exact, monomial_norm_sq_value(spec, alpha)};
}

double monomial_norm_sq_value(const DomainSpec& spec, const MultiIndex& alpha) {
    const auto e = norm_exponents(spec, alpha);
    double log_norm = 0.0;
    for (long long v : e) {
        if (v < 0) throw NotAdmissible(to_string(alpha) + " is not square integrable");
        log_norm -= std::log(static_cast<double>(v + 1));
    }
    for (const Factor& f : spec.factors()) {
        if (f.disk) continue;
        double total = 0;
        log_norm += std::lgamma(f.dim + 1.0);
        for (int i = 0; i < f.dim; ++i) {
            log_norm += std::lgamma(alpha[f.offset + i] + 1.0);
            total += alpha[f.offset + i];
        }
        log_norm -= std::lgamma(f.dim + total + 1.0);
    }
    return std::exp(log_norm);
}

cplx eval_monomial(const MultiIndex& alpha, std::span<const cplx> z) {
    cplx v = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] != 0) v *= ipow(z[i], alpha[i]);
    return v;
}

SampleSet monomial_grid(const DomainSpec& spec, int bound, std::size_t node_cap) {
    const auto basis = enumerate_basis(spec, bound);
    std::vector<FactorRule> rules;
    for (const Factor& f : spec.factors()) {
        if (f.disk) {
            const int m = f.offset - spec.k();
            long long lo = 0, hi = 0, top = 0;
            bool first = true;
            for (const auto& a : basis) {
                const long long E = pullback_exponents(spec, a)[m];
                const long long e = norm_exponents(spec, a)[m];
                lo = first ? E : std::min(lo, E);
                hi = first ? E : std::max(hi, E);
                top = std::max(top, e);
                first = false;
            }
            const int angular = std::max<int>(4, static_cast<int>(hi - lo) + 1);
            const int radial = std::max<int>(2, static_cast<int>((top + 2) / 2) + 1);
            rules.push_back(ball_rule(1, radial, angular));
        } else {
            const int angular = std::max(4, bound + 1);
            const int radial = std::max(2, (2 * bound * f.dim + f.dim + 2) / 2 + 1);
            rules.push_back(ball_rule(f.dim, radial, angular));
        }
    }
    return tensor_grid(spec, rules, node_cap);
}

OrthogonalityReport check_orthogonality(const DomainSpec& spec, int bound, const SampleSet& samples) {
    OrthogonalityReport report;
    report.basis = enumerate_basis(spec, bound);
    const std::size_t dim = report.basis.size();
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(dim, dim);

    constexpr std::size_t block = 2048;
    std::vector<cplx> z(spec.n());
    for (std::size_t start = 0; start < samples.size(); start += block) {
        const std::size_t rows = std::min(block, samples.size() - start);
        Eigen::MatrixXcd values(rows, dim);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto eta = samples.point(start + r);
            pull_back(spec, eta, z);
            const double scale = std::sqrt(samples.weight(start + r)) * std::abs(jacobian_G_raw(spec, eta));
            for (std::size_t a = 0; a < dim; ++a) {
                const cplx v = eval_monomial(report.basis[a], z) * scale;
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw NonFiniteIntegrand("monomial " + to_string(report.basis[a]) + " not finite on samples");
                values(r, a) = v;
            }
        }
        gram.noalias() += values.adjoint() * values;
    }

    for (std::size_t a = 0; a < dim; ++a) {
        const double diag = gram(a, a).real();
        const double exact = monomial_norm_sq_value(spec, report.basis[a]);
        report.diagonal.push_back(diag);
        report.closed_form.push_back(exact);
        report.max_diag_rel_err = std::max(report.max_diag_rel_err, std::abs(diag - exact) / exact);
        for (std::size_t b = 0; b < dim; ++b)
            if (a != b) report.max_offdiag = std::max(report.max_offdiag, std::abs(gram(a, b)));
    }
    return report;
}

void write_basis_csv(std::ostream& out, const DomainSpec& spec, int bound) {
    out << "spec";
    for (int i = 0; i < spec.n(); ++i) out << ",a" << i;
    out << ",admissible,norm_num,norm_den,norm\n";
    out.precision(17);
    const int n = spec.n();
    const int k = spec.k();
    MultiIndex alpha{std::vector<int>(n)};
    std::vector<MultiIndex> box;
    for (int i = 0; i < n; ++i) alpha.entries[i] = i < k ? 0 : -bound;
    while (true) {
        box.push_back(alpha);
        int d = n - 1;
        while (d >= 0) {
            if (++alpha.entries[d] <= bound) break;
            alpha.entries[d] = d < k ? 0 : -bound;
            --d;
        }
        if (d < 0) break;
    }
    for (const auto& a : box) {
        out << spec.fingerprint();
        for (int v : a.entries) out << ',' << v;
        if (is_admissible(spec, a)) {
            const auto norm = monomial_norm_sq(spec, a);
            out << ",1," << boost::multiprecision::numerator(norm.exact) << ','
                << boost::multiprecision::denominator(norm.exact) << ',' << norm.value << '\n';
        } else {
            out << ",0,,,\n";
        }
    }
}

} // namespace hartogs

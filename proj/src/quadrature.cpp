#include "hartogs/quadrature.hpp"

#include "hartogs/errors.hpp"
#include "hartogs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace hartogs {

LineRule gauss_legendre(int count, double a, double b) {
    if (count < 1) throw ParameterOutOfRange("Gauss-Legendre needs at least one node");
    LineRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (int i = 0; i < (count + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= count; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (count == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= count; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = count == 1 ? 1.0 : count * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[count - 1 - i] = mid + half * x;
        rule.weights[i] = rule.weights[count - 1 - i] = half * w;
    }
    return rule;
}

FactorRule ball_rule(int dim, int radial, int angular, double radius) {
    if (radial < 1 || angular < 1 || dim < 1) throw ParameterOutOfRange("ball_rule sizes must be positive");
    const LineRule line = gauss_legendre(radial);
    const double r2 = radius * radius;
    double factorial = 1.0;
    for (int i = 2; i <= dim; ++i) factorial *= i;

    // Simplex points (s_1..s_dim), sum s_i < 1, with collapsed coordinates
    // s_i = x_i prod_{j<i}(1 - x_j).
    std::vector<std::vector<double>> simplex_pts;
    std::vector<double> simplex_w;
    std::vector<int> idx(dim, 0);
    while (true) {
        std::vector<double> s(dim);
        double remaining = 1.0;
        double w = factorial;
        for (int i = 0; i < dim; ++i) {
            const double x = line.nodes[idx[i]];
            s[i] = remaining * x;
            w *= line.weights[idx[i]] * remaining;
            remaining *= (1.0 - x);
        }
        simplex_pts.push_back(std::move(s));
        simplex_w.push_back(w);
        int d = 0;
        while (d < dim && ++idx[d] == radial) idx[d++] = 0;
        if (d == dim) break;
    }

    std::vector<double> angles(angular);
    for (int a = 0; a < angular; ++a) angles[a] = 2.0 * std::numbers::pi * (a + 0.5) / angular;

    FactorRule rule;
    rule.dim = dim;
    std::size_t angle_combos = 1;
    for (int i = 0; i < dim; ++i) angle_combos *= angular;
    rule.nodes.reserve(simplex_pts.size() * angle_combos * dim);
    rule.weights.reserve(simplex_pts.size() * angle_combos);
    const double angle_weight = 1.0 / static_cast<double>(angle_combos);
    for (std::size_t p = 0; p < simplex_pts.size(); ++p) {
        std::vector<int> aidx(dim, 0);
        while (true) {
            for (int i = 0; i < dim; ++i)
                rule.nodes.push_back(std::polar(radius * std::sqrt(simplex_pts[p][i]), angles[aidx[i]]));
            rule.weights.push_back(simplex_w[p] * angle_weight * std::pow(r2, dim));
            int d = 0;
            while (d < dim && ++aidx[d] == angular) aidx[d++] = 0;
            if (d == dim) break;
        }
    }
    return rule;
}

FactorRule graded_disk_rule(double scale, int per_panel) {
    scale = std::clamp(scale, 1e-12, 0.5);
    const LineRule base = gauss_legendre(per_panel, 0.0, 1.0);

    std::vector<std::pair<double, double>> rpanels;
    // geometric panels toward 0 keep integrable singularities at the origin
    // resolved, geometric panels toward 1 resolve the boundary bump.
    double lo = 0.0;
    for (double a = 1.0 / 1024.0; a < 0.5; a *= 2.0) {
        rpanels.emplace_back(lo, a);
        lo = a;
    }
    rpanels.emplace_back(lo, 0.5);
    double gap = 0.5;
    while (gap > scale / 8.0) {
        rpanels.emplace_back(1.0 - gap, 1.0 - gap / 2.0);
        gap /= 2.0;
    }
    rpanels.emplace_back(1.0 - gap, 1.0);

    std::vector<std::pair<double, double>> tpanels;
    double t0 = 0.0;
    for (double t = scale / 4.0; t < std::numbers::pi; t *= 2.0) {
        tpanels.emplace_back(t0, t);
        t0 = t;
    }
    tpanels.emplace_back(t0, std::numbers::pi);

    FactorRule rule;
    rule.dim = 1;
    for (auto [ra, rb] : rpanels) {
        for (int i = 0; i < per_panel; ++i) {
            const double rho = ra + (rb - ra) * base.nodes[i];
            const double wr = (rb - ra) * base.weights[i] * 2.0 * rho;
            for (auto [ta, tb] : tpanels) {
                for (int j = 0; j < per_panel; ++j) {
                    const double th = ta + (tb - ta) * base.nodes[j];
                    const double wt = (tb - ta) * base.weights[j] / (2.0 * std::numbers::pi);
                    rule.nodes.push_back(std::polar(rho, th));
                    rule.weights.push_back(wr * wt);
                    rule.nodes.push_back(std::polar(rho, -th));
                    rule.weights.push_back(wr * wt);
                }
            }
        }
    }
    return rule;
}

CPoint SampleSet::cpoint(std::size_t i) const {
    auto p = point(i);
    return CPoint{std::vector<cplx>(p.begin(), p.end()), Frame::Pi};
}

double SampleSet::measure_total() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

void SampleSet::add(std::span<const cplx> eta, double weight) {
    coords_.insert(coords_.end(), eta.begin(), eta.end());
    weights_.push_back(weight);
}

void SampleSet::reserve(std::size_t count) {
    coords_.reserve(count * n_);
    weights_.reserve(count);
}

SampleSet tensor_grid(const DomainSpec& spec, const std::vector<FactorRule>& rules, std::size_t node_cap) {
    const auto& factors = spec.factors();
    if (rules.size() != factors.size()) throw ParameterOutOfRange("one rule per factor required");
    double total = 1.0;
    for (const auto& r : rules) total *= static_cast<double>(r.size());
    if (total > static_cast<double>(node_cap))
        throw ResourceLimit("grid would have " + std::to_string(static_cast<long long>(total)) +
                            " nodes, cap is " + std::to_string(node_cap));

    SampleSet out(spec.n(), SampleKind::Grid);
    out.reserve(static_cast<std::size_t>(total));
    std::vector<std::size_t> idx(rules.size(), 0);
    std::vector<cplx> eta(spec.n());
    while (true) {
        double w = 1.0;
        for (std::size_t f = 0; f < rules.size(); ++f) {
            const auto node = rules[f].node(idx[f]);
            std::copy(node.begin(), node.end(), eta.begin() + factors[f].offset);
            w *= rules[f].weights[idx[f]];
        }
        out.add(eta, w);
        std::size_t d = 0;
        while (d < rules.size() && ++idx[d] == rules[d].size()) idx[d++] = 0;
        if (d == rules.size()) break;
    }
    return out;
}

SampleSet grid_Pi(const DomainSpec& spec, int radial_nodes, int angular_nodes, std::size_t node_cap) {
    if (radial_nodes < 2 || angular_nodes < 4)
        throw ParameterOutOfRange("grid_Pi needs radial_nodes >= 2 and angular_nodes >= 4");
    std::vector<FactorRule> rules;
    for (const Factor& f : spec.factors()) {
        double estimate = std::pow(static_cast<double>(radial_nodes) * angular_nodes, f.dim);
        if (estimate > static_cast<double>(node_cap)) throw ResourceLimit("factor rule exceeds node cap");
        rules.push_back(ball_rule(f.dim, radial_nodes, angular_nodes));
    }
    return tensor_grid(spec, rules, node_cap);
}

SampleSet montecarlo_Pi(const DomainSpec& spec, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw ParameterOutOfRange("montecarlo_Pi needs at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SampleSet out(spec.n(), SampleKind::MonteCarlo);
    out.reserve(n_samples);
    std::vector<cplx> eta(spec.n());
    const double w = 1.0 / static_cast<double>(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (const Factor& f : spec.factors()) {
            if (f.disk) {
                double s = 0.0;
                while (s == 0.0) s = unif(rng);
                eta[f.offset] = std::polar(std::sqrt(s), 2.0 * std::numbers::pi * unif(rng));
            } else {
                double norm2 = 0.0;
                for (int d = 0; d < f.dim; ++d) {
                    eta[f.offset + d] = cplx(gauss(rng), gauss(rng));
                    norm2 += std::norm(eta[f.offset + d]);
                }
                const double radius = std::pow(unif(rng), 1.0 / (2.0 * f.dim));
                const double scale = radius / std::sqrt(norm2);
                for (int d = 0; d < f.dim; ++d) eta[f.offset + d] *= scale;
            }
        }
        out.add(eta, w);
    }
    return out;
}

namespace {

constexpr std::size_t kBlock = 4096;

template <class Eval>
cplx blocked_sum(std::size_t count, const Eval& eval) {
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<cplx> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        cplx s = 0.0;
        const std::size_t end = std::min(count, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) s += eval(i);
        partial[b] = s;
    });
    cplx total = 0.0;
    for (const cplx& p : partial) total += p;
    return total;
}

} // namespace

cplx integrate_H(const DomainSpec& spec, const FunctionH& integrand, const SampleSet& samples) {
    if (samples.n() != spec.n()) throw DomainViolation("sample set dimension does not match domain");
    return blocked_sum(samples.size(), [&](std::size_t i) {
        const auto eta = samples.point(i);
        std::vector<cplx> z(spec.n());
        pull_back(spec, eta, z);
        const cplx value = integrand(z);
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
            throw NonFiniteIntegrand("integrand is not finite at sample " + std::to_string(i));
        return samples.weight(i) * value * std::norm(jacobian_G_raw(spec, eta));
    });
}

cplx integrate_Pi(const FunctionPi& integrand, const SampleSet& samples) {
    return blocked_sum(samples.size(), [&](std::size_t i) {
        const cplx value = integrand(samples.point(i));
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
            throw NonFiniteIntegrand("integrand is not finite at sample " + std::to_string(i));
        return samples.weight(i) * value;
    });
}

double montecarlo_stderr(const FunctionPi& integrand, const SampleSet& samples) {
    const std::size_t count = samples.size();
    if (count < 2) return 0.0;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = std::abs(integrand(samples.point(i)));
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
}

void write_csv(std::ostream& out, const SampleSet& samples) {
    for (int i = 0; i < samples.n(); ++i) out << "re" << i << ",im" << i << ",";
    out << "weight\n";
    out.precision(17);
    for (std::size_t p = 0; p < samples.size(); ++p) {
        for (const cplx& c : samples.point(p)) out << c.real() << ',' << c.imag() << ',';
        out << samples.weight(p) << '\n';
    }
}

} // namespace hartogs

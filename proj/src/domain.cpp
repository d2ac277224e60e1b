#include "hartogs/domain.hpp"

#include "hartogs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hartogs {

DomainSpec::DomainSpec(std::vector<int> partition, int n, int b)
    : partition_(std::move(partition)), n_(n), b_(b) {
    if (partition_.empty()) throw InvalidPartition("partition must have at least one block");
    for (int kj : partition_)
        if (kj < 1) throw InvalidPartition("block sizes must be >= 1");
    k_ = std::accumulate(partition_.begin(), partition_.end(), 0);
    if (k_ >= n_) throw InvalidPartition("sum of block sizes must be < n");
    if (b_ < 1) throw InvalidExponent("b must be >= 1");
    camber_ = k_ * (b_ - 1);

    int offset = 0;
    for (int kj : partition_) {
        factors_.push_back(Factor{offset, kj, false, 0, kj + 1});
        offset += kj;
    }
    for (int m = k_; m < n_; ++m) factors_.push_back(Factor{m, 1, true, m + camber_, 2});
}

std::string DomainSpec::fingerprint() const {
    std::string parts;
    for (std::size_t i = 0; i < partition_.size(); ++i) {
        if (i) parts += ' ';
        parts += std::to_string(partition_[i]);
    }
    return "n=" + std::to_string(n_) + ";partition=" + parts + ";b=" + std::to_string(b_);
}

DomainSpec make_domain(std::vector<int> partition, int n, int b) {
    return DomainSpec(std::move(partition), n, b);
}

void to_json(nlohmann::json& j, const DomainSpec& spec) {
    j = nlohmann::json{{"partition", spec.partition()}, {"n", spec.n()}, {"b", spec.b()}};
}

DomainSpec domain_from_json(const nlohmann::json& j) {
    try {
        return DomainSpec(j.at("partition").get<std::vector<int>>(), j.at("n").get<int>(),
                          j.at("b").get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
}

std::pair<Rational, Rational> projection_interval(const DomainSpec& spec) {
    const Rational n = spec.n();
    const Rational c = spec.camber();
    return {(2 * n + 2 * c) / (n + 1 + c), (2 * n + 2 * c) / (n - 1 + c)};
}

CPoint make_point(std::vector<cplx> coords, Frame frame) { return CPoint{std::move(coords), frame}; }

namespace {

double block_norm(std::span<const cplx> v, const Factor& f) {
    double s = 0;
    for (int i = 0; i < f.dim; ++i) s += std::norm(v[f.offset + i]);
    return std::sqrt(s);
}

void require_size(const DomainSpec& spec, std::size_t size) {
    if (size != static_cast<std::size_t>(spec.n()))
        throw DomainViolation("point has " + std::to_string(size) + " coordinates, expected " +
                              std::to_string(spec.n()));
}

} // namespace

bool contains_H(const DomainSpec& spec, std::span<const cplx> z) {
    if (z.size() != static_cast<std::size_t>(spec.n())) return false;
    const int k = spec.k();
    const double lead = std::pow(std::abs(z[k]), spec.b());
    for (const Factor& f : spec.factors()) {
        if (f.disk) break;
        if (!(block_norm(z, f) < lead)) return false;
    }
    // |z_{k+1}| < ... < |z_n| < 1 is equivalent to the chain of b-th powers.
    for (int m = k; m + 1 < spec.n(); ++m)
        if (!(std::abs(z[m]) < std::abs(z[m + 1]))) return false;
    if (!(std::abs(z[spec.n() - 1]) < 1.0)) return false;
    return lead > 0.0;
}

bool contains_Pi(const DomainSpec& spec, std::span<const cplx> eta) {
    if (eta.size() != static_cast<std::size_t>(spec.n())) return false;
    for (const Factor& f : spec.factors()) {
        if (f.disk) {
            const double r = std::abs(eta[f.offset]);
            if (!(r > 0.0 && r < 1.0)) return false;
        } else if (!(block_norm(eta, f) < 1.0)) {
            return false;
        }
    }
    return true;
}

bool contains_H(const DomainSpec& spec, const CPoint& z) { return contains_H(spec, std::span<const cplx>(z.coords)); }
bool contains_Pi(const DomainSpec& spec, const CPoint& eta) { return contains_Pi(spec, std::span<const cplx>(eta.coords)); }

void pull_back(const DomainSpec& spec, std::span<const cplx> eta, std::span<cplx> z) {
    const int n = spec.n();
    const int k = spec.k();
    z[n - 1] = eta[n - 1];
    for (int m = n - 2; m >= k; --m) z[m] = eta[m] * z[m + 1];
    const cplx lead = std::pow(z[k], spec.b());
    for (int i = 0; i < k; ++i) z[i] = eta[i] * lead;
}

void push_forward(const DomainSpec& spec, std::span<const cplx> z, std::span<cplx> eta) {
    const int n = spec.n();
    const int k = spec.k();
    const cplx lead = std::pow(z[k], spec.b());
    for (int i = 0; i < k; ++i) eta[i] = z[i] / lead;
    for (int m = k; m + 1 < n; ++m) eta[m] = z[m] / z[m + 1];
    eta[n - 1] = z[n - 1];
}

cplx jacobian_G_raw(const DomainSpec& spec, std::span<const cplx> eta) {
    cplx det = 1.0;
    for (int m = spec.k(); m < spec.n(); ++m) det *= std::pow(eta[m], spec.jacobian_exponent(m));
    return det;
}

CPoint psi_forward(const DomainSpec& spec, const CPoint& z) {
    require_size(spec, z.size());
    if (z.frame != Frame::H || !contains_H(spec, z)) throw DomainViolation("psi_forward needs a point of H");
    CPoint eta{std::vector<cplx>(z.size()), Frame::Pi};
    push_forward(spec, z.coords, eta.coords);
    return eta;
}

CPoint psi_inverse(const DomainSpec& spec, const CPoint& eta) {
    require_size(spec, eta.size());
    if (eta.frame != Frame::Pi || !contains_Pi(spec, eta)) throw DomainViolation("psi_inverse needs a point of Pi");
    CPoint z{std::vector<cplx>(eta.size()), Frame::H};
    pull_back(spec, eta.coords, z.coords);
    return z;
}

cplx jacobian_G(const DomainSpec& spec, const CPoint& eta) {
    require_size(spec, eta.size());
    if (eta.frame != Frame::Pi || !contains_Pi(spec, eta)) throw DomainViolation("jacobian_G needs a point of Pi");
    return jacobian_G_raw(spec, eta.coords);
}

CPoint theta_map(const DomainSpec& spec, const CPoint& z) {
    require_size(spec, z.size());
    if (z.frame != Frame::H || !contains_H(spec, z)) throw DomainViolation("theta_map needs a point of H");
    CPoint out = z;
    const cplx scale = std::pow(z[spec.k()], 1 - spec.b());
    for (int i = 0; i < spec.k(); ++i) out.coords[i] *= scale;
    return out;
}

} // namespace hartogs

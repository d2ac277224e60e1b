#pragma once

#include "hartogs/domain.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace hartogs {

/// Gauss-Legendre rule on [a, b].
struct LineRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
LineRule gauss_legendre(int count, double a = 0.0, double b = 1.0);

/// Quadrature rule for one factor (a ball B^dim or a disk) under the
/// normalized measure. Nodes are stored flat, dim complex numbers per node.
struct FactorRule {
    int dim = 1;
    std::vector<cplx> nodes;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const cplx> node(std::size_t i) const { return {nodes.data() + i * dim, static_cast<std::size_t>(dim)}; }
};

/// Ball of radius `radius` centred at 0 in C^dim. Uses |w_i|^2 = s_i with
/// (s_1..s_dim) on the simplex (collapsed Gauss-Legendre coordinates) and a
/// uniform angular rule per coordinate. Weights sum to radius^(2 dim), the
/// normalized volume of the sub-ball. Exact for |w^beta|^2 times polynomials
/// in |w|^2 of low degree and for trigonometric phases below `angular`.
FactorRule ball_rule(int dim, int radial, int angular, double radius = 1.0);

/// Disk rule graded toward a boundary point: radial panels accumulate at
/// rho = 1 down to width `scale`, angular panels accumulate at theta = 0.
/// Used for integrands peaked near eta = 1 (boundary bumps).
FactorRule graded_disk_rule(double scale, int per_panel);

enum class SampleKind { Grid, MonteCarlo };

/// Weighted point cloud on Pi. Coordinates are stored flat, n per point.
class SampleSet {
public:
    SampleSet(int n, SampleKind kind) : n_(n), kind_(kind) {}

    int n() const { return n_; }
    SampleKind kind() const { return kind_; }
    std::size_t size() const { return weights_.size(); }
    std::span<const cplx> point(std::size_t i) const { return {coords_.data() + i * n_, static_cast<std::size_t>(n_)}; }
    CPoint cpoint(std::size_t i) const;
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<cplx>& coords() const { return coords_; }
    double measure_total() const;

    void add(std::span<const cplx> eta, double weight);
    void reserve(std::size_t count);

    bool operator==(const SampleSet&) const = default;

private:
    int n_;
    SampleKind kind_;
    std::vector<cplx> coords_;
    std::vector<double> weights_;
};

/// Default cap on the number of tensor-grid nodes.
inline constexpr std::size_t kDefaultNodeCap = 20'000'000;

/// Tensor-product grid on Pi: every factor gets a ball_rule with the same
/// radial/angular resolution (for disks this is Gauss-Legendre in |eta|^2
/// times uniform angles).
SampleSet grid_Pi(const DomainSpec& spec, int radial_nodes, int angular_nodes,
                  std::size_t node_cap = kDefaultNodeCap);

/// Tensor product of caller-supplied factor rules, one per factor of spec.
SampleSet tensor_grid(const DomainSpec& spec, const std::vector<FactorRule>& rules,
                      std::size_t node_cap = kDefaultNodeCap);

/// I.i.d. uniform samples on Pi with equal weights; deterministic in seed.
SampleSet montecarlo_Pi(const DomainSpec& spec, std::size_t n_samples, std::uint64_t seed);

using FunctionH = std::function<cplx(std::span<const cplx> z)>;
using FunctionPi = std::function<cplx(std::span<const cplx> eta)>;

/// sum_i w_i f(G(eta_i)) |det G'(eta_i)|^2, the pullback of the integral of
/// f over H. The sum is formed per fixed block of points and the blocks are
/// added in order, so the value does not depend on the thread count.
cplx integrate_H(const DomainSpec& spec, const FunctionH& integrand, const SampleSet& samples);

/// sum_i w_i f(eta_i): plain integral over Pi.
cplx integrate_Pi(const FunctionPi& integrand, const SampleSet& samples);

/// Monte-Carlo standard error of integrate_Pi for equal-weight samples.
double montecarlo_stderr(const FunctionPi& integrand, const SampleSet& samples);

/// One row per point: re/im pairs of each coordinate, then the weight.
void write_csv(std::ostream& out, const SampleSet& samples);

} // namespace hartogs

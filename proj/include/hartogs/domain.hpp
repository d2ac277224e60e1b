#pragma once

#include "hartogs/rational.hpp"

#include <json.hpp>

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hartogs {

using cplx = std::complex<double>;

/// Coordinate system a point is expressed in: the Hartogs domain H or the
/// product of balls and punctured disks Pi.
enum class Frame { H, Pi };

struct CPoint {
    std::vector<cplx> coords;
    Frame frame = Frame::H;

    std::size_t size() const { return coords.size(); }
    cplx operator[](std::size_t i) const { return coords[i]; }
};

/// One factor of the product domain Pi: either a ball block B^{k_j} or a
/// punctured disk carrying one of the last n-k coordinates.
struct Factor {
    int offset = 0;      // first coordinate index
    int dim = 1;         // complex dimension
    bool disk = false;   // true for the punctured-disk factors
    int jac_exp = 0;     // exponent of this coordinate in det G' (0 for balls)
    int kernel_exp = 2;  // k_j + 1 for balls, 2 for disks

    bool operator==(const Factor&) const = default;
};

/// The generalized Hartogs domain
///   max_j |z~_j| < |z_{k+1}|^b < ... < |z_n|^b < 1
/// described by its block partition (k_1..k_l), dimension n and exponent b.
class DomainSpec {
public:
    DomainSpec(std::vector<int> partition, int n, int b);

    int n() const { return n_; }
    int b() const { return b_; }
    int k() const { return k_; }
    /// C = k(b-1).
    int camber() const { return camber_; }
    const std::vector<int>& partition() const { return partition_; }
    const std::vector<Factor>& factors() const { return factors_; }
    int disk_count() const { return n_ - k_; }

    /// Exponent of eta_m in det G' for a disk coordinate m (0-based, m >= k).
    int jacobian_exponent(int m) const { return m + camber_; }

    /// "n=2;partition=1;b=1" style tag attached to every report row.
    std::string fingerprint() const;

    bool operator==(const DomainSpec&) const = default;

private:
    std::vector<int> partition_;
    int n_;
    int b_;
    int k_;
    int camber_;
    std::vector<Factor> factors_;
};

DomainSpec make_domain(std::vector<int> partition, int n, int b);

void to_json(nlohmann::json& j, const DomainSpec& spec);
DomainSpec domain_from_json(const nlohmann::json& j);

/// Open interval of p for which the Bergman projection is L^p bounded:
/// ((2n+2C)/(n+1+C), (2n+2C)/(n-1+C)).
std::pair<Rational, Rational> projection_interval(const DomainSpec& spec);

bool contains_H(const DomainSpec& spec, std::span<const cplx> z);
bool contains_Pi(const DomainSpec& spec, std::span<const cplx> eta);
bool contains_H(const DomainSpec& spec, const CPoint& z);
bool contains_Pi(const DomainSpec& spec, const CPoint& eta);

/// Psi: H -> Pi.
CPoint psi_forward(const DomainSpec& spec, const CPoint& z);
/// G = Psi^{-1}: Pi -> H.
CPoint psi_inverse(const DomainSpec& spec, const CPoint& eta);
/// det G'(eta) = prod_{m>=k} eta_m^{m+C}.
cplx jacobian_G(const DomainSpec& spec, const CPoint& eta);
/// Theta: H_b -> H_1, z~_j -> z~_j z_{k+1}^{1-b}.
CPoint theta_map(const DomainSpec& spec, const CPoint& z);

// Unchecked kernels used in the inner loops; callers guarantee membership.
void pull_back(const DomainSpec& spec, std::span<const cplx> eta, std::span<cplx> z);
void push_forward(const DomainSpec& spec, std::span<const cplx> z, std::span<cplx> eta);
cplx jacobian_G_raw(const DomainSpec& spec, std::span<const cplx> eta);

CPoint make_point(std::vector<cplx> coords, Frame frame);

} // namespace hartogs

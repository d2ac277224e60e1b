#pragma once

#include "hartogs/rational.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hartogs {

/// Angular mean (1/2pi) int_0^{2pi} |1 - y e^{i theta}|^{-A} d theta, 0 <= y < 1.
double angular_mean(double A, double y);

/// int_D (1-|w|^2)^U |w|^c / |1 - r conj(w)|^A dv(w) under normalized area,
/// for U > -1, c > -2, 0 <= r < 1.
double disk_weighted_integral(double U, double c, double A, double r);

/// Same integral parametrized by gap = 1 - r^2 in (0, 1], which stays
/// accurate for radii that round to 1.
double disk_weighted_integral_gap(double U, double c, double A, double gap);

/// int_{B^k} (1-|w|^2)^u / |1 - <z,w>|^A dv(w) with |z| = r under normalized
/// volume, u > -1.
double ball_weighted_integral(int k, double u, double A, double r);
double ball_weighted_integral_gap(int k, double u, double A, double gap);

struct EstimateReport {
    std::string kind;  // "disk" or "ball"
    double a = 1.0;
    double u = -0.5;
    double c = 0.0;    // disk only
    int k = 1;         // ball only
    double rhs_shift = 0.0;  // added to the RHS exponent (sharpness diagnostic)
    std::vector<double> radii;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> ratio;
    double max_ratio = 0.0;
    double slope = 0.0;      // d ln(ratio) / d ln(1/(1-r^2)) over the largest radii
    bool bounded = false;
};

inline constexpr double kEstimateSlopeTol = 0.05;
inline constexpr std::size_t kEstimateTailPoints = 3;

/// 0.5, 0.9, 0.99, ..., 1 - 1e-6.
std::vector<double> default_probe_radii();

/// Least-squares slope of ln(ratio) against ln(1/(1-r^2)) over the three
/// largest radii >= 0.9, and the bounded flag: slope <= tol and max ratio
/// <= 2 x ratio near r = 0.9.
void summarize_estimate(EstimateReport& report, double slope_tol = kEstimateSlopeTol);

/// Disk estimate with RHS (1-r^2)^{-2a+u+2+rhs_shift}.
EstimateReport disk_estimate(double a, double u, double c, const std::vector<double>& radii,
                             double rhs_shift = 0.0, double slope_tol = kEstimateSlopeTol);

/// Ball estimate with RHS (1-r^2)^{u+(k+1)(1-a)+rhs_shift}.
EstimateReport ball_estimate(int k, double a, double u, const std::vector<double>& radii,
                             double rhs_shift = 0.0, double slope_tol = kEstimateSlopeTol);

/// int_D |w|^{2e} dv = 1/(e+1); Divergent for e <= -1.
Rational moment_oracle_disk(const Rational& e);
/// int_{B^k} |w^beta|^2 dv = k! beta! / (k + |beta|)!.
Rational moment_oracle_ball(const std::vector<int>& beta);

/// radius,lhs,rhs,ratio rows.
void write_csv(std::ostream& out, const EstimateReport& report, const std::string& fingerprint = "");

} // namespace hartogs

#pragma once

#include "hartogs/domain.hpp"
#include "hartogs/rational.hpp"
#include "hartogs/toeplitz.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace hartogs {

/// One probe family evaluated along its refinement parameter.
struct FamilyProbe {
    std::string family;
    std::vector<double> scales;  // growing parameter (1/eps, 1/delta or j)
    std::vector<double> ratios;  // ||Tf||_q / ||f||_p
    double slope = 0.0;          // d log ratio / d log scale over the tail
    bool skipped = false;
};

struct PhaseRecord {
    Rational p, q, t;
    Verdict verdict;
    std::vector<FamilyProbe> families;
    double slope = 0.0;
    bool observed_bounded = true;
    bool agree = false;
    bool excluded = false;
    std::string error;
};

struct PhaseScanOptions {
    int levels = 5;
    int tail = 3;
    double slope_tol = 0.05;
    int per_panel = 8;
};

/// Witness family: conj(z_n)^N with the output norm taken over |eta_n| > eps.
FamilyProbe probe_truncated_witness(const DomainSpec& spec, double p, double q, double t, int levels, int tail);
/// Boundary bump on the last disk concentrating at eta_n = 1.
FamilyProbe probe_boundary_bump(const DomainSpec& spec, double p, double q, double t, int levels, int tail,
                                int per_panel);
/// Shell sequence f_j concentrating at the puncture.
FamilyProbe probe_shell_sequence(const DomainSpec& spec, double p, double q, double t, int levels, int tail);

/// Least-squares slope of log y against log x over the last `tail` points.
double tail_slope(const std::vector<double>& x, const std::vector<double>& y, int tail);

PhaseRecord phase_probe(const DomainSpec& spec, const Rational& p, const Rational& q, const Rational& t,
                        const PhaseScanOptions& options = {});

std::vector<PhaseRecord> phase_scan(const DomainSpec& spec, const std::vector<Rational>& p_grid,
                                    const std::vector<Rational>& q_grid, const std::vector<Rational>& t_grid,
                                    const PhaseScanOptions& options = {});

/// Fraction of scored (not excluded, no error) records that agree.
double agreement_fraction(const std::vector<PhaseRecord>& records);
std::size_t scored_count(const std::vector<PhaseRecord>& records);

void write_phase_csv(std::ostream& out, const DomainSpec& spec, const std::vector<PhaseRecord>& records);
/// q rows by t columns at fixed p, followed by the exact boundary curve rows.
void write_pivot_csv(std::ostream& out, const DomainSpec& spec, const std::vector<PhaseRecord>& records,
                     const Rational& p);
void to_json(nlohmann::json& j, const FamilyProbe& f);
void to_json(nlohmann::json& j, const PhaseRecord& r);

} // namespace hartogs

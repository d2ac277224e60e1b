#pragma once

#include "hartogs/domain.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace hartogs {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr const char* kReportSchema = "hartogs.report/1";

/// Default tolerance per suite; keys are the only accepted override names.
const std::map<std::string, double>& default_tolerances();

struct RunConfig {
    DomainSpec domain = make_domain({1}, 2, 1);
    nlohmann::json params = nlohmann::json::object();  // whole config document
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    std::optional<int> threads;
    std::map<std::string, double> tolerances = default_tolerances();

    double tolerance(const std::string& suite) const;
    /// Command section of the config document, or an empty object.
    nlohmann::json section(const std::string& name) const;
};

/// Builds a config from a JSON document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
/// Applies a "suite=value" override. Throws ConfigError.
void apply_tolerance_override(RunConfig& config, const std::string& assignment);
/// Rejects non-positive tolerances and unknown suites. Throws ConfigError.
void validate_config(const RunConfig& config);

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Random Pi-frame point with every factor radius at most `max_radius`; disk
/// radii are at least `min_disk`.
std::vector<cplx> random_pi_point(const DomainSpec& spec, std::mt19937_64& rng, double max_radius,
                                  double min_disk = 0.05);

struct SuiteResult {
    std::string suite;
    bool pass = false;
    std::string statistic;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string file;
};

int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_phase_scan(const RunConfig& config, std::ostream& log);
int cmd_witness(const RunConfig& config, std::ostream& log);
int cmd_kernel(const RunConfig& config, std::ostream& log, std::ostream& response);

/// Kernel request/response: {"pairs": [{"z": [[re,im],...], "w": [...]}], "truncation": N}.
nlohmann::json kernel_response(const DomainSpec& spec, const nlohmann::json& request);

} // namespace hartogs

#include "hartogs/errors.hpp"
#include "hartogs/report.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace hartogs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("hartogs_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HARTOGS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t file_count(const fs::path& dir) {
    if (!fs::exists(dir)) return 0;
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

void check_csv(const fs::path& path, const std::string& fingerprint) {
    const std::string text = slurp(path);
    CHECK(text.find('\r') == std::string::npos);
    REQUIRE_FALSE(text.empty());
    CHECK(text.back() == '\n');
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CAPTURE(path.filename().string());
        CHECK(line.rfind(fingerprint + ",", 0) == 0);
        ++rows;
    }
    CHECK(rows > 0);
}

RunConfig small_config(const fs::path& out) {
    RunConfig config = parse_config(json::parse(R"({
        "domain": {"partition": [1], "n": 2, "b": 2},
        "verify": {"basis_bound": 1, "points": 4, "triples": 4, "hb_bound": 1, "comparability_samples": 20},
        "witness": {"regime": "1", "bound": 2, "radial": 12, "angular": 24},
        "phase_scan": {"p": ["2"], "q": ["2", "7/2"], "t": ["0"], "levels": 4}
    })"));
    config.out_dir = out;
    return config;
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("config parsing and validation") {
    RunConfig config = parse_config(json::parse(R"({"domain": {"partition": [1], "n": 3, "b": 2}, "seed": 7})"));
    CHECK(config.domain.fingerprint() == make_domain({1}, 3, 2).fingerprint());
    CHECK(config.seed == 7);
    CHECK(config.tolerance("orthogonality") == 1e-8);
    apply_tolerance_override(config, "norms=1e-4");
    CHECK(config.tolerance("norms") == 1e-4);
    CHECK_NOTHROW(validate_config(config));
    apply_tolerance_override(config, "norms=-1");
    CHECK_THROWS_AS(validate_config(config), ConfigError);
    CHECK_THROWS_AS(apply_tolerance_override(config, "nonsense=1"), ConfigError);
    CHECK_THROWS_AS(apply_tolerance_override(config, "norms"), ConfigError);
    CHECK_THROWS_AS(apply_tolerance_override(config, "norms=abc"), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"tolerances": {"bogus": 1}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"domain": {"partition": [1], "n": 2}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse("[1]")), ConfigError);
}

TEST_CASE("atomic write replaces content and leaves no temporary") {
    const fs::path dir = fresh_dir("atomic");
    fs::create_directories(dir);
    write_atomic(dir / "a.txt", "one\n");
    write_atomic(dir / "a.txt", "two\n");
    CHECK(slurp(dir / "a.txt") == "two\n");
    CHECK(file_count(dir) == 1);
    fs::remove_all(dir);
}

TEST_CASE("random points stay inside the requested radius") {
    const auto spec = make_domain({2}, 4, 3);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto eta = random_pi_point(spec, rng, 0.6);
        CHECK(std::norm(eta[0]) + std::norm(eta[1]) <= 0.36 + 1e-12);
        CHECK(std::abs(eta[2]) <= 0.6 + 1e-12);
        CHECK(std::abs(eta[3]) >= 0.05 - 1e-12);
        CHECK(std::abs(eta[3]) <= 0.6 + 1e-12);
    }
}

TEST_CASE("kernel response") {
    const auto spec = make_domain({1}, 2, 1);
    const json request = json::parse(R"({"pairs": [{"z": [0.1, 0.5], "w": [[0.1, 0], [0.5, 0]]},
                                                    {"z": [0.6, 0.5], "w": [0.1, 0.5]}], "truncation": 60})");
    const json response = kernel_response(spec, request);
    CHECK(response.at("schema") == kReportSchema);
    REQUIRE(response.at("results").size() == 2);
    const json& row = response.at("results")[0];
    CHECK(row.at("value")[0].get<double>() == doctest::Approx(row.at("diag_z").get<double>()).epsilon(1e-12));
    CHECK(row.at("series")[0].get<double>() == doctest::Approx(row.at("value")[0].get<double>()).epsilon(1e-6));
    CHECK(response.at("results")[1].contains("error"));
    CHECK_THROWS_AS(kernel_response(spec, json::object()), ConfigError);
    CHECK_THROWS_AS(kernel_response(spec, json::parse(R"({"pairs": [{"z": [0.1], "w": [0.1, 0.5]}]})")), ConfigError);
}

TEST_CASE("verify on spec(1;2;2) lists the projection interval") {
    const fs::path dir = fresh_dir("verify");
    std::ostringstream log;
    const int code = cmd_verify(small_config(dir), log);
    CHECK(code == kExitPass);
    const json summary = json::parse(slurp(dir / "verify_summary.json"));
    CHECK(summary.at("schema") == kReportSchema);
    CHECK(summary.at("projection_interval").at("lower") == "3/2");
    CHECK(summary.at("projection_interval").at("upper") == "3");
    CHECK(summary.at("suites").size() == 6);
    for (const json& s : summary.at("suites")) {
        CHECK(s.contains("suite"));
        CHECK(s.contains("pass"));
        CHECK(s.contains("worst"));
    }
    const std::string fp = make_domain({1}, 2, 2).fingerprint();
    for (const char* name :
         {"orthogonality.csv", "diagonal.csv", "series.csv", "herbort_blocki.csv", "comparability.csv", "estimate.csv"})
        check_csv(dir / name, fp);
    fs::remove_all(dir);
}

TEST_CASE("witness outputs for both regimes") {
    const fs::path dir = fresh_dir("witness");
    RunConfig config = small_config(dir);
    std::ostringstream log;
    CHECK(cmd_witness(config, log) == kExitPass);
    const std::string fp = config.domain.fingerprint();
    check_csv(dir / "witness_table.csv", fp);
    check_csv(dir / "witness_points.csv", fp);
    CHECK(json::parse(slurp(dir / "witness.json")).at("pass") == true);

    config.params["witness"] = json::parse(R"({"regime": "3", "p": "6/5", "t": "1/10"})");
    CHECK(cmd_witness(config, log) == kExitPass);
    check_csv(dir / "witness_sequence.csv", fp);
    const json w = json::parse(slurp(dir / "witness.json"));
    CHECK(w.at("proxy_growth").get<double>() >= 2.0);

    config.params["witness"] = json::parse(R"({"regime": "2"})");
    CHECK_THROWS_AS(cmd_witness(config, log), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("phase scan outputs") {
    const fs::path dir = fresh_dir("phase");
    std::ostringstream log;
    CHECK(cmd_phase_scan(small_config(dir), log) == kExitPass);
    const std::string fp = make_domain({1}, 2, 2).fingerprint();
    check_csv(dir / "phase.csv", fp);
    check_csv(dir / "pivot_p2.csv", fp);
    const json j = json::parse(slurp(dir / "phase.json"));
    CHECK(j.at("records").size() == 2);
    CHECK(j.at("agreement").get<double>() == doctest::Approx(1.0));
    fs::remove_all(dir);
}

TEST_CASE("repeat runs are byte-identical") {
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    std::ostringstream log;
    RunConfig ca = small_config(a), cb = small_config(b);
    cmd_verify(ca, log);
    cmd_verify(cb, log);
    for (const auto& entry : fs::directory_iterator(a)) {
        const std::string name = entry.path().filename().string();
        CAPTURE(name);
        if (name.ends_with(".json")) {
            json ja = json::parse(slurp(a / name)), jb = json::parse(slurp(b / name));
            CHECK(ja == jb);
        } else {
            CHECK(slurp(a / name) == slurp(b / name));
        }
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("command line exit codes") {
    const fs::path dir = fresh_dir("cli");
    CHECK(run_cli("verify --out " + dir.string() + " --tolerance norms=-1") == kExitConfig);
    CHECK(file_count(dir) == 0);
    CHECK(run_cli("witness --regime 7 --out " + dir.string()) == kExitConfig);
    CHECK(file_count(dir) == 0);
    CHECK(run_cli("phase-scan --config " + (dir / "missing.json").string()) == kExitConfig);
    CHECK(run_cli("--bogus") == kExitConfig);

    fs::create_directories(dir);
    const fs::path cfg = dir / "cfg.json";
    write_atomic(cfg, R"({"domain": {"partition": [1], "n": 2, "b": 1},
                         "kernel": {"pairs": [{"z": [0.1, 0.5], "w": [0.2, 0.4]}]}})");
    CHECK(run_cli("kernel --config " + cfg.string() + " --out " + (dir / "k").string() + " --threads 1") == kExitPass);
    CHECK(json::parse(slurp(dir / "k" / "kernel.json")).at("results").size() == 1);
    fs::remove_all(dir);
}

}

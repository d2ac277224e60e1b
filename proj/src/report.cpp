#include "hartogs/report.hpp"

#include "hartogs/basis.hpp"
#include "hartogs/errors.hpp"
#include "hartogs/estimates.hpp"
#include "hartogs/kernel.hpp"
#include "hartogs/parallel.hpp"
#include "hartogs/probes.hpp"
#include "hartogs/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace hartogs {

namespace fs = std::filesystem;
using nlohmann::json;

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> table{
        {"orthogonality", 1e-8},  {"norms", 1e-6},          {"diagonal", 1e-10},
        {"series", 1e-6},         {"herbort_blocki", 1e-3}, {"comparability", 1e-9},
        {"estimate", 0.05},       {"phase_slope", 0.05},    {"witness_offdiag", 1e-8},
        {"witness_spread", 5e-4}, {"sequence_growth", 2.0}};
    return table;
}

double RunConfig::tolerance(const std::string& suite) const {
    const auto it = tolerances.find(suite);
    if (it == tolerances.end()) throw ConfigError("unknown tolerance '" + suite + "'");
    return it->second;
}

json RunConfig::section(const std::string& name) const {
    if (params.is_object() && params.contains(name)) return params.at(name);
    return json::object();
}

namespace {

Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number()) return parse_rational(j.dump());
    throw ConfigError("expected a number or a rational string, got " + j.dump());
}

std::vector<Rational> rational_list(const json& section, const std::string& key, std::vector<Rational> fallback) {
    if (!section.contains(key)) return fallback;
    const json& arr = section.at(key);
    if (!arr.is_array() || arr.empty()) throw ConfigError("'" + key + "' must be a non-empty array");
    std::vector<Rational> out;
    for (const json& v : arr) out.push_back(rational_from_json(v));
    return out;
}

template <class T>
T get_or(const json& section, const std::string& key, T fallback) {
    if (!section.contains(key)) return fallback;
    try {
        return section.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("'" + key + "': " + e.what());
    }
}

Rational rational_or(const json& section, const std::string& key, const Rational& fallback) {
    return section.contains(key) ? rational_from_json(section.at(key)) : fallback;
}

std::vector<cplx> point_from_json(const json& j, std::size_t n) {
    if (!j.is_array() || j.size() != n) throw ConfigError("point must list " + std::to_string(n) + " coordinates");
    std::vector<cplx> out;
    for (const json& c : j) {
        if (c.is_number()) out.emplace_back(c.get<double>(), 0.0);
        else if (c.is_array() && c.size() == 2) out.emplace_back(c[0].get<double>(), c[1].get<double>());
        else throw ConfigError("coordinate must be a number or [re, im]");
    }
    return out;
}

json point_to_json(std::span<const cplx> z) {
    json arr = json::array();
    for (const cplx c : z) arr.push_back({c.real(), c.imag()});
    return arr;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

std::string point_cells(std::span<const cplx> z) {
    std::string out;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (i) out += ',';
        out += fmt(z[i].real()) + ',' + fmt(z[i].imag());
    }
    return out;
}

std::string point_header(const std::string& name, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ',';
        out += name + std::to_string(i) + "_re," + name + std::to_string(i) + "_im";
    }
    return out;
}

std::string alpha_cell(const MultiIndex& a) {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) out += (i ? " " : "") + std::to_string(a[i]);
    return out;
}

json summary_header(const RunConfig& config, const std::string& command) {
    json j;
    j["schema"] = kReportSchema;
    j["command"] = command;
    j["spec"] = config.domain.fingerprint();
    j["domain"] = config.domain;
    j["seed"] = config.seed;
    const auto [lo, hi] = projection_interval(config.domain);
    j["projection_interval"] = {{"lower", to_string(lo)}, {"upper", to_string(hi)}};
    return j;
}

void prepare_out(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + config.out_dir.string() + "': " + ec.message());
}

std::vector<CPoint> suite_points(const RunConfig& config, std::size_t count, std::mt19937_64& rng) {
    std::vector<CPoint> points;
    for (std::size_t i = 0; i < count; ++i) {
        const auto eta = random_pi_point(config.domain, rng, 0.6);
        std::vector<cplx> z(config.domain.n());
        pull_back(config.domain, eta, z);
        points.push_back(make_point(z, Frame::H));
    }
    return points;
}

SuiteResult suite_orthogonality(const RunConfig& config, const json& sec) {
    const DomainSpec& spec = config.domain;
    const int bound = get_or(sec, "basis_bound", 2);
    const auto report = check_orthogonality(spec, bound, monomial_grid(spec, bound));
    std::ostringstream csv;
    csv << "spec,alpha,quadrature,closed_form,rel_err\n";
    for (std::size_t i = 0; i < report.basis.size(); ++i) {
        csv << spec.fingerprint() << ',' << alpha_cell(report.basis[i]) << ',' << fmt(report.diagonal[i]) << ','
            << fmt(report.closed_form[i]) << ','
            << fmt(std::abs(report.diagonal[i] - report.closed_form[i]) / report.closed_form[i]) << '\n';
    }
    SuiteResult r{"orthogonality", false, "max_offdiag", report.max_offdiag, config.tolerance("orthogonality"),
                  "orthogonality.csv"};
    r.pass = report.max_offdiag < r.tolerance && report.max_diag_rel_err < config.tolerance("norms");
    write_atomic(config.out_dir / r.file, csv.str());
    return r;
}

SuiteResult suite_diagonal(const RunConfig& config, const std::vector<CPoint>& points) {
    const DomainSpec& spec = config.domain;
    std::ostringstream csv;
    csv << "spec,index," << point_header("z", spec.n()) << ",diag,kernel,rel_err\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double diag = bergman_diag(spec, points[i]);
        const cplx k = bergman_kernel(spec, points[i], points[i]).value;
        const double err = std::abs(k - diag) / diag;
        worst = std::max(worst, err);
        csv << spec.fingerprint() << ',' << i << ',' << point_cells(points[i].coords) << ',' << fmt(diag) << ','
            << fmt(k.real()) << ',' << fmt(err) << '\n';
    }
    SuiteResult r{"diagonal", false, "max_rel_err", worst, config.tolerance("diagonal"), "diagonal.csv"};
    r.pass = worst < r.tolerance;
    write_atomic(config.out_dir / r.file, csv.str());
    return r;
}

SuiteResult suite_series(const RunConfig& config, const json& sec, const std::vector<CPoint>& points) {
    const DomainSpec& spec = config.domain;
    const int truncation = get_or(sec, "series_truncation", 60);
    std::ostringstream csv;
    csv << "spec,index,pair,truncation,closed_re,closed_im,series_re,series_im,rel_err\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (int pair = 0; pair < 2; ++pair) {
            const CPoint& w = pair == 0 ? points[i] : points[(i + 1) % points.size()];
            const cplx closed = bergman_kernel(spec, points[i], w).value;
            const cplx series = kernel_series(spec, points[i], w, truncation).value;
            const double err = std::abs(series - closed) / std::abs(closed);
            worst = std::max(worst, err);
            csv << spec.fingerprint() << ',' << i << ',' << (pair == 0 ? "diagonal" : "next") << ',' << truncation
                << ',' << fmt(closed.real()) << ',' << fmt(closed.imag()) << ',' << fmt(series.real()) << ','
                << fmt(series.imag()) << ',' << fmt(err) << '\n';
        }
    }
    SuiteResult r{"series", false, "max_rel_err", worst, config.tolerance("series"), "series.csv"};
    r.pass = worst < r.tolerance;
    write_atomic(config.out_dir / r.file, csv.str());
    return r;
}

SuiteResult suite_herbort_blocki(const RunConfig& config, const json& sec, std::mt19937_64& rng) {
    const DomainSpec& spec = config.domain;
    const int triples = get_or(sec, "triples", 50);
    const auto basis = enumerate_basis(spec, get_or(sec, "hb_bound", 2));
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    std::uniform_real_distribution<double> s_dist(0.25, 2.0);
    std::ostringstream csv;
    csv << "spec,alpha," << point_header("w", spec.n()) << ",s,lhs,rhs,ratio\n";
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < triples; ++i) {
        const MultiIndex& alpha = basis[pick(rng)];
        const auto eta = random_pi_point(spec, rng, 0.8);
        std::vector<cplx> z(spec.n());
        pull_back(spec, eta, z);
        const double s = s_dist(rng);
        const auto rep = check_herbort_blocki(spec, alpha, make_point(z, Frame::H), s);
        worst = std::min(worst, rep.ratio);
        csv << spec.fingerprint() << ',' << alpha_cell(alpha) << ',' << point_cells(z) << ',' << fmt(s) << ','
            << fmt(rep.lhs) << ',' << fmt(rep.rhs) << ',' << fmt(rep.ratio) << '\n';
    }
    SuiteResult r{"herbort_blocki", false, "min_ratio", worst, config.tolerance("herbort_blocki"),
                  "herbort_blocki.csv"};
    r.pass = worst >= 1.0 - r.tolerance;
    write_atomic(config.out_dir / r.file, csv.str());
    return r;
}

SuiteResult suite_comparability(const RunConfig& config, const json& sec, std::mt19937_64& rng) {
    const DomainSpec& spec = config.domain;
    const int triples = get_or(sec, "triples", 50);
    const int samples = get_or(sec, "comparability_samples", 200);
    std::uniform_real_distribution<double> s_dist(0.25, 3.0);
    std::ostringstream csv;
    csv << "spec," << point_header("w", spec.n()) << ",s,min_ratio,max_ratio,lower_bound,upper_bound\n";
    double worst = 0.0;  // largest log-excess of an extreme over its bound
    bool pass = true;
    for (int i = 0; i < triples; ++i) {
        const auto eta = random_pi_point(spec, rng, 0.8);
        std::vector<cplx> z(spec.n());
        pull_back(spec, eta, z);
        const double s = s_dist(rng);
        const auto rep = check_comparability(spec, make_point(z, Frame::H), s, samples, rng());
        pass = pass && rep.within_bounds(config.tolerance("comparability"));
        worst = std::max({worst, std::log(rep.max_ratio / rep.upper_bound), std::log(rep.lower_bound / rep.min_ratio)});
        csv << spec.fingerprint() << ',' << point_cells(z) << ',' << fmt(s) << ',' << fmt(rep.min_ratio) << ','
            << fmt(rep.max_ratio) << ',' << fmt(rep.lower_bound) << ',' << fmt(rep.upper_bound) << '\n';
    }
    SuiteResult r{"comparability", pass, "max_log_extreme_over_bound", worst, config.tolerance("comparability"),
                  "comparability.csv"};
    write_atomic(config.out_dir / r.file, csv.str());
    return r;
}

SuiteResult suite_estimates(const RunConfig& config, const json& sec) {
    const double tol = config.tolerance("estimate");
    std::vector<double> radii = default_probe_radii();
    if (sec.contains("radii")) radii = get_or(sec, "radii", radii);
    std::vector<EstimateReport> reports;
    reports.push_back(disk_estimate(1.0, -0.5, 0.0, radii, 0.0, tol));
    reports.push_back(disk_estimate(2.0, -0.25, 1.0, radii, 0.0, tol));
    reports.push_back(ball_estimate(1, 1.0, -0.5, radii, 0.0, tol));
    reports.push_back(ball_estimate(2, 1.0, -0.5, radii, 0.0, tol));
    reports.push_back(ball_estimate(2, 1.5, -0.3, radii, 0.0, tol));
    std::ostringstream csv;
    bool header = true;
    double worst = -std::numeric_limits<double>::infinity();
    bool pass = true;
    for (const auto& rep : reports) {
        std::ostringstream part;
        write_csv(part, rep, config.domain.fingerprint());
        std::string text = part.str();
        if (!header) text = text.substr(text.find('\n') + 1);
        header = false;
        csv << text;
        worst = std::max(worst, rep.slope);
        pass = pass && rep.bounded;
    }
    SuiteResult r{"estimate", pass, "max_slope", worst, tol, "estimate.csv"};
    write_atomic(config.out_dir / r.file, csv.str());
    return r;
}

json suite_json(const SuiteResult& r) {
    return {{"suite", r.suite},           {"pass", r.pass},           {"statistic", r.statistic},
            {"worst", r.worst},           {"tolerance", r.tolerance}, {"file", r.file}};
}

std::string pivot_name(const Rational& p) {
    std::string s = to_string(p);
    std::replace(s.begin(), s.end(), '/', '_');
    return "pivot_p" + s + ".csv";
}

} // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig config;
    config.params = doc;
    if (doc.contains("domain")) config.domain = domain_from_json(doc.at("domain"));
    try {
        if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("threads")) config.threads = doc.at("threads").get<int>();
        if (doc.contains("out")) config.out_dir = doc.at("out").get<std::string>();
        if (doc.contains("tolerances")) {
            for (const auto& [key, value] : doc.at("tolerances").items()) {
                if (!default_tolerances().contains(key)) throw ConfigError("unknown tolerance '" + key + "'");
                config.tolerances[key] = value.get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    return config;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    try {
        return parse_config(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
}

void apply_tolerance_override(RunConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("tolerance override must be suite=value");
    const std::string key = assignment.substr(0, eq);
    if (!default_tolerances().contains(key)) throw ConfigError("unknown tolerance '" + key + "'");
    try {
        std::size_t used = 0;
        const double v = std::stod(assignment.substr(eq + 1), &used);
        if (used != assignment.size() - eq - 1) throw ConfigError("bad tolerance value in '" + assignment + "'");
        config.tolerances[key] = v;
    } catch (const std::logic_error&) {
        throw ConfigError("bad tolerance value in '" + assignment + "'");
    }
}

void validate_config(const RunConfig& config) {
    for (const auto& [key, value] : config.tolerances) {
        if (!default_tolerances().contains(key)) throw ConfigError("unknown tolerance '" + key + "'");
        if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("tolerance '" + key + "' must be > 0");
    }
    if (config.threads && *config.threads < 1) throw ConfigError("threads must be >= 1");
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("IOError: cannot open " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("IOError: cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::vector<cplx> random_pi_point(const DomainSpec& spec, std::mt19937_64& rng, double max_radius, double min_disk) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss;
    std::vector<cplx> eta(spec.n());
    for (const Factor& f : spec.factors()) {
        if (f.disk) {
            const double r = min_disk + (max_radius - min_disk) * unit(rng);
            eta[f.offset] = std::polar(r, 2.0 * std::numbers::pi * unit(rng));
        } else {
            double norm = 0.0;
            std::vector<cplx> v(f.dim);
            for (auto& c : v) {
                c = {gauss(rng), gauss(rng)};
                norm += std::norm(c);
            }
            const double r = max_radius * std::pow(unit(rng), 1.0 / (2.0 * f.dim)) / std::sqrt(norm);
            for (int i = 0; i < f.dim; ++i) eta[f.offset + i] = v[i] * r;
        }
    }
    return eta;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
    validate_config(config);
    prepare_out(config);
    const json sec = config.section("verify");
    std::mt19937_64 rng(config.seed);
    const auto points = suite_points(config, get_or(sec, "points", 20), rng);

    std::vector<SuiteResult> results;
    results.push_back(suite_orthogonality(config, sec));
    results.push_back(suite_diagonal(config, points));
    results.push_back(suite_series(config, sec, points));
    results.push_back(suite_herbort_blocki(config, sec, rng));
    results.push_back(suite_comparability(config, sec, rng));
    results.push_back(suite_estimates(config, sec));

    json summary = summary_header(config, "verify");
    bool pass = true;
    for (const auto& r : results) {
        summary["suites"].push_back(suite_json(r));
        pass = pass && r.pass;
        log << (r.pass ? "PASS " : "FAIL ") << r.suite << ' ' << r.statistic << '=' << r.worst << " tol=" << r.tolerance
            << '\n';
    }
    summary["pass"] = pass;
    write_atomic(config.out_dir / "verify_summary.json", summary.dump(2) + "\n");
    return pass ? kExitPass : kExitFailure;
}

int cmd_phase_scan(const RunConfig& config, std::ostream& log) {
    validate_config(config);
    const json sec = config.section("phase_scan");
    const auto ps = rational_list(sec, "p", {Rational(6, 5), Rational(3, 2), Rational(2), Rational(5, 2), Rational(7, 2)});
    const auto qs = rational_list(sec, "q", {Rational(7, 5), Rational(2), Rational(3), Rational(9, 2), Rational(6)});
    const auto ts = rational_list(sec, "t", {Rational(0), Rational(1, 4), Rational(3, 4)});
    PhaseScanOptions options;
    options.levels = get_or(sec, "levels", options.levels);
    options.tail = get_or(sec, "tail", options.tail);
    options.slope_tol = config.tolerance("phase_slope");
    const double threshold = get_or(sec, "threshold", 0.9);
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("phase_scan threshold must lie in (0, 1]");
    for (const auto& p : ps)
        if (!(p > 1)) throw ConfigError("phase_scan p values must exceed 1");
    for (const auto& t : ts)
        if (t < 0) throw ConfigError("phase_scan t values must be >= 0");
    if (options.levels < 2 || options.tail < 2) throw ConfigError("phase_scan needs levels >= 2 and tail >= 2");
    prepare_out(config);

    const auto records = phase_scan(config.domain, ps, qs, ts, options);
    std::ostringstream csv;
    write_phase_csv(csv, config.domain, records);
    write_atomic(config.out_dir / "phase.csv", csv.str());
    for (const auto& p : rational_list(sec, "pivot_p", ps)) {
        std::ostringstream pivot;
        write_pivot_csv(pivot, config.domain, records, p);
        write_atomic(config.out_dir / pivot_name(p), pivot.str());
    }
    const std::size_t scored = scored_count(records);
    const double agreement = agreement_fraction(records);
    const bool pass = scored == 0 || agreement >= threshold;
    json summary = summary_header(config, "phase_scan");
    summary["records"] = records;
    summary["scored"] = scored;
    summary["agreement"] = scored == 0 ? json(nullptr) : json(agreement);
    summary["threshold"] = threshold;
    summary["pass"] = pass;
    write_atomic(config.out_dir / "phase.json", summary.dump(2) + "\n");
    log << (pass ? "PASS" : "FAIL") << " phase_scan agreement=" << agreement << " scored=" << scored
        << " cells=" << records.size() << '\n';
    return pass ? kExitPass : kExitFailure;
}

int cmd_witness(const RunConfig& config, std::ostream& log) {
    validate_config(config);
    const json sec = config.section("witness");
    std::string regime = "1";
    if (sec.contains("regime")) {
        const json& r = sec.at("regime");
        regime = r.is_string() ? r.get<std::string>() : r.dump();
    }
    if (regime == "regime1") regime = "1";
    if (regime == "regime3") regime = "3";
    if (regime != "1" && regime != "3") throw ConfigError("unknown witness regime '" + regime + "'");
    const DomainSpec& spec = config.domain;
    const double t = to_double(rational_or(sec, "t", Rational(0)));
    if (t < 0.0) throw ConfigError("witness t must be >= 0");

    json summary = summary_header(config, "witness");
    summary["regime"] = regime;
    bool pass = false;
    if (regime == "1") {
        const Rational q = rational_or(sec, "q", regime1_threshold(spec));
        Regime1Options options;
        options.bound = get_or(sec, "bound", options.bound);
        options.radial = get_or(sec, "radial", options.radial);
        options.angular = get_or(sec, "angular", options.angular);
        options.off_tol = config.tolerance("witness_offdiag");
        options.spread_tol = config.tolerance("witness_spread");
        prepare_out(config);
        const auto rep = witness_regime1(spec, q, t, options);
        std::ostringstream table;
        table << "spec,beta,re,im,abs,witness\n";
        for (const auto& row : rep.table)
            table << spec.fingerprint() << ',' << alpha_cell(row.beta) << ',' << fmt(row.value.real()) << ','
                  << fmt(row.value.imag()) << ',' << fmt(std::abs(row.value)) << ','
                  << (row.beta == rep.witness) << '\n';
        write_atomic(config.out_dir / "witness_table.csv", table.str());
        std::ostringstream pts;
        pts << "spec," << point_header("z", spec.n()) << ",constant_re,constant_im,exact\n";
        for (std::size_t i = 0; i < rep.points.size(); ++i)
            pts << spec.fingerprint() << ',' << point_cells(rep.points[i].coords) << ','
                << fmt(rep.constants[i].real()) << ',' << fmt(rep.constants[i].imag()) << ','
                << fmt(rep.exact_constant) << '\n';
        write_atomic(config.out_dir / "witness_points.csv", pts.str());
        pass = rep.pass;
        summary["q"] = to_string(q);
        summary["t"] = t;
        summary["witness"] = rep.witness.entries;
        summary["witness_value"] = {rep.witness_value.real(), rep.witness_value.imag()};
        summary["max_off_witness"] = rep.max_off_witness;
        summary["constant_spread"] = rep.constant_spread;
        summary["exact_constant"] = rep.exact_constant;
        summary["threshold"] = to_string(rep.threshold);
        summary["member_at_q"] = rep.member_at_q;
        summary["member_below_threshold"] = rep.member_below_threshold;
        summary["member_at_threshold"] = rep.member_at_threshold;
    } else {
        const Rational p = rational_or(sec, "p", Rational(6, 5));
        const Rational q = rational_or(sec, "q", p);
        if (!(p > 1) || q < p) throw ConfigError("witness needs 1 < p <= q");
        const int j_max = get_or(sec, "j_max", 8);
        if (j_max < 2) throw ConfigError("witness j_max must be >= 2");
        prepare_out(config);
        std::vector<SequenceReport> rows;
        for (int j = 1; j <= j_max; ++j) rows.push_back(witness_sequence_fj(spec, j, to_double(p), to_double(q), t));
        std::ostringstream csv;
        csv << "spec,j,norm_p,log_proxy,proxy\n";
        bool increasing = true, finite = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            csv << spec.fingerprint() << ',' << rows[i].j << ',' << fmt(rows[i].norm_p) << ','
                << fmt(rows[i].log_proxy) << ',' << fmt(rows[i].proxy) << '\n';
            finite = finite && std::isfinite(rows[i].norm_p) && std::isfinite(rows[i].log_proxy);
            if (i > 0) increasing = increasing && rows[i].log_proxy > rows[i - 1].log_proxy;
        }
        write_atomic(config.out_dir / "witness_sequence.csv", csv.str());
        const auto& half = rows[j_max / 2 - 1];
        const auto& last = rows.back();
        const double growth = std::exp(last.log_proxy - half.log_proxy);
        const Verdict verdict = predicted_verdict(spec, p, q, rational_or(sec, "t", Rational(0)));
        pass = finite && increasing && growth >= config.tolerance("sequence_growth");
        summary["p"] = to_string(p);
        summary["q"] = to_string(q);
        summary["t"] = t;
        summary["verdict"] = verdict;
        summary["proxy_growth"] = growth;
        summary["norm_variation"] = std::abs(last.norm_p / half.norm_p - 1.0);
        summary["proxy_increasing"] = increasing;
    }
    summary["pass"] = pass;
    write_atomic(config.out_dir / "witness.json", summary.dump(2) + "\n");
    log << (pass ? "PASS" : "FAIL") << " witness regime " << regime << '\n';
    return pass ? kExitPass : kExitFailure;
}

json kernel_response(const DomainSpec& spec, const json& request) {
    if (!request.is_object() || !request.contains("pairs") || !request.at("pairs").is_array())
        throw ConfigError("kernel request needs a 'pairs' array");
    const int truncation = get_or(request, "truncation", -1);
    json response;
    response["schema"] = kReportSchema;
    response["spec"] = spec.fingerprint();
    response["results"] = json::array();
    for (const json& pair : request.at("pairs")) {
        if (!pair.contains("z") || !pair.contains("w")) throw ConfigError("kernel pair needs 'z' and 'w'");
        const CPoint z = make_point(point_from_json(pair.at("z"), spec.n()), Frame::H);
        const CPoint w = make_point(point_from_json(pair.at("w"), spec.n()), Frame::H);
        json row;
        row["z"] = point_to_json(z.coords);
        row["w"] = point_to_json(w.coords);
        try {
            const cplx k = bergman_kernel(spec, z, w).value;
            row["value"] = {k.real(), k.imag()};
            row["diag_z"] = bergman_diag(spec, z);
            row["diag_w"] = bergman_diag(spec, w);
            if (truncation >= 0) {
                const cplx s = kernel_series(spec, z, w, truncation).value;
                row["series"] = {s.real(), s.imag()};
                row["truncation"] = truncation;
            }
        } catch (const Error& e) {
            row["error"] = e.what();
        }
        response["results"].push_back(row);
    }
    return response;
}

int cmd_kernel(const RunConfig& config, std::ostream& log, std::ostream& response) {
    validate_config(config);
    const json request = config.section("kernel");
    const json body = kernel_response(config.domain, request);
    prepare_out(config);
    write_atomic(config.out_dir / "kernel.json", body.dump(2) + "\n");
    response << body.dump(2) << '\n';
    bool ok = true;
    for (const json& row : body.at("results")) ok = ok && !row.contains("error");
    log << (ok ? "PASS" : "FAIL") << " kernel " << body.at("results").size() << " pairs\n";
    return ok ? kExitPass : kExitFailure;
}

} // namespace hartogs

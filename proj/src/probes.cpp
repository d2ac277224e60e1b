#include "hartogs/probes.hpp"

#include "hartogs/errors.hpp"
#include "hartogs/estimates.hpp"
#include "hartogs/parallel.hpp"
#include "hartogs/quadrature.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace hartogs {

namespace {

int last_exponent(const DomainSpec& spec) { return spec.n() - 1 + spec.camber(); }

/// log of T applied to the factors other than the last disk, evaluated on the
/// product of constants (balls) and the Jacobian monomials (other disks).
double log_other_multiplier(const DomainSpec& spec, double t) {
    double s = 0.0;
    for (const Factor& f : spec.factors()) {
        if (!f.disk) s += std::log(f.dim * boost::math::beta(f.dim, (f.dim + 1) * t + 1.0));
        else if (f.offset != spec.n() - 1)
            s += std::log((f.jac_exp + 1.0) * boost::math::beta(f.jac_exp * (1.0 + t) + 1.0, 2.0 * t + 1.0));
    }
    return s;
}

/// log of the L^s-norm^s contributed by the other factors for those monomials.
double log_other_mass(const DomainSpec& spec) {
    double s = 0.0;
    for (int m = spec.k(); m + 1 < spec.n(); ++m) s -= std::log(spec.jacobian_exponent(m) + 1.0);
    return s;
}

/// log(2 (1 - eps^g) / g) for eps in (0,1), any g.
double log_punctured_mass(double g, double log_eps) {
    if (g == 0.0) return std::log(2.0 * -log_eps);
    const double x = g * log_eps;
    if (x > 30.0) return x + std::log1p(-std::exp(-x)) + std::log(2.0 / -g);
    return std::log(2.0 * -std::expm1(x) / g);
}

double log_sum_exp(const std::vector<double>& v) {
    const double top = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - top);
    return top + std::log(s);
}

struct BumpKey {
    int N;
    double t, delta;
    int per_panel;
    auto operator<=>(const BumpKey&) const = default;
};

struct BumpValues {
    FactorRule rule;
    std::vector<double> modulus;  // |S(eta_i)|
};

const BumpValues& bump_values(const BumpKey& key) {
    static std::mutex mutex;
    static std::map<BumpKey, BumpValues> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double s = 2.0 + 2.0 * key.t;
    const double w = 1.0 - key.delta;
    const int N = key.N;
    const int terms = static_cast<int>(60.0 / key.delta) + 60;
    std::vector<double> b(terms);
    for (int m = 0; m < terms; ++m) {
        const double log_a = std::lgamma(s + m) - std::lgamma(s) - std::lgamma(m + 1.0) + m * std::log(w);
        b[m] = std::exp(log_a + std::log(m + N + 1.0) +
                        std::log(boost::math::beta(m + N + key.t * N + 1.0, 2.0 * key.t + 1.0)));
    }
    BumpValues values;
    values.rule = graded_disk_rule(key.delta, key.per_panel);
    values.modulus.resize(values.rule.size());
    parallel_for(values.rule.size(), [&](std::size_t i) {
        const cplx x = values.rule.node(i)[0];
        cplx acc = 0.0;
        for (int m = terms; m-- > 0;) acc = acc * x + b[m];
        values.modulus[i] = std::abs(acc);
    });
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(values)).first->second;
}

} // namespace

double tail_slope(const std::vector<double>& x, const std::vector<double>& y, int tail) {
    const std::size_t count = std::min<std::size_t>(x.size(), static_cast<std::size_t>(std::max(tail, 2)));
    if (count < 2 || x.size() != y.size()) throw ParameterOutOfRange("slope needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = x.size() - count; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double c = static_cast<double>(count);
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

FamilyProbe probe_truncated_witness(const DomainSpec& spec, double p, double q, double t, int levels, int tail) {
    FamilyProbe probe;
    probe.family = "truncated_witness";
    const double N = last_exponent(spec);
    const double other = log_other_mass(spec);
    const double log_c = std::log(regime1_constant(spec, t));
    const double log_in = (other - std::log(N * p / 2.0 + N + 1.0)) / p;
    const double g = (2.0 - q) * N + 2.0;
    for (int l = 1; l <= levels; ++l) {
        const double log_eps = -4.0 * l * std::log(10.0);
        const double log_out = log_c + (other + log_punctured_mass(g, log_eps)) / q;
        probe.scales.push_back(std::exp(-log_eps));
        probe.ratios.push_back(std::exp(log_out - log_in));
    }
    probe.slope = tail_slope(probe.scales, probe.ratios, tail);
    return probe;
}

FamilyProbe probe_boundary_bump(const DomainSpec& spec, double p, double q, double t, int levels, int tail,
                                int per_panel) {
    FamilyProbe probe;
    probe.family = "boundary_bump";
    const int N = last_exponent(spec);
    const double other = log_other_mass(spec);
    const double mult = log_other_multiplier(spec, t);
    const double s = 2.0 + 2.0 * t;
    for (int l = 1; l <= levels; ++l) {
        const double delta = std::ldexp(1.0, -(l + 1));
        const double gap = delta * (2.0 - delta);
        const double log_in = (other + std::log(disk_weighted_integral_gap(0.0, 2.0 * N, s * p, gap))) / p;
        const BumpValues& values = bump_values({N, t, delta, per_panel});
        double total = 0.0;
        for (std::size_t i = 0; i < values.rule.size(); ++i) {
            const double r2 = std::norm(values.rule.node(i)[0]);
            total += values.rule.weights[i] * std::pow(values.modulus[i], q) * std::pow(r2, N);
        }
        const double log_out = mult + (other + std::log(total)) / q;
        probe.scales.push_back(1.0 / delta);
        probe.ratios.push_back(std::exp(log_out - log_in));
    }
    probe.slope = tail_slope(probe.scales, probe.ratios, tail);
    return probe;
}

FamilyProbe probe_shell_sequence(const DomainSpec& spec, double p, double q, double t, int levels, int tail) {
    FamilyProbe probe;
    probe.family = "shell_sequence";
    const double N = last_exponent(spec);
    const double g = (2.0 - q) * N + 2.0;
    if (!(g > 0.0)) {
        probe.skipped = true;
        return probe;
    }
    const double other = log_other_mass(spec);
    const double mult = log_other_multiplier(spec, t);
    for (int l = 1; l <= levels; ++l) {
        const int j = 1 << (l + 1);
        std::vector<double> shells;
        for (int i = 1; i <= j; ++i) {
            const double x = 1.0 / i - 2.0 / p * (N + 1.0) - N;
            shells.push_back(std::log(2.0) + log_shell_integral(log_shell_radius(i + 1), log_shell_radius(i),
                                                                x + (2.0 + 2.0 * t) * N + 1.0, 2.0 * t, 2));
        }
        const double log_c = log_sum_exp(shells);
        const double log_out = mult + log_c + (other + std::log(2.0 / g)) / q;
        const double log_in = std::log(sequence_norm_pp(spec, j, p)) / p;
        probe.scales.push_back(j);
        probe.ratios.push_back(std::exp(log_out - log_in));
    }
    probe.slope = tail_slope(probe.scales, probe.ratios, tail);
    return probe;
}

PhaseRecord phase_probe(const DomainSpec& spec, const Rational& p, const Rational& q, const Rational& t,
                        const PhaseScanOptions& options) {
    PhaseRecord record;
    record.p = p;
    record.q = q;
    record.t = t;
    record.verdict = predicted_verdict(spec, p, q, t);
    if (record.verdict.regime == Regime::NotApplicable) {
        record.excluded = true;
        return record;
    }
    record.excluded = record.verdict.boundary_case;
    const double pd = to_double(p), qd = to_double(q), td = to_double(t);
    try {
        record.families.push_back(probe_truncated_witness(spec, pd, qd, td, options.levels, options.tail));
        record.families.push_back(
            probe_boundary_bump(spec, pd, qd, td, options.levels, options.tail, options.per_panel));
        record.families.push_back(probe_shell_sequence(spec, pd, qd, td, options.levels, options.tail));
        double slope = -std::numeric_limits<double>::infinity();
        for (const FamilyProbe& f : record.families) {
            if (f.skipped) continue;
            if (!std::isfinite(f.slope)) slope = std::numeric_limits<double>::infinity();
            else slope = std::max(slope, f.slope);
        }
        record.slope = slope;
        record.observed_bounded = slope <= options.slope_tol;
        record.agree = record.observed_bounded == record.verdict.bounded;
    } catch (const Error& e) {
        record.error = e.what();
        record.agree = false;
    }
    return record;
}

std::vector<PhaseRecord> phase_scan(const DomainSpec& spec, const std::vector<Rational>& p_grid,
                                    const std::vector<Rational>& q_grid, const std::vector<Rational>& t_grid,
                                    const PhaseScanOptions& options) {
    if (options.levels < 2 || options.tail < 2) throw ParameterOutOfRange("phase scan needs at least two levels");
    std::vector<std::tuple<Rational, Rational, Rational>> cells;
    for (const auto& p : p_grid)
        for (const auto& q : q_grid)
            for (const auto& t : t_grid) cells.emplace_back(p, q, t);
    std::vector<PhaseRecord> records(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto& [p, q, t] = cells[i];
        records[i] = phase_probe(spec, p, q, t, options);
    });
    return records;
}

std::size_t scored_count(const std::vector<PhaseRecord>& records) {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const PhaseRecord& r) {
        return !r.excluded && r.error.empty();
    }));
}

double agreement_fraction(const std::vector<PhaseRecord>& records) {
    std::size_t scored = 0, agree = 0;
    for (const auto& r : records) {
        if (r.excluded) continue;
        ++scored;
        if (r.error.empty() && r.agree) ++agree;
    }
    return scored == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(scored);
}

void write_phase_csv(std::ostream& out, const DomainSpec& spec, const std::vector<PhaseRecord>& records) {
    out << "spec,p,q,t,regime,predicted_bounded,bounded,slope,agree,excluded,witness_slope,bump_slope,sequence_slope,"
           "error\n";
    out.precision(10);
    for (const auto& r : records) {
        out << spec.fingerprint() << ',' << to_string(r.p) << ',' << to_string(r.q) << ',' << to_string(r.t) << ','
            << to_string(r.verdict.regime) << ',' << r.verdict.bounded << ',' << r.observed_bounded << ',' << r.slope
            << ',' << r.agree << ',' << r.excluded;
        for (const char* name : {"truncated_witness", "boundary_bump", "shell_sequence"}) {
            out << ',';
            for (const auto& f : r.families)
                if (f.family == name && !f.skipped) out << f.slope;
        }
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << ',' << err << '\n';
    }
}

void write_pivot_csv(std::ostream& out, const DomainSpec& spec, const std::vector<PhaseRecord>& records,
                     const Rational& p) {
    std::vector<Rational> qs, ts;
    for (const auto& r : records) {
        if (r.p != p) continue;
        if (std::find(qs.begin(), qs.end(), r.q) == qs.end()) qs.push_back(r.q);
        if (std::find(ts.begin(), ts.end(), r.t) == ts.end()) ts.push_back(r.t);
    }
    std::sort(qs.begin(), qs.end());
    std::sort(ts.begin(), ts.end());
    out << "spec,p,row,q";
    for (const auto& t : ts) out << ",t=" << to_string(t);
    out << '\n';
    for (const auto& q : qs) {
        out << spec.fingerprint() << ',' << to_string(p) << ",cell," << to_string(q);
        for (const auto& t : ts) {
            out << ',';
            for (const auto& r : records) {
                if (r.p != p || r.q != q || r.t != t) continue;
                if (r.verdict.regime == Regime::NotApplicable) out << "n/a";
                else
                    out << 'R' << to_string(r.verdict.regime) << (r.observed_bounded ? "B" : "U")
                        << (r.excluded ? "*" : (r.agree ? "" : "!"));
            }
        }
        out << '\n';
    }
    // exact boundary curves at this p
    out << spec.fingerprint() << ',' << to_string(p) << ",q_unbounded," << to_string(regime1_threshold(spec));
    for (std::size_t i = 0; i < ts.size(); ++i) out << ',';
    out << '\n';
    out << spec.fingerprint() << ',' << to_string(p) << ",q_regime3_upper," << to_string(regime3_upper(spec, p));
    for (std::size_t i = 0; i < ts.size(); ++i) out << ',';
    out << '\n';
    out << spec.fingerprint() << ',' << to_string(p) << ",t_regime3," << to_string(regime3_threshold(spec, p));
    for (std::size_t i = 0; i < ts.size(); ++i) out << ',';
    out << '\n';
    for (const auto& q : qs) {
        if (q < p) continue;
        out << spec.fingerprint() << ',' << to_string(p) << ",t_regime2," << to_string(q) << ','
            << to_string(1 / p - 1 / q);
        for (std::size_t i = 1; i < ts.size(); ++i) out << ',';
        out << '\n';
    }
}

void to_json(nlohmann::json& j, const FamilyProbe& f) {
    j = {{"family", f.family}, {"scales", f.scales}, {"ratios", f.ratios}, {"skipped", f.skipped}};
    j["slope"] = f.skipped ? nlohmann::json(nullptr) : nlohmann::json(f.slope);
}

void to_json(nlohmann::json& j, const PhaseRecord& r) {
    j = {{"p", to_string(r.p)},
         {"q", to_string(r.q)},
         {"t", to_string(r.t)},
         {"regime", to_string(r.verdict.regime)},
         {"verdict", r.verdict},
         {"bounded", r.observed_bounded},
         {"agree", r.agree},
         {"excluded", r.excluded},
         {"families", r.families},
         {"error", r.error}};
    j["slope"] = std::isfinite(r.slope) ? nlohmann::json(r.slope) : nlohmann::json(nullptr);
}

} // namespace hartogs

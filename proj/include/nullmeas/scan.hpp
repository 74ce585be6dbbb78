/**
 * @file
 * @brief Grid scans, figure datasets and their CSV / JSON serialization.
 *
 * Run configurations are JSON documents whose keys mirror ::nullmeas::ScanConfig.
 * Unknown keys are rejected.
 */

#pragma once

#include "nullmeas/distribution.hpp"
#include "nullmeas/info_measures.hpp"
#include "nullmeas/rates.hpp"
#include "nullmeas/threshold.hpp"
#include "nullmeas/trajectory_mc.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace nullmeas {

enum class OutputKind { snapshots, rates, thresholds, mc };
enum class OutputFormat { csv, json };

[[nodiscard]] inline std::string_view to_string(OutputKind k) noexcept {
    switch (k) {
        case OutputKind::snapshots: return "snapshots";
        case OutputKind::rates: return "rates";
        case OutputKind::thresholds: return "thresholds";
        case OutputKind::mc: return "mc";
    }
    return "unknown";
}

[[nodiscard]] inline std::string_view to_string(OutputFormat f) noexcept {
    return f == OutputFormat::csv ? "csv" : "json";
}

[[nodiscard]] inline OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") {
        return OutputFormat::csv;
    }
    if (text == "json") {
        return OutputFormat::json;
    }
    throw ValidationError{"format must be 'csv' or 'json', got '" + std::string{text} + "'"};
}

[[nodiscard]] inline OutputKind parse_output_kind(std::string_view text) {
    for (auto k : {OutputKind::snapshots, OutputKind::rates, OutputKind::thresholds, OutputKind::mc}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw ValidationError{"unknown output '" + std::string{text} + "'"};
}

/// Parses "0.5,0.5" into a validated distribution.
[[nodiscard]] inline LevelDistribution parse_prior(std::string_view text) {
    std::vector<double> probs;
    std::string item;
    std::istringstream in{std::string{text}};
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception &) {
            throw ValidationError{"prior entry '" + item + "' is not a number"};
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) {
            throw ValidationError{"prior entry '" + item + "' is not a number"};
        }
        probs.push_back(value);
    }
    return LevelDistribution{std::move(probs)};
}

struct ScanConfig {
    LevelDistribution prior{0.5, 0.5};
    double tau_min{0.0};
    double tau_max{default_tau_max};
    std::uint64_t points{501};
    std::set<OutputKind> outputs{OutputKind::snapshots};
    IMaxMode i_max_mode{IMaxMode::window};
    std::optional<McConfig> mc;
    OutputFormat format{OutputFormat::csv};

    void validate() const {
        ScaledTime{tau_min};
        ScaledTime{tau_max};
        if (!(tau_min < tau_max)) {
            throw ValidationError{"field 'tau_min'/'tau_max': tau_min must be strictly less than tau_max"};
        }
        if (points < 2) {
            throw ValidationError{"field 'points': must be >= 2"};
        }
        if (outputs.contains(OutputKind::mc) && !mc) {
            throw ValidationError{"field 'mc': required when outputs contains 'mc'"};
        }
        if (mc) {
            mc->validate();
        }
    }

    friend bool operator==(const ScanConfig &a, const ScanConfig &b) {
        const bool same_mc = a.mc.has_value() == b.mc.has_value() &&
                             (!a.mc || (a.mc->prior == b.mc->prior && a.mc->tau == b.mc->tau &&
                                        a.mc->samples == b.mc->samples && a.mc->seed == b.mc->seed &&
                                        a.mc->workers == b.mc->workers));
        return a.prior == b.prior && a.tau_min == b.tau_min && a.tau_max == b.tau_max && a.points == b.points &&
               a.outputs == b.outputs && a.i_max_mode == b.i_max_mode && a.format == b.format && same_mc;
    }
};

// ---------------------------------------------------------------------------
// config (de)serialization

[[nodiscard]] inline nlohmann::json to_json(const ScanConfig &c) {
    nlohmann::json j;
    j["prior"] = c.prior.values();
    j["tau_min"] = c.tau_min;
    j["tau_max"] = c.tau_max;
    j["points"] = c.points;
    auto outputs = nlohmann::json::array();
    for (auto k : c.outputs) {
        outputs.push_back(std::string{to_string(k)});
    }
    j["outputs"] = outputs;
    j["i_max_mode"] = std::string{to_string(c.i_max_mode)};
    j["format"] = std::string{to_string(c.format)};
    if (c.mc) {
        j["mc"] = {{"prior", c.mc->prior.values()},
                   {"tau", c.mc->tau.value()},
                   {"samples", c.mc->samples},
                   {"seed", c.mc->seed},
                   {"workers", c.mc->workers}};
    }
    return j;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json &j, std::initializer_list<std::string_view> allowed,
                                std::string_view where) {
    for (const auto &item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ValidationError{"unknown key '" + item.key() + "' in " + std::string{where}};
        }
    }
}

template <typename T>
[[nodiscard]] T field(const nlohmann::json &j, const char *key, std::string_view where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError{"field '" + std::string{where} + key + "': " + e.what()};
    }
}

}  // namespace detail

[[nodiscard]] inline McConfig mc_config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ValidationError{"field 'mc': expected an object"};
    }
    detail::reject_unknown_keys(j, {"prior", "tau", "samples", "seed", "workers"}, "'mc'");
    McConfig mc{LevelDistribution{detail::field<std::vector<double>>(j, "prior", "mc.")},
                ScaledTime{detail::field<double>(j, "tau", "mc.")}};
    mc.samples = detail::field<std::uint64_t>(j, "samples", "mc.");
    mc.seed = detail::field<std::uint64_t>(j, "seed", "mc.");
    if (j.contains("workers")) {
        mc.workers = detail::field<unsigned>(j, "workers", "mc.");
    }
    mc.validate();
    return mc;
}

/// Builds a validated config from JSON; missing keys take their defaults.
[[nodiscard]] inline ScanConfig scan_config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ValidationError{"config must be a JSON object"};
    }
    detail::reject_unknown_keys(j, {"prior", "tau_min", "tau_max", "points", "outputs", "i_max_mode", "format", "mc"},
                                "config");
    ScanConfig c;
    if (!j.contains("prior")) {
        throw ValidationError{"field 'prior': required"};
    }
    c.prior = LevelDistribution{detail::field<std::vector<double>>(j, "prior", "")};
    if (j.contains("tau_min")) {
        c.tau_min = detail::field<double>(j, "tau_min", "");
    }
    if (j.contains("tau_max")) {
        c.tau_max = detail::field<double>(j, "tau_max", "");
    }
    if (j.contains("points")) {
        c.points = detail::field<std::uint64_t>(j, "points", "");
    }
    if (j.contains("outputs")) {
        c.outputs.clear();
        for (const auto &name : detail::field<std::vector<std::string>>(j, "outputs", "")) {
            c.outputs.insert(parse_output_kind(name));
        }
    }
    if (j.contains("i_max_mode")) {
        c.i_max_mode = parse_i_max_mode(detail::field<std::string>(j, "i_max_mode", ""));
    }
    if (j.contains("format")) {
        c.format = parse_output_format(detail::field<std::string>(j, "format", ""));
    }
    if (j.contains("mc")) {
        c.mc = mc_config_from_json(j.at("mc"));
    }
    c.validate();
    return c;
}

/// Parses config text; JSON syntax errors carry the line and column.
[[nodiscard]] inline ScanConfig parse_scan_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError{std::string{"config parse error: "} + e.what()};
    }
    return scan_config_from_json(j);
}

// ---------------------------------------------------------------------------
// grid evaluation

struct ScanRow {
    InfoSnapshot info;
    std::optional<RateSnapshot> rates;
};

/// Uniform grid of @p points values including both endpoints.
[[nodiscard]] inline std::vector<double> uniform_grid(double lo, double hi, std::uint64_t points) {
    if (points < 2) {
        throw ValidationError{"grid needs at least two points"};
    }
    std::vector<double> grid(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::uint64_t i = 0; i < points; ++i) {
        grid[i] = lo + static_cast<double>(i) * step;
    }
    grid.back() = hi;
    return grid;
}

[[nodiscard]] inline std::vector<ScanRow> scan_rows(const LevelDistribution &prior, double tau_min, double tau_max,
                                                    std::uint64_t points, bool with_rates) {
    std::vector<ScanRow> rows;
    rows.reserve(points);
    for (const double tau : uniform_grid(tau_min, tau_max, points)) {
        const ScaledTime t{tau};
        ScanRow row{snapshot(prior, t), std::nullopt};
        if (with_rates) {
            row.rates = rate_snapshot(prior, t);
        }
        rows.push_back(row);
    }
    return rows;
}

[[nodiscard]] inline std::vector<ScanRow> run_scan(const ScanConfig &config) {
    config.validate();
    return scan_rows(config.prior, config.tau_min, config.tau_max, config.points,
                     config.outputs.contains(OutputKind::rates));
}

// ---------------------------------------------------------------------------
// figures

struct FigurePanel {
    char panel;
    LevelDistribution prior;
    std::vector<ScanRow> rows;
};

struct FigureDataset {
    std::string figure_id;
    bool rates{false};
    std::vector<FigurePanel> panels;
};

inline constexpr std::uint64_t figure_points = 501;

/// fig1 / fig2: static quantities for the qubit / qutrit priors; fig3 / fig4: their rates.
[[nodiscard]] inline FigureDataset emit_figure_data(std::string_view figure_id) {
    FigureDataset ds;
    ds.figure_id = std::string{figure_id};
    std::vector<LevelDistribution> priors;
    if (figure_id == "fig1" || figure_id == "fig3") {
        priors = qubit_benchmark_priors();
    } else if (figure_id == "fig2" || figure_id == "fig4") {
        priors = qutrit_benchmark_priors();
    } else {
        throw ValidationError{"unknown figure id '" + std::string{figure_id} + "' (expected fig1..fig4)"};
    }
    ds.rates = figure_id == "fig3" || figure_id == "fig4";
    char panel = 'a';
    for (const auto &p : priors) {
        ds.panels.push_back({panel++, p, scan_rows(p, 0.0, default_tau_max, figure_points, ds.rates)});
    }
    return ds;
}

// ---------------------------------------------------------------------------
// output

inline constexpr std::string_view snapshot_header =
    "tau,p_null,entropy_prior,entropy_post_null,info_gain,mutual_info,fidelity,p_rev,rel_entropy";
inline constexpr std::string_view rate_header_suffix = ",d_info_gain,d_fidelity,d_p_rev";

/// Fixed 12-significant-digit rendering used by every CSV writer.
[[nodiscard]] inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

[[nodiscard]] inline std::string format_prior(const LevelDistribution &p) {
    std::string out;
    for (std::size_t n = 0; n < p.levels(); ++n) {
        out += (n ? ";" : "") + format_number(p[n]);
    }
    return out;
}

inline void write_csv(std::ostream &os, const std::vector<ScanRow> &rows) {
    const bool with_rates = !rows.empty() && rows.front().rates.has_value();
    os << snapshot_header << (with_rates ? rate_header_suffix : "") << '\n';
    for (const auto &r : rows) {
        const auto &s = r.info;
        os << format_number(s.tau.value()) << ',' << format_number(s.p_null) << ',' << format_number(s.entropy_prior)
           << ',' << format_number(s.entropy_posterior_null) << ',' << format_number(s.info_gain) << ','
           << format_number(s.mutual_info) << ',' << format_number(s.fidelity) << ',' << format_number(s.p_rev)
           << ',' << format_number(s.rel_entropy);
        if (r.rates) {
            os << ',' << format_number(r.rates->d_info_gain) << ',' << format_number(r.rates->d_fidelity) << ','
               << format_number(r.rates->d_p_rev);
        }
        os << '\n';
    }
}

[[nodiscard]] inline nlohmann::json to_json(const ScanRow &r) {
    const auto &s = r.info;
    nlohmann::json j = {{"tau", s.tau.value()},
                        {"p_null", s.p_null},
                        {"entropy_prior", s.entropy_prior},
                        {"entropy_post_null", s.entropy_posterior_null},
                        {"info_gain", s.info_gain},
                        {"mutual_info", s.mutual_info},
                        {"fidelity", s.fidelity},
                        {"p_rev", s.p_rev},
                        {"rel_entropy", s.rel_entropy}};
    if (r.rates) {
        j["d_info_gain"] = r.rates->d_info_gain;
        j["d_fidelity"] = r.rates->d_fidelity;
        j["d_p_rev"] = r.rates->d_p_rev;
    }
    return j;
}

[[nodiscard]] inline nlohmann::json to_json(const std::vector<ScanRow> &rows) {
    auto arr = nlohmann::json::array();
    for (const auto &r : rows) {
        arr.push_back(to_json(r));
    }
    return arr;
}

[[nodiscard]] inline nlohmann::json optional_json(const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

[[nodiscard]] inline nlohmann::json to_json(const ThresholdReport &r) {
    return {{"prior", r.prior.values()},
            {"tau_fidelity_90", optional_json(r.tau_fidelity_90)},
            {"tau_prev_50", optional_json(r.tau_prev_50)},
            {"tau_info_90", optional_json(r.tau_info_90)},
            {"i_max_mode", std::string{to_string(r.i_max_mode)}},
            {"tau_max", r.tau_max},
            {"i_max", r.i_max}};
}

inline constexpr std::string_view threshold_header = "prior,tau_fidelity_90,tau_prev_50,tau_info_90,i_max_mode,tau_max,i_max";

inline void write_threshold_csv_row(std::ostream &os, const ThresholdReport &r) {
    auto opt = [](const std::optional<double> &v) { return v ? format_number(*v) : std::string{"not_reached"}; };
    os << format_prior(r.prior) << ',' << opt(r.tau_fidelity_90) << ',' << opt(r.tau_prev_50) << ','
       << opt(r.tau_info_90) << ',' << to_string(r.i_max_mode) << ',' << format_number(r.tau_max) << ','
       << format_number(r.i_max) << '\n';
}

[[nodiscard]] inline nlohmann::json to_json(const McValidation &v) {
    const auto &e = v.estimate;
    nlohmann::json j = {{"samples", e.samples},
                        {"n_null", e.n_null},
                        {"p_null_hat", e.p_null_hat},
                        {"p_null_se", e.p_null_se},
                        {"prior_hat", e.prior_hat},
                        {"posterior_null_hat", e.posterior_null_hat},
                        {"posterior_null_se", e.posterior_null_se},
                        {"info_gain_hat", e.info_gain_hat},
                        {"info_gain_se", e.info_gain_se},
                        {"insufficient_conditioning", v.insufficient_conditioning},
                        {"passed", v.passed()}};
    auto checks = nlohmann::json::array();
    for (const auto &c : v.checks) {
        checks.push_back({{"quantity", c.name},
                          {"estimate", c.estimate},
                          {"expected", c.expected},
                          {"standard_error", c.standard_error},
                          {"allowed", c.allowed},
                          {"passed", c.passed}});
    }
    j["checks"] = checks;
    return j;
}

inline constexpr std::string_view mc_header = "quantity,estimate,expected,standard_error,allowed,passed";

inline void write_mc_csv(std::ostream &os, const McValidation &v) {
    os << mc_header << '\n';
    for (const auto &c : v.checks) {
        os << c.name << ',' << format_number(c.estimate) << ',' << format_number(c.expected) << ','
           << format_number(c.standard_error) << ',' << format_number(c.allowed) << ',' << (c.passed ? "pass" : "fail")
           << '\n';
    }
}

/// Writes every output requested by @p config; CSV sections are separated by a blank line.
inline void write_scan_output(std::ostream &os, const ScanConfig &config) {
    config.validate();
    const bool tabulate = config.outputs.contains(OutputKind::snapshots) || config.outputs.contains(OutputKind::rates);
    std::vector<ScanRow> rows;
    if (tabulate) {
        rows = run_scan(config);
    }
    std::optional<ThresholdReport> thresholds;
    if (config.outputs.contains(OutputKind::thresholds)) {
        thresholds = threshold_report(config.prior, config.i_max_mode, config.tau_max);
    }
    std::optional<McValidation> mc;
    if (config.outputs.contains(OutputKind::mc)) {
        mc = mc_validate(*config.mc);
    }

    if (config.format == OutputFormat::json) {
        nlohmann::json j = {{"config", to_json(config)}};
        if (tabulate) {
            j["rows"] = to_json(rows);
        }
        if (thresholds) {
            j["thresholds"] = to_json(*thresholds);
        }
        if (mc) {
            j["mc"] = to_json(*mc);
        }
        os << j.dump(2) << '\n';
        return;
    }
    bool first = true;
    auto section = [&] {
        if (!first) {
            os << '\n';
        }
        first = false;
    };
    if (tabulate) {
        section();
        write_csv(os, rows);
    }
    if (thresholds) {
        section();
        os << threshold_header << '\n';
        write_threshold_csv_row(os, *thresholds);
    }
    if (mc) {
        section();
        write_mc_csv(os, *mc);
    }
}

}  // namespace nullmeas

// Command-line front end: grid scans, rate tables, threshold times, figure
// data, Monte Carlo validation and the reference threshold-table check.
//
// Exit codes: 0 success, 1 invalid input, 2 validation suite failed, 3 I/O failure.

#include "nullmeas/nullmeas.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_suite_failed = 2;
constexpr int exit_io = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes to --out when given, stdout otherwise.
void emit(const std::string &out_path, const std::function<void(std::ostream &)> &writer) {
    if (out_path.empty()) {
        writer(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file{out_path, std::ios::binary};
    if (!file) {
        throw IoError{"cannot open '" + out_path + "' for writing"};
    }
    writer(file);
    file.flush();
    if (!file) {
        throw IoError{"write to '" + out_path + "' failed"};
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw IoError{"cannot read config '" + path + "'"};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GridOptions {
    std::string prior{"0.5,0.5"};
    std::string config_path;
    double tau_min{0.0};
    double tau_max{nullmeas::default_tau_max};
    std::uint64_t points{nullmeas::figure_points};
    std::string format{"csv"};
    std::string out;
};

void add_grid_options(CLI::App *cmd, GridOptions &o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration (overrides the grid flags)");
    cmd->add_option("--prior", o.prior, "comma-separated level probabilities, e.g. 0.5,0.5");
    cmd->add_option("--tau-min", o.tau_min, "first scaled time of the grid");
    cmd->add_option("--tau-max", o.tau_max, "last scaled time of the grid");
    cmd->add_option("--points", o.points, "grid points including both endpoints");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "output file (default stdout)");
}

nullmeas::ScanConfig grid_config(const GridOptions &o, bool rates) {
    if (!o.config_path.empty()) {
        return nullmeas::parse_scan_config(read_file(o.config_path));
    }
    nullmeas::ScanConfig c;
    c.prior = nullmeas::parse_prior(o.prior);
    c.tau_min = o.tau_min;
    c.tau_max = o.tau_max;
    c.points = o.points;
    c.format = nullmeas::parse_output_format(o.format);
    c.outputs = {nullmeas::OutputKind::snapshots};
    if (rates) {
        c.outputs.insert(nullmeas::OutputKind::rates);
    }
    c.validate();
    return c;
}

int write_figure(const std::string &id, const std::string &format, const std::string &out) {
    const auto ds = nullmeas::emit_figure_data(id);
    if (format == "json") {
        nlohmann::json j = {{"figure", ds.figure_id}};
        auto panels = nlohmann::json::array();
        for (const auto &p : ds.panels) {
            panels.push_back({{"panel", std::string(1, p.panel)},
                              {"prior", p.prior.values()},
                              {"rows", nullmeas::to_json(p.rows)}});
        }
        j["panels"] = panels;
        emit(out, [&](std::ostream &os) { os << j.dump(2) << '\n'; });
        return exit_ok;
    }
    if (out.empty()) {
        for (const auto &p : ds.panels) {
            std::cout << "# " << ds.figure_id << " panel (" << p.panel << ") prior=" << nullmeas::format_prior(p.prior)
                      << '\n';
            nullmeas::write_csv(std::cout, p.rows);
        }
        return exit_ok;
    }
    // --out names a directory receiving one CSV per panel
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
        throw IoError{"cannot create directory '" + out + "': " + ec.message()};
    }
    for (const auto &p : ds.panels) {
        const auto path = (std::filesystem::path{out} / (ds.figure_id + "_" + p.panel + ".csv")).string();
        emit(path, [&](std::ostream &os) { nullmeas::write_csv(os, p.rows); });
    }
    return exit_ok;
}

int verify_tables(const std::string &format, const std::string &out) {
    const auto tables = nullmeas::reproduce_tables();
    bool all_pass = true;
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream text;
    auto compare = [&](const char *table, char panel, const char *column, const std::optional<double> &got,
                       double reference, double tolerance) {
        const bool pass = got && std::abs(*got - reference) <= tolerance;
        all_pass = all_pass && pass;
        char line[160];
        std::snprintf(line, sizeof line, "%s %-4s (%c) %-12s computed=%-10s reference=%.3f tol=%.2f", pass ? "PASS" : "FAIL",
                      table, panel, column, got ? nullmeas::format_number(*got).substr(0, 10).c_str() : "none",
                      reference, tolerance);
        text << line << '\n';
        rows.push_back({{"table", table},
                        {"panel", std::string(1, panel)},
                        {"column", column},
                        {"computed", nullmeas::optional_json(got)},
                        {"reference", reference},
                        {"tolerance", tolerance},
                        {"passed", pass}});
    };
    auto check_table = [&](const char *name, const auto &reports, const auto &reference) {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto &r = reports[i];
            const auto &p = reference[i];
            compare(name, p.panel, "F<90%", r.tau_fidelity_90, p.fidelity_90, nullmeas::reference_time_tolerance);
            compare(name, p.panel, "P_rev<50%", r.tau_prev_50, p.prev_50, nullmeas::reference_time_tolerance);
            compare(name, p.panel, "I(0)>90%", r.tau_info_90, p.info_90, nullmeas::reference_info_tolerance);
        }
    };
    check_table("qubit", tables.qubit, nullmeas::reference_qubit_table);
    check_table("qutrit", tables.qutrit, nullmeas::reference_qutrit_table);
    emit(out, [&](std::ostream &os) {
        if (format == "json") {
            os << nlohmann::json{{"passed", all_pass}, {"checks", rows}}.dump(2) << '\n';
        } else {
            os << text.str();
        }
    });
    return all_pass ? exit_ok : exit_suite_failed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Information quantities of null-result weak measurements"};
    app.require_subcommand(1);

    GridOptions scan_opts;
    auto *scan = app.add_subcommand("scan", "static quantities on a uniform tau grid");
    add_grid_options(scan, scan_opts);

    GridOptions rate_opts;
    auto *rates = app.add_subcommand("rates", "static quantities plus analytic rates on a uniform tau grid");
    add_grid_options(rates, rate_opts);

    std::string th_prior{"0.5,0.5"}, th_mode{"window"}, th_format{"csv"}, th_out;
    double th_tau_max = nullmeas::default_tau_max;
    auto *thresholds = app.add_subcommand("thresholds", "first-crossing times for one prior");
    thresholds->add_option("--prior", th_prior, "comma-separated level probabilities");
    thresholds->add_option("--tau-max", th_tau_max, "search window end");
    thresholds->add_option("--i-max-mode", th_mode, "window or asymptotic")
        ->check(CLI::IsMember({"window", "asymptotic"}));
    thresholds->add_option("--format", th_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    thresholds->add_option("--out", th_out, "output file (default stdout)");

    std::string fig_id, fig_format{"csv"}, fig_out;
    auto *figure = app.add_subcommand("figure", "per-panel data for fig1..fig4");
    figure->add_option("id", fig_id, "fig1, fig2, fig3 or fig4")->required();
    figure->add_option("--format", fig_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    figure->add_option("--out", fig_out, "directory for per-panel CSVs, or JSON file");

    std::string mc_prior{"0.5,0.5"}, mc_format{"csv"}, mc_out;
    double mc_tau = std::log(2.0);
    std::uint64_t mc_samples = 1000000, mc_seed = 1;
    unsigned mc_workers = 1;
    double mc_sigma = 4.0, mc_max_tv = -1.0;
    auto *mc = app.add_subcommand("mc-validate", "Monte Carlo check of the analytic null conditioning");
    mc->add_option("--prior", mc_prior, "comma-separated level probabilities");
    mc->add_option("--tau", mc_tau, "scaled time of the null record");
    mc->add_option("--samples", mc_samples, "number of trajectories");
    mc->add_option("--seed", mc_seed, "64-bit seed");
    mc->add_option("--workers", mc_workers, "worker threads (results do not depend on this)");
    mc->add_option("--sigma", mc_sigma, "allowed deviation in standard errors");
    mc->add_option("--max-tv", mc_max_tv, "optional total-variation bound on the null posterior");
    mc->add_option("--format", mc_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    mc->add_option("--out", mc_out, "output file (default stdout)");

    std::string vt_format{"csv"}, vt_out;
    auto *verify = app.add_subcommand("verify-tables", "compare threshold times with the reference threshold tables");
    verify->add_option("--format", vt_format, "csv (plain lines) or json")->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--out", vt_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (*scan || *rates) {
            const bool with_rates = static_cast<bool>(*rates);
            const auto config = grid_config(with_rates ? rate_opts : scan_opts, with_rates);
            emit((with_rates ? rate_opts : scan_opts).out,
                 [&](std::ostream &os) { nullmeas::write_scan_output(os, config); });
            return exit_ok;
        }
        if (*thresholds) {
            const auto report = nullmeas::threshold_report(nullmeas::parse_prior(th_prior),
                                                           nullmeas::parse_i_max_mode(th_mode), th_tau_max);
            emit(th_out, [&](std::ostream &os) {
                if (th_format == "json") {
                    os << nullmeas::to_json(report).dump(2) << '\n';
                } else {
                    os << nullmeas::threshold_header << '\n';
                    nullmeas::write_threshold_csv_row(os, report);
                }
            });
            return exit_ok;
        }
        if (*figure) {
            return write_figure(fig_id, fig_format, fig_out);
        }
        if (*mc) {
            nullmeas::McConfig config{nullmeas::parse_prior(mc_prior), nullmeas::ScaledTime{mc_tau}};
            config.samples = mc_samples;
            config.seed = mc_seed;
            config.workers = mc_workers;
            nullmeas::TolerancePolicy policy{mc_sigma, std::nullopt};
            if (mc_max_tv >= 0.0) {
                policy.max_total_variation = mc_max_tv;
            }
            const auto result = nullmeas::mc_validate(config, policy);
            emit(mc_out, [&](std::ostream &os) {
                if (mc_format == "json") {
                    os << nullmeas::to_json(result).dump(2) << '\n';
                } else {
                    nullmeas::write_mc_csv(os, result);
                }
            });
            if (result.insufficient_conditioning) {
                std::cerr << "insufficient conditioning: no null trajectories\n";
            }
            return result.passed() ? exit_ok : exit_suite_failed;
        }
        if (*verify) {
            return verify_tables(vt_format, vt_out);
        }
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    return exit_invalid;
}

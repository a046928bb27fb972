// Command-line front end: run scenarios, calibrate initial sample sizes,
// evaluate the tail-bound machinery and diagnose growth of allocation counts.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/montecarlo.hpp"
#include "seqalloc/scenario.hpp"
#include "seqalloc/theory.hpp"

namespace fs = std::filesystem;
using namespace seqalloc;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

// Thrown for argument combinations CLI11 cannot express; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScenarioSpec resolve_spec(const std::string& config, const std::string& preset_name) {
    if (!config.empty() && !preset_name.empty()) throw UsageError("--config and --preset are exclusive");
    if (!config.empty()) return load_config(config);
    if (!preset_name.empty()) return preset(preset_name);
    throw UsageError("one of --config or --preset is required");
}

ShiftedModel shifted_model(const std::string& family, double p, double u) {
    if (family == "normal") return {ResponseModel::normal(0.0, 1.0), u};
    if (family == "bernoulli") return {ResponseModel::bernoulli(p), u};
    throw UsageError("--family must be normal or bernoulli");
}

std::string budget_name(Budget b) {
    return b == Budget::IncludesInitial ? "includes_initial" : "after_initial";
}

std::vector<int> parse_orders(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("--orders must be a comma-separated list of integers");
        }
    }
    return out;
}

int diagnose_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .csv files in " + dir);

    std::cout << std::left << std::setw(28) << "file" << std::right << std::setw(12) << "n1_slope"
              << std::setw(8) << "flat" << std::setw(16) << "inferior_slope" << '\n';
    for (const auto& f : files) {
        std::ifstream in(f);
        const ResultTable t = read_csv(in);
        auto col = [&](std::initializer_list<std::string_view> keys) -> std::optional<std::size_t> {
            for (std::size_t c = 0; c < t.columns.size(); ++c)
                for (const auto k : keys)
                    if (t.columns[c] == k) return c;
            return std::nullopt;
        };
        const auto n_col = col({"N"});
        const auto n1_col = col({"n1", "second_max"});
        const auto inf_col = col({"inferior"});
        if (!n_col || (!n1_col && !inf_col)) {
            std::cout << std::left << std::setw(28) << f.filename().string()
                      << "  skipped (needs N and n1/second_max or inferior columns)\n";
            continue;
        }
        std::vector<GrowthPoint> pts;
        for (const auto& row : t.rows) {
            GrowthPoint p;
            p.n = static_cast<std::uint64_t>(row[*n_col]);
            p.mean_n1 = n1_col ? row[*n1_col] : 0.0;
            if (inf_col) p.mean_inferior = row[*inf_col];
            pts.push_back(p);
        }
        const auto rep = boundedness_diagnostic(pts);
        std::cout << std::left << std::setw(28) << f.filename().string() << std::right;
        if (n1_col)
            std::cout << std::setw(12) << format_value(rep.n1_slope) << std::setw(8)
                      << (rep.n1_flat ? "yes" : "no");
        else
            std::cout << std::setw(12) << "-" << std::setw(8) << "-";
        std::cout << std::setw(16) << (rep.inferior_slope ? format_value(*rep.inferior_slope) : "-")
                  << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive sequential allocation: simulation and tail-bound tools"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: $SEQALLOC_THREADS or all cores)");

    // run
    auto* run = app.add_subcommand("run", "Run a scenario and print its result table");
    std::string config, preset_name, out_path, format = "text";
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::uint64_t> reps, initial_m;
    bool list = false;
    run->add_option("--config", config, "Scenario file (key = value format)");
    run->add_option("--preset", preset_name, "Built-in scenario name");
    run->add_option("--seed", seed, "Master seed")->capture_default_str();
    run->add_option("--reps", reps, "Override replications per grid point");
    run->add_option("--initial-m", initial_m, "Override the initial per-arm sample size");
    run->add_option("--out", out_path, "Write output here instead of stdout");
    run->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
    run->add_flag("--list-presets", list, "List built-in presets and exit");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Sweep the initial sample size against a preset's published row");
    std::string cal_preset;
    std::uint64_t cal_reps = 10000, cal_seed = kDefaultSeed;
    std::optional<std::uint64_t> cal_lo, cal_hi;
    cal->add_option("--preset", cal_preset, "Preset with published reference values")->required();
    cal->add_option("--reps", cal_reps, "Replications per M")->capture_default_str();
    cal->add_option("--seed", cal_seed, "Master seed")->capture_default_str();
    cal->add_option("--m-lo", cal_lo, "Smallest M in the sweep");
    cal->add_option("--m-hi", cal_hi, "Largest M in the sweep");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Chernoff rate, tail envelope and stopping-time tools");
    bounds->require_subcommand(1);
    std::string family = "normal";
    double u = 0.5, p = 0.5;
    auto add_model = [&](CLI::App* c) {
        c->add_option("--u", u, "Shift u > 0")->capture_default_str();
        c->add_option("--family", family, "normal or bernoulli")->capture_default_str();
        c->add_option("--p", p, "Bernoulli success probability")->capture_default_str();
    };
    auto* b_rho = bounds->add_subcommand("rho", "Chernoff rate of the shifted increment");
    add_model(b_rho);

    auto* b_inf = bounds->add_subcommand("inference", "Bound on the incorrect-inference probability");
    double delta = 0.5, eps = 0.0;
    std::uint64_t m_init = 10;
    b_inf->add_option("--delta", delta, "Mean gap theta0 - theta1 > 0")->capture_default_str();
    b_inf->add_option("--eps", eps, "Slack epsilon >= 0")->capture_default_str();
    b_inf->add_option("--m", m_init, "Initial per-arm sample size")->capture_default_str();

    auto* b_tail = bounds->add_subcommand("tail", "Geometric envelope C rho^k / (1 - rho)");
    std::uint64_t k = 0;
    double rho = 0.5, c = 1.0;
    b_tail->add_option("--k", k, "Index k >= 0")->required();
    b_tail->add_option("--rho", rho, "Rate in (0, 1)")->capture_default_str();
    b_tail->add_option("--c", c, "Constant C > 0")->capture_default_str();

    auto* b_oracle = bounds->add_subcommand("oracle", "Simulate the stopping time M*_u");
    add_model(b_oracle);
    std::optional<std::uint64_t> horizon;
    std::uint64_t runs = 100000, b_seed = kDefaultSeed;
    b_oracle->add_option("--horizon", horizon, "Truncation horizon (default: bound-driven with C = 1)");
    b_oracle->add_option("--runs", runs, "Independent paths")->capture_default_str();
    b_oracle->add_option("--seed", b_seed, "Master seed")->capture_default_str();

    auto* b_mom = bounds->add_subcommand("moments", "Moment stability of M*_u under horizon doubling");
    add_model(b_mom);
    std::string orders = "1,2,3";
    std::uint64_t h1 = 200, h2 = 400;
    b_mom->add_option("--orders", orders, "Comma-separated moment orders")->capture_default_str();
    b_mom->add_option("--h1", h1, "Shorter horizon")->capture_default_str();
    b_mom->add_option("--h2", h2, "Longer horizon")->capture_default_str();
    b_mom->add_option("--runs", runs, "Independent paths")->capture_default_str();
    b_mom->add_option("--seed", b_seed, "Master seed")->capture_default_str();

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "Growth of E(N1) and E(N'inf) in ln N over CSV results");
    std::string dir;
    diag->add_option("dir", dir, "Directory of CSV files written by `run --format csv`")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::cout << std::setprecision(10);
        if (*run) {
            if (list) {
                for (const auto& n : preset_names()) std::cout << n << '\n';
                return 0;
            }
            ScenarioSpec spec = resolve_spec(config, preset_name);
            if (initial_m) spec.initial_m = *initial_m;
            const ResultTable table = run_scenario(spec, seed, reps, threads);
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw std::runtime_error("cannot write " + out_path);
            }
            std::ostream& os = out_path.empty() ? std::cout : file;
            if (format == "csv")
                write_csv(os, table);
            else
                write_text(os, table);
            return 0;
        }
        if (*cal) {
            const auto ref = preset_reference(cal_preset);
            if (!ref) throw UsageError("preset '" + cal_preset + "' has no reference values");
            const auto spec = preset(cal_preset);
            const auto res = calibrate_initial_m(spec, ref->total_n, ref->target, cal_lo.value_or(ref->m_lo),
                                                 cal_hi.value_or(ref->m_hi), cal_reps, cal_seed, threads);
            std::cout << "target at N=" << ref->total_n << ": pcs " << ref->target.pcs << ", "
                      << metric_key(ref->target.count_metric) << ' ' << ref->target.count << "\n";
            std::cout << std::setw(18) << "budget" << std::setw(5) << "M" << std::setw(10) << "pcs"
                      << std::setw(12) << "count" << std::setw(10) << "score" << '\n';
            for (const auto& r : res.rows)
                std::cout << std::setw(18) << budget_name(r.budget) << std::setw(5) << r.initial_m
                          << std::setw(10) << format_value(r.pcs) << std::setw(12) << format_value(r.count)
                          << std::setw(10) << format_value(r.score) << '\n';
            for (const auto* best : {&res.best_includes_initial, &res.best_after_initial})
                std::cout << "best " << budget_name(best->budget) << ": M=" << best->initial_m
                          << " score=" << format_value(best->score)
                          << (best->score <= 1.0 ? " (within tolerance)" : " (outside tolerance)") << '\n';
            return 0;
        }
        if (*b_rho) {
            const auto model = shifted_model(family, p, u);
            const auto rate = chernoff_rate_numeric(model);
            std::cout << "rho_numeric " << rate.rho << "\nt_star " << rate.t_star << '\n';
            if (family == "normal") std::cout << "rho_closed_form " << chernoff_rho_normal(u) << '\n';
            std::cout << "horizon_c1 " << required_horizon(rate.rho, 1.0) << '\n';
            return 0;
        }
        if (*b_inf) {
            std::cout << "bound " << incorrect_inference_bound(delta, eps, m_init) << '\n';
            return 0;
        }
        if (*b_tail) {
            if (!(rho > 0.0 && rho < 1.0) || !(c > 0.0)) throw UsageError("need 0 < rho < 1 and c > 0");
            std::cout << "bound " << tail_bound(k, {rho, c, 0}) << '\n';
            return 0;
        }
        if (*b_oracle) {
            const auto model = shifted_model(family, p, u);
            const double r = chernoff_rho_numeric(model);
            const std::uint64_t h = horizon.value_or(required_horizon(r, 1.0));
            const std::uint64_t hs[] = {h};
            const auto paths = oracle_runs(model, hs, runs, b_seed, threads);
            std::uint64_t censored = 0;
            double sum = 0.0;
            for (const auto& path : paths) {
                if (path[0].censored)
                    ++censored;
                else
                    sum += static_cast<double>(path[0].index);
            }
            std::cout << "horizon " << h << "\nruns " << runs << "\ncensored_fraction "
                      << static_cast<double>(censored) / static_cast<double>(runs) << "\nmean_uncensored "
                      << (runs > censored ? sum / static_cast<double>(runs - censored) : NAN) << '\n';
            return 0;
        }
        if (*b_mom) {
            const auto model = shifted_model(family, p, u);
            const auto ords = parse_orders(orders);
            const auto rep = moment_stability(model, ords, {h1, h2}, runs, b_seed, threads);
            std::cout << "order  E[M^q] h1        E[M^q] h2        rel_change\n";
            for (const auto& row : rep.rows)
                std::cout << std::setw(5) << row.order << "  " << std::setw(15) << row.at_short << "  "
                          << std::setw(15) << row.at_long << "  " << row.relative_change << '\n';
            std::cout << "censored " << rep.censored_short << ' ' << rep.censored_long << "\nverdict "
                      << (rep.stable ? "stable" : "unstable") << '\n';
            return 0;
        }
        if (*diag) return diagnose_dir(dir);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

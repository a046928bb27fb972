#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqalloc/allocation.hpp"
#include "seqalloc/montecarlo.hpp"

namespace seqalloc {

enum class Metric {
    Pcs,
    N1,
    SecondMax,
    Inferior,
    InferiorOverLogN,
    MinExpectedCount,
    MinExpectedRatio,
};

/// Config/CSV key, e.g. "inferior_over_logn".
std::string_view metric_key(Metric m);
/// Human-readable column label for the text table, e.g. "E(N'inf)/log(N)".
std::string_view metric_label(Metric m);
std::optional<Metric> metric_from_key(std::string_view key);
/// Picks the metric's value out of a summary; NaN when undefined for the config.
double metric_value(Metric m, const ReplicationSummary& s);

struct ScenarioSpec {
    std::string name;
    std::vector<ResponseModel> arms;
    std::uint64_t initial_m = 10;
    Budget budget = Budget::IncludesInitial;
    std::vector<std::uint64_t> n_grid;
    std::uint64_t reps = 10000;
    /// Requested columns, in output order.
    std::vector<Metric> metrics = {Metric::Pcs, Metric::N1};

    /// Throws ConfigError naming the violated invariant.
    void validate() const;
    /// Trial config for one grid point.
    TrialConfig trial_config(std::uint64_t total_n) const;

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// Parses the key-value scenario format (see docs/scenario-format.md).
/// Throws ParseError (with line) on syntax or unknown keys, ConfigError on
/// validation failures.
ScenarioSpec parse_config(std::string_view text);
ScenarioSpec load_config(const std::string& path);
/// Inverse of parse_config; numbers use the shortest round-trip representation.
std::string serialize_config(const ScenarioSpec& spec);

/// Names of the compiled-in presets.
std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ScenarioSpec preset(std::string_view name);

struct ResultTable {
    /// First column is always "N".
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// One row per grid point; reps overridden when `reps_override` is set.
ResultTable run_scenario(const ScenarioSpec& spec, std::uint64_t master_seed,
                         std::optional<std::uint64_t> reps_override = std::nullopt,
                         unsigned threads = 0);

/// Formats a value with 6 significant digits ('.' decimal separator).
std::string format_value(double v);
/// RFC 4180 CSV: header row of column keys, CRLF-free ('\n' line ends),
/// fields quoted only when they contain ',', '"' or a newline.
void write_csv(std::ostream& os, const ResultTable& table);
/// Parses CSV written by write_csv (or any RFC 4180 file with a header row of
/// numeric columns). Throws ParseError on malformed input.
ResultTable read_csv(std::istream& is);
/// Aligned plain-text table using metric labels.
void write_text(std::ostream& os, const ResultTable& table);

/// Splits one RFC 4180 record set into rows of fields.
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);

/// Target values for an M sweep and the tolerances used to score a match.
struct CalibrationTarget {
    Metric count_metric = Metric::N1;
    double pcs = 0.0;
    double pcs_tol = 0.02;
    double count = 0.0;
    /// Relative tolerance on `count`.
    double count_rel_tol = 0.15;
};

struct CalibrationRow {
    std::uint64_t initial_m = 0;
    Budget budget = Budget::IncludesInitial;
    double pcs = 0.0;
    double count = 0.0;
    /// max(|pcs - target| / pcs_tol, |count / target - 1| / count_rel_tol); <= 1 means both inside tolerance.
    double score = 0.0;
};

struct CalibrationResult {
    std::vector<CalibrationRow> rows;
    /// Lowest-score row for each budget convention.
    CalibrationRow best_includes_initial;
    CalibrationRow best_after_initial;
};

/// Sweeps initial_m over [m_lo, m_hi] under both budget conventions at a
/// single total_n and scores each against `target`.
CalibrationResult calibrate_initial_m(const ScenarioSpec& spec, std::uint64_t total_n,
                                      const CalibrationTarget& target, std::uint64_t m_lo,
                                      std::uint64_t m_hi, std::uint64_t reps,
                                      std::uint64_t master_seed, unsigned threads = 0);

/// Published values a preset is calibrated against, and the M range swept.
struct PresetReference {
    std::uint64_t total_n = 200;
    CalibrationTarget target;
    std::uint64_t m_lo = 2;
    std::uint64_t m_hi = 30;
};

/// Empty for names without published reference values.
std::optional<PresetReference> preset_reference(std::string_view name);

}  // namespace seqalloc

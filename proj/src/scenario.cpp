#include "seqalloc/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "seqalloc/errors.hpp"
#include "seqalloc/metrics.hpp"

namespace seqalloc {

namespace {

struct MetricInfo {
    Metric metric;
    std::string_view key;
    std::string_view label;
};

constexpr std::array<MetricInfo, 7> kMetrics{{
    {Metric::Pcs, "pcs", "PCS"},
    {Metric::N1, "n1", "E(N1)"},
    {Metric::SecondMax, "second_max", "E(2nd max)"},
    {Metric::Inferior, "inferior", "E(N'inf)"},
    {Metric::InferiorOverLogN, "inferior_over_logn", "E(N'inf)/log(N)"},
    {Metric::MinExpectedCount, "min_expected_count", "min_j E(N'j)"},
    {Metric::MinExpectedRatio, "min_expected_ratio", "min_j E(N'j)/N"},
}};

const MetricInfo& info(Metric m) {
    for (const auto& i : kMetrics)
        if (i.metric == m) return i;
    throw std::logic_error("unknown metric");
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_double(std::string_view s, std::size_t line, std::string_view field) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ParseError(line, std::string(field) + ": expected a decimal number, got '" +
                                   std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line, std::string_view field) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw ParseError(line, std::string(field) + ": expected a non-negative integer, got '" +
                                   std::string(s) + "'");
    return v;
}

std::string shortest(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

ResponseModel parse_arm(std::string_view value, std::size_t line) {
    const auto parts = split_ws(value);
    if (parts.empty()) throw ParseError(line, "arm: missing family");
    try {
        if (parts[0] == "normal") {
            if (parts.size() != 3) throw ParseError(line, "arm: expected 'normal <mean> <sd>'");
            return ResponseModel::normal(parse_double(parts[1], line, "arm mean"),
                                         parse_double(parts[2], line, "arm sd"));
        }
        if (parts[0] == "bernoulli") {
            if (parts.size() != 2) throw ParseError(line, "arm: expected 'bernoulli <p>'");
            return ResponseModel::bernoulli(parse_double(parts[1], line, "arm p"));
        }
    } catch (const ConfigError& e) {
        throw ParseError(line, std::string("arm: ") + e.what());
    }
    throw ParseError(line, "arm: unknown family '" + std::string(parts[0]) + "'");
}

}  // namespace

std::string_view metric_key(Metric m) { return info(m).key; }
std::string_view metric_label(Metric m) { return info(m).label; }

std::optional<Metric> metric_from_key(std::string_view key) {
    for (const auto& i : kMetrics)
        if (i.key == key) return i.metric;
    return std::nullopt;
}

double metric_value(Metric m, const ReplicationSummary& s) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    switch (m) {
        case Metric::Pcs: return s.pcs;
        case Metric::N1:
        case Metric::SecondMax: return s.mean_n1;
        case Metric::Inferior: return s.mean_inferior.value_or(nan);
        case Metric::InferiorOverLogN: return s.inferior_over_logn.value_or(nan);
        case Metric::MinExpectedCount: return s.min_expected_count;
        case Metric::MinExpectedRatio: return s.min_expected_count_ratio;
    }
    return nan;
}

void ScenarioSpec::validate() const {
    if (name.empty()) throw ConfigError("name must not be empty");
    if (arms.size() < 2) throw ConfigError("at least 2 arms are required");
    if (initial_m < 1) throw ConfigError("initial_m must be >= 1");
    if (reps < 1) throw ConfigError("reps must be >= 1");
    if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid not ascending");
    if (metrics.empty()) throw ConfigError("metrics must not be empty");
    for (std::size_t i = 0; i < metrics.size(); ++i)
        for (std::size_t j = i + 1; j < metrics.size(); ++j)
            if (metrics[i] == metrics[j])
                throw ConfigError("metric '" + std::string(metric_key(metrics[i])) + "' listed twice");
    std::vector<double> means;
    for (const auto& a : arms) means.push_back(a.true_mean());
    const bool needs_worst = std::any_of(metrics.begin(), metrics.end(), [](Metric m) {
        return m == Metric::Inferior || m == Metric::InferiorOverLogN;
    });
    if (needs_worst && !unique_worst_arm(means))
        throw ConfigError("inferior metrics need a unique truly-worst arm");
    for (const auto n : n_grid) trial_config(n).validate();
}

TrialConfig ScenarioSpec::trial_config(std::uint64_t total_n) const {
    TrialConfig cfg;
    cfg.arms = arms;
    cfg.total_n = total_n;
    cfg.initial_m = initial_m;
    cfg.budget = budget;
    return cfg;
}

ScenarioSpec parse_config(std::string_view text) {
    ScenarioSpec spec;
    spec.n_grid.clear();
    std::map<std::string, std::size_t> seen;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        const auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (key != "arm") {
            if (const auto it = seen.find(key); it != seen.end())
                throw ParseError(line_no, "duplicate key '" + key + "' (first on line " +
                                              std::to_string(it->second) + ")");
            seen.emplace(key, line_no);
        }

        if (key == "name") {
            if (value.empty()) throw ParseError(line_no, "name: empty value");
            spec.name = std::string(value);
        } else if (key == "arm") {
            spec.arms.push_back(parse_arm(value, line_no));
        } else if (key == "initial_m") {
            spec.initial_m = parse_u64(value, line_no, "initial_m");
        } else if (key == "budget") {
            if (value == "includes_initial")
                spec.budget = Budget::IncludesInitial;
            else if (value == "after_initial")
                spec.budget = Budget::AfterInitial;
            else
                throw ParseError(line_no, "budget: expected includes_initial or after_initial");
        } else if (key == "n_grid") {
            for (const auto item : split(value, ','))
                spec.n_grid.push_back(parse_u64(item, line_no, "n_grid"));
        } else if (key == "reps") {
            spec.reps = parse_u64(value, line_no, "reps");
        } else if (key == "metrics") {
            spec.metrics.clear();
            for (const auto item : split(value, ',')) {
                const auto m = metric_from_key(item);
                if (!m) throw ParseError(line_no, "metrics: unknown metric '" + std::string(item) + "'");
                spec.metrics.push_back(*m);
            }
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }
    if (spec.name.empty()) throw ParseError(0, "missing required key 'name'");
    if (!seen.contains("n_grid")) throw ParseError(0, "missing required key 'n_grid'");
    spec.validate();
    return spec;
}

ScenarioSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ScenarioSpec& spec) {
    std::ostringstream os;
    os << "name = " << spec.name << '\n';
    for (const auto& a : spec.arms) {
        if (a.family() == Family::Normal)
            os << "arm = normal " << shortest(a.true_mean()) << ' ' << shortest(a.sd()) << '\n';
        else
            os << "arm = bernoulli " << shortest(a.p()) << '\n';
    }
    os << "initial_m = " << spec.initial_m << '\n';
    os << "budget = " << (spec.budget == Budget::IncludesInitial ? "includes_initial" : "after_initial")
       << '\n';
    os << "n_grid = ";
    for (std::size_t i = 0; i < spec.n_grid.size(); ++i) os << (i ? ", " : "") << spec.n_grid[i];
    os << '\n';
    os << "reps = " << spec.reps << '\n';
    os << "metrics = ";
    for (std::size_t i = 0; i < spec.metrics.size(); ++i)
        os << (i ? ", " : "") << metric_key(spec.metrics[i]);
    os << '\n';
    return os.str();
}

ResultTable run_scenario(const ScenarioSpec& spec, std::uint64_t master_seed,
                         std::optional<std::uint64_t> reps_override, unsigned threads) {
    spec.validate();
    const std::uint64_t reps = reps_override.value_or(spec.reps);
    ResultTable table;
    table.columns.emplace_back("N");
    for (const auto m : spec.metrics) table.columns.emplace_back(metric_key(m));
    for (const auto n : spec.n_grid) {
        // Grid points get distinct streams derived from the master seed.
        const auto s = run_replications(spec.trial_config(n), reps, derive_seed(master_seed, n), threads);
        std::vector<double> row{static_cast<double>(n)};
        for (const auto m : spec.metrics) row.push_back(metric_value(m, s));
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6g", v);
    return buf.data();
}

namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_cell(const std::string& column, double v) {
    if (column == "N") return std::to_string(static_cast<std::uint64_t>(v));
    return format_value(v);
}

}  // namespace

void write_csv(std::ostream& os, const ResultTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << csv_field(table.columns[c]);
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << csv_field(format_cell(table.columns[c], row[c]));
        os << '\n';
    }
}

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (field_started && !field.empty()) throw ParseError(line, "csv: stray quote inside field");
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
            records.push_back(std::move(record));
            record.clear();
            ++line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw ParseError(line, "csv: unterminated quoted field");
    if (field_started || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

ResultTable read_csv(std::istream& is) {
    std::ostringstream buf;
    buf << is.rdbuf();
    const auto records = parse_csv_records(buf.str());
    if (records.empty()) throw ParseError(0, "csv: empty input");
    ResultTable table;
    table.columns = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.columns.size())
            throw ParseError(r + 1, "csv: expected " + std::to_string(table.columns.size()) +
                                        " fields, got " + std::to_string(records[r].size()));
        std::vector<double> row;
        for (const auto& f : records[r]) {
            if (f == "nan") {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            row.push_back(parse_double(f, r + 1, "csv field"));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_text(std::ostream& os, const ResultTable& table) {
    std::vector<std::string> header;
    for (const auto& c : table.columns) {
        const auto m = metric_from_key(c);
        header.emplace_back(m ? std::string(metric_label(*m)) : c);
    }
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : table.rows) {
        std::vector<std::string> line;
        for (std::size_t c = 0; c < row.size(); ++c) line.push_back(format_cell(table.columns[c], row[c]));
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
    }
    auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t c = 0; c < line.size(); ++c)
            os << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << line[c];
        os << '\n';
    };
    emit(header);
    std::size_t total = 0;
    for (const auto w : width) total += w;
    os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    for (const auto& line : cells) emit(line);
}

CalibrationResult calibrate_initial_m(const ScenarioSpec& spec, std::uint64_t total_n,
                                      const CalibrationTarget& target, std::uint64_t m_lo,
                                      std::uint64_t m_hi, std::uint64_t reps,
                                      std::uint64_t master_seed, unsigned threads) {
    if (m_lo < 1 || m_hi < m_lo) throw ConfigError("calibration range must satisfy 1 <= lo <= hi");
    if (!(target.count > 0.0) || !(target.pcs_tol > 0.0) || !(target.count_rel_tol > 0.0))
        throw ConfigError("calibration targets and tolerances must be positive");
    CalibrationResult res;
    bool have[2] = {false, false};
    for (const Budget budget : {Budget::IncludesInitial, Budget::AfterInitial}) {
        for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
            ScenarioSpec s = spec;
            s.initial_m = m;
            s.budget = budget;
            const TrialConfig cfg = s.trial_config(total_n);
            if (budget == Budget::IncludesInitial && total_n < cfg.arms.size() * m) continue;
            const auto sum = run_replications(cfg, reps, master_seed, threads);
            CalibrationRow row;
            row.initial_m = m;
            row.budget = budget;
            row.pcs = sum.pcs;
            row.count = metric_value(target.count_metric, sum);
            row.score = std::max(std::abs(row.pcs - target.pcs) / target.pcs_tol,
                                 std::abs(row.count / target.count - 1.0) / target.count_rel_tol);
            res.rows.push_back(row);
            const int b = budget == Budget::IncludesInitial ? 0 : 1;
            CalibrationRow& best = b == 0 ? res.best_includes_initial : res.best_after_initial;
            if (!have[b] || row.score < best.score) {
                best = row;
                have[b] = true;
            }
        }
    }
    if (!have[0] || !have[1]) throw ConfigError("calibration range produced no valid configuration");
    return res;
}

}  // namespace seqalloc

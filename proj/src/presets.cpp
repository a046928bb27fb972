#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/scenario.hpp"

namespace seqalloc {

namespace {

// initial_m values are the best-scoring M from `seqalloc calibrate` at N = 200
// (seed 20240601, 10000 reps, total_n includes the initial phase).

const std::vector<std::uint64_t> kTwoArmGrid = {200, 300, 400, 800, 900, 1000,
                                                1500, 2000, 2500, 3000, 3500};
const std::vector<std::uint64_t> kShortGrid = {200, 300, 400, 800, 900, 1000, 1500, 2000};

ResponseModel nrm(double mean, double variance) {
    return ResponseModel::normal(mean, std::sqrt(variance));
}

ScenarioSpec make(std::string name, std::vector<ResponseModel> arms, std::uint64_t m,
                  std::vector<std::uint64_t> grid, std::vector<Metric> metrics) {
    ScenarioSpec s;
    s.name = std::move(name);
    s.arms = std::move(arms);
    s.initial_m = m;
    s.n_grid = std::move(grid);
    s.reps = 10000;
    s.metrics = std::move(metrics);
    return s;
}

std::vector<ScenarioSpec> build_presets() {
    using enum Metric;
    const std::vector<Metric> two_arm = {Pcs, N1};
    const std::vector<Metric> inferior = {Pcs, Inferior, InferiorOverLogN};
    const std::vector<Metric> identical = {Pcs, N1, MinExpectedCount, MinExpectedRatio};
    return {
        make("table1_col1", {nrm(0.5, 1), nrm(0.0, 0.7)}, 11, kTwoArmGrid, two_arm),
        make("table1_col2", {nrm(0.8, 1), nrm(0.2, 0.7)}, 14, kTwoArmGrid, two_arm),
        make("table1_col3", {nrm(1.0, 1), nrm(0.5, 0.7)}, 11, kTwoArmGrid, two_arm),
        make("table2_col1", {ResponseModel::bernoulli(0.5), ResponseModel::bernoulli(0.2)},
             13, kTwoArmGrid, two_arm),
        make("table2_col2", {ResponseModel::bernoulli(0.6), ResponseModel::bernoulli(0.3)},
             12, kTwoArmGrid, two_arm),
        make("table2_col3", {ResponseModel::bernoulli(0.8), ResponseModel::bernoulli(0.5)},
             12, kTwoArmGrid, two_arm),
        make("table3_normal", {nrm(1.0, 1), nrm(1.0, 1)}, 50, kTwoArmGrid, identical),
        make("table3_bernoulli", {ResponseModel::bernoulli(0.5), ResponseModel::bernoulli(0.5)},
             49, kTwoArmGrid, identical),
        make("table4_col1", {nrm(0.9, 1), nrm(0.2, 0.7), nrm(0.0, 0.5)}, 6, kShortGrid,
             {Pcs, SecondMax}),
        make("table4_col2", {nrm(2.0, 1), nrm(1.2, 0.7), nrm(0.5, 0.5)}, 5, kShortGrid,
             {Pcs, SecondMax}),
        make("table5_col1", {nrm(0.5, 1), nrm(0.0, 0.7)}, 6, kTwoArmGrid, inferior),
        make("table5_col2", {nrm(0.8, 1), nrm(0.2, 0.7)}, 15, kTwoArmGrid, inferior),
        make("table5_col3", {nrm(1.0, 1), nrm(0.5, 0.7)}, 6, kTwoArmGrid, inferior),
        make("table6_col1", {ResponseModel::bernoulli(0.5), ResponseModel::bernoulli(0.2)},
             6, kTwoArmGrid, inferior),
        make("table6_col2", {ResponseModel::bernoulli(0.6), ResponseModel::bernoulli(0.3)},
             5, kTwoArmGrid, inferior),
        make("table6_col3", {ResponseModel::bernoulli(0.8), ResponseModel::bernoulli(0.5)},
             15, kTwoArmGrid, inferior),
        // Pain scores are negated so that larger is better.
        make("pregabalin", {ResponseModel::normal(-3.60, 2.25), ResponseModel::normal(-5.29, 2.20)},
             4, kShortGrid, two_arm),
        make("fluoxetine", {ResponseModel::bernoulli(0.58), ResponseModel::bernoulli(0.36)},
             14, kShortGrid, two_arm),
    };
}

}  // namespace

std::optional<PresetReference> preset_reference(std::string_view name) {
    using enum Metric;
    struct Entry {
        std::string_view name;
        Metric metric;
        double pcs;
        double count;
        double rel_tol;
        std::uint64_t m_hi;
    };
    static constexpr Entry kRefs[] = {
        {"table1_col1", N1, 0.9396, 16.4209, 0.15, 30},
        {"table1_col2", N1, 0.9718, 15.7146, 0.15, 30},
        {"table1_col3", N1, 0.9363, 16.4576, 0.15, 30},
        {"table2_col1", N1, 0.9714, 15.7156, 0.15, 30},
        {"table2_col2", N1, 0.9613, 15.8792, 0.15, 30},
        {"table2_col3", N1, 0.9700, 15.6926, 0.15, 30},
        {"table3_normal", N1, 0.4987, 56.5952, 0.15, 60},
        {"table3_bernoulli", N1, 0.5047, 56.1546, 0.15, 60},
        {"table4_col1", SecondMax, 0.9475, 9.3374, 0.20, 30},
        {"table4_col2", SecondMax, 0.9527, 6.9510, 0.20, 30},
        {"table5_col1", Inferior, 0.9436, 24.6724, 0.15, 30},
        {"table5_col2", Inferior, 0.9725, 19.8617, 0.15, 30},
        {"table5_col3", Inferior, 0.9442, 24.7791, 0.15, 30},
        {"table6_col1", Inferior, 0.9707, 20.0885, 0.15, 30},
        {"table6_col2", Inferior, 0.9644, 21.0589, 0.15, 30},
        {"table6_col3", Inferior, 0.9693, 20.1448, 0.15, 30},
        {"pregabalin", N1, 0.9381, 7.4673, 0.20, 30},
        {"fluoxetine", N1, 0.9419, 21.5476, 0.20, 30},
    };
    for (const auto& e : kRefs) {
        if (e.name != name) continue;
        PresetReference r;
        r.total_n = 200;
        r.target.count_metric = e.metric;
        r.target.pcs = e.pcs;
        r.target.count = e.count;
        r.target.count_rel_tol = e.rel_tol;
        r.m_lo = 2;
        r.m_hi = e.m_hi;
        return r;
    }
    return std::nullopt;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& s : build_presets()) names.push_back(s.name);
    return names;
}

ScenarioSpec preset(std::string_view name) {
    for (auto& s : build_presets())
        if (s.name == name) return s;
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace seqalloc

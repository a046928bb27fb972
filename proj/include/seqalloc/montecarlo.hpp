#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqalloc/allocation.hpp"

namespace seqalloc {

struct ReplicationSummary {
    std::uint64_t reps = 0;
    std::uint64_t total_n = 0;
    /// Fraction of replications whose terminal decision was the true best arm.
    double pcs = 0.0;
    double mean_n1 = 0.0;
    /// Sample standard deviation of n1 across replications.
    double sd_n1 = 0.0;
    /// Empty when the true minimum is tied (no unique inferior arm).
    std::optional<double> mean_inferior;
    /// mean_inferior / ln(total_n).
    std::optional<double> inferior_over_logn;
    std::vector<double> mean_counts;
    double min_expected_count = 0.0;
    double min_expected_count_ratio = 0.0;
    /// sqrt(1 / (4 reps)), the worst-case binomial standard error of pcs.
    double pcs_se_bound = 0.0;

    friend bool operator==(const ReplicationSummary&, const ReplicationSummary&) = default;
};

/// Runs `reps` independent trials of `cfg` (cfg.seed is ignored). Replication i
/// uses an Rng seeded with derive_seed(master_seed, i). The summary is
/// bit-identical for any `threads` value (0 means default_thread_count()).
ReplicationSummary run_replications(const TrialConfig& cfg, std::uint64_t reps,
                                    std::uint64_t master_seed, unsigned threads = 0);

/// One point of an E(n1) / E(inferior) growth curve.
struct GrowthPoint {
    std::uint64_t n = 0;
    double mean_n1 = 0.0;
    std::optional<double> mean_inferior;
};

struct BoundednessReport {
    /// Least-squares slope of mean_n1 against ln N.
    double n1_slope = 0.0;
    /// n1_slope < kFlatSlope.
    bool n1_flat = false;
    /// Slope of mean_inferior against ln N, when every point has one.
    std::optional<double> inferior_slope;

    static constexpr double kFlatSlope = 1.0;
};

/// Throws PreconditionError for fewer than 3 points or N not strictly ascending.
BoundednessReport boundedness_diagnostic(std::span<const GrowthPoint> points);
BoundednessReport boundedness_diagnostic(
    std::span<const std::pair<std::uint64_t, ReplicationSummary>> summaries);

/// Least-squares slope of y against x. Throws PreconditionError when x is constant.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace seqalloc

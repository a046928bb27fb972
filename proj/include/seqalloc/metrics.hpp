#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "seqalloc/allocation.hpp"

namespace seqalloc {

/// Per-trial statistics derived from a TrialOutcome.
struct TrialMetrics {
    /// min of the two counts (m = 2) or the largest count outside the most-sampled arm.
    std::uint64_t n1 = 0;
    /// Count of the unique truly-worst arm; empty when the true minimum is tied.
    std::optional<std::uint64_t> inferior_count;
    bool correct = false;
    std::size_t decision = 0;
};

/// min(counts[0], counts[1]).
constexpr std::uint64_t n1_two_arm(std::uint64_t c0, std::uint64_t c1) noexcept {
    return c0 < c1 ? c0 : c1;
}

/// Largest count among arms other than the most-sampled one (lowest index wins
/// ties for most-sampled), so tied maxima give back the maximum. Throws
/// PreconditionError for fewer than two arms.
std::uint64_t n1_multi(std::span<const std::uint64_t> counts);

/// Count of the arm with the unique smallest true mean. Throws
/// PreconditionError when the minimum is tied; only the n1 metrics are
/// defined in that case.
std::uint64_t inferior_count(std::span<const std::uint64_t> counts,
                             std::span<const double> true_means);

/// Index of the unique smallest true mean, or empty when tied.
std::optional<std::size_t> unique_worst_arm(std::span<const double> true_means);

TrialMetrics compute_metrics(const TrialOutcome& outcome, std::span<const ResponseModel> arms);

}  // namespace seqalloc

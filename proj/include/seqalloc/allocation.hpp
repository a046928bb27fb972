#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seqalloc/response_model.hpp"
#include "seqalloc/rng.hpp"

namespace seqalloc {

/// How `total_n` relates to the balanced initial phase.
enum class Budget {
    /// total_n counts every draw, including the m * initial_m initial ones.
    IncludesInitial,
    /// total_n adaptive draws follow the initial phase.
    AfterInitial,
};

struct TrialConfig {
    std::vector<ResponseModel> arms;
    std::uint64_t total_n = 0;
    std::uint64_t initial_m = 10;
    std::uint64_t seed = 0;
    Budget budget = Budget::IncludesInitial;
    bool record_trace = false;

    /// Throws ConfigError if m < 2, initial_m < 1, or the budget cannot hold the initial phase.
    void validate() const;

    /// Total number of responses drawn by one trial.
    std::uint64_t total_draws() const;
};

struct TrialOutcome {
    std::vector<std::uint64_t> counts;
    std::vector<double> final_means;
    std::size_t decision = 0;
    bool correct = false;
    /// Chosen arm at each adaptive stage; empty unless TrialConfig::record_trace.
    std::vector<std::uint32_t> trace;
};

/// Lowest index among arms with the largest true mean.
std::size_t true_best_arm(std::span<const ResponseModel> arms);

/// Follow-the-leader step: the arm with the largest current sample mean.
///
/// When s > 1 arms share the maximum (exact equality) one of them is picked
/// uniformly, consuming one engine output; otherwise the stream is untouched.
/// Throws PreconditionError if any arm has no samples yet.
std::size_t allocate_next(std::span<const ArmState> states, Rng& rng);

/// Runs one trial on a caller-owned stream.
///
/// Stream order: initial_m draws from arm 0, then arm 1, ..., arm m-1; then per
/// stage an optional tie-break output followed by the chosen arm's response;
/// finally an optional tie-break output for the terminal decision.
TrialOutcome run_trial(const TrialConfig& cfg, Rng& rng);

/// Runs one trial on a fresh stream seeded with `cfg.seed`.
TrialOutcome run_trial(const TrialConfig& cfg);

}  // namespace seqalloc

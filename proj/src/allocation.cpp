#include "seqalloc/allocation.hpp"

#include <string>

#include "seqalloc/errors.hpp"

namespace seqalloc {

void TrialConfig::validate() const {
    if (arms.size() < 2) throw ConfigError("a trial needs at least 2 arms");
    if (initial_m < 1) throw ConfigError("initial_m must be >= 1");
    if (total_n < 1) throw ConfigError("total_n must be >= 1");
    const std::uint64_t initial = arms.size() * initial_m;
    if (budget == Budget::IncludesInitial && total_n < initial)
        throw ConfigError("total_n (" + std::to_string(total_n) + ") < m * initial_m (" +
                          std::to_string(initial) + ")");
}

std::uint64_t TrialConfig::total_draws() const {
    return budget == Budget::IncludesInitial ? total_n : total_n + arms.size() * initial_m;
}

std::size_t true_best_arm(std::span<const ResponseModel> arms) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < arms.size(); ++j)
        if (arms[j].true_mean() > arms[best].true_mean()) best = j;
    return best;
}

namespace {

// Argmax with uniform tie-break over exactly-equal maxima. `scratch` holds
// at least means.size() entries.
std::size_t argmax_tiebreak(std::span<const double> means, std::span<std::size_t> scratch,
                            Rng& rng) {
    double top = means[0];
    std::size_t ties = 0;
    scratch[ties++] = 0;
    for (std::size_t j = 1; j < means.size(); ++j) {
        if (means[j] > top) {
            top = means[j];
            ties = 0;
            scratch[ties++] = j;
        } else if (means[j] == top) {
            scratch[ties++] = j;
        }
    }
    if (ties == 1) return scratch[0];
    return scratch[uniform_index(rng, ties)];
}

}  // namespace

std::size_t allocate_next(std::span<const ArmState> states, Rng& rng) {
    if (states.empty()) throw PreconditionError("allocate_next: no arms");
    std::vector<double> means(states.size());
    for (std::size_t j = 0; j < states.size(); ++j) {
        const auto mean = states[j].mean();
        if (!mean) throw PreconditionError("allocate_next: arm " + std::to_string(j) +
                                           " has no samples");
        means[j] = *mean;
    }
    std::vector<std::size_t> scratch(states.size());
    return argmax_tiebreak(means, scratch, rng);
}

TrialOutcome run_trial(const TrialConfig& cfg, Rng& rng) {
    cfg.validate();
    const std::size_t m = cfg.arms.size();
    std::vector<ArmState> states(m);
    std::vector<double> means(m);
    std::vector<std::size_t> scratch(m);

    for (std::size_t j = 0; j < m; ++j)
        for (std::uint64_t i = 0; i < cfg.initial_m; ++i)
            states[j] = update(states[j], cfg.arms[j].draw(rng));
    for (std::size_t j = 0; j < m; ++j) means[j] = *states[j].mean();

    TrialOutcome out;
    const std::uint64_t total = cfg.total_draws();
    std::uint64_t drawn = m * cfg.initial_m;
    if (cfg.record_trace) out.trace.reserve(total - drawn);

    // Same rule as allocate_next, with the means cached between stages.
    for (; drawn < total; ++drawn) {
        const std::size_t j = argmax_tiebreak(means, scratch, rng);
        states[j] = update(states[j], cfg.arms[j].draw(rng));
        means[j] = *states[j].mean();
        if (cfg.record_trace) out.trace.push_back(static_cast<std::uint32_t>(j));
    }

    out.counts.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.counts[j] = states[j].count;
    out.final_means = means;
    out.decision = argmax_tiebreak(means, scratch, rng);
    out.correct = out.decision == true_best_arm(cfg.arms);
    return out;
}

TrialOutcome run_trial(const TrialConfig& cfg) {
    Rng rng(cfg.seed);
    return run_trial(cfg, rng);
}

}  // namespace seqalloc

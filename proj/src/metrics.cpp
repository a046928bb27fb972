#include "seqalloc/metrics.hpp"

#include <vector>

#include "seqalloc/errors.hpp"

namespace seqalloc {

std::uint64_t n1_multi(std::span<const std::uint64_t> counts) {
    if (counts.size() < 2) throw PreconditionError("n1_multi: need at least 2 arms");
    std::size_t lead = 0;
    for (std::size_t j = 1; j < counts.size(); ++j)
        if (counts[j] > counts[lead]) lead = j;
    std::uint64_t second = 0;
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (j != lead && counts[j] > second) second = counts[j];
    return second;
}

std::optional<std::size_t> unique_worst_arm(std::span<const double> true_means) {
    if (true_means.empty()) return std::nullopt;
    std::size_t worst = 0;
    bool tied = false;
    for (std::size_t j = 1; j < true_means.size(); ++j) {
        if (true_means[j] < true_means[worst]) {
            worst = j;
            tied = false;
        } else if (true_means[j] == true_means[worst]) {
            tied = true;
        }
    }
    if (tied) return std::nullopt;
    return worst;
}

std::uint64_t inferior_count(std::span<const std::uint64_t> counts,
                             std::span<const double> true_means) {
    if (counts.size() != true_means.size())
        throw PreconditionError("inferior_count: counts and true means differ in length");
    const auto worst = unique_worst_arm(true_means);
    if (!worst)
        throw PreconditionError(
            "inferior_count: true minimum is tied; use the n1 metrics for this configuration");
    return counts[*worst];
}

TrialMetrics compute_metrics(const TrialOutcome& outcome, std::span<const ResponseModel> arms) {
    TrialMetrics tm;
    tm.correct = outcome.correct;
    tm.decision = outcome.decision;
    tm.n1 = outcome.counts.size() == 2 ? n1_two_arm(outcome.counts[0], outcome.counts[1])
                                       : n1_multi(outcome.counts);
    std::vector<double> means(arms.size());
    for (std::size_t j = 0; j < arms.size(); ++j) means[j] = arms[j].true_mean();
    if (const auto worst = unique_worst_arm(means)) tm.inferior_count = outcome.counts[*worst];
    return tm;
}

}  // namespace seqalloc

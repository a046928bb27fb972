#include "seqalloc/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "seqalloc/errors.hpp"
#include "seqalloc/metrics.hpp"
#include "seqalloc/parallel.hpp"

namespace seqalloc {

ReplicationSummary run_replications(const TrialConfig& cfg, std::uint64_t reps,
                                    std::uint64_t master_seed, unsigned threads) {
    if (reps < 1) throw ConfigError("reps must be >= 1");
    cfg.validate();

    const std::size_t m = cfg.arms.size();
    const bool has_inferior = [&] {
        std::vector<double> means;
        for (const auto& a : cfg.arms) means.push_back(a.true_mean());
        return unique_worst_arm(means).has_value();
    }();

    // Per-replication values, indexed by replication so the reduction below
    // never depends on scheduling.
    std::vector<double> correct(reps), n1(reps), inferior(has_inferior ? reps : 0);
    std::vector<double> counts(reps * m);

    TrialConfig local = cfg;
    local.record_trace = false;
    parallel_for(reps, threads, [&](std::size_t i) {
        Rng rng(derive_seed(master_seed, i));
        const TrialOutcome out = run_trial(local, rng);
        const TrialMetrics tm = compute_metrics(out, local.arms);
        correct[i] = tm.correct ? 1.0 : 0.0;
        n1[i] = static_cast<double>(tm.n1);
        if (has_inferior) inferior[i] = static_cast<double>(*tm.inferior_count);
        for (std::size_t j = 0; j < m; ++j) counts[j * reps + i] = static_cast<double>(out.counts[j]);
    });

    const double r = static_cast<double>(reps);
    ReplicationSummary s;
    s.reps = reps;
    s.total_n = cfg.total_n;
    s.pcs = pairwise_sum(correct.data(), reps) / r;
    s.mean_n1 = pairwise_sum(n1.data(), reps) / r;
    if (reps > 1) {
        for (auto& v : n1) v = (v - s.mean_n1) * (v - s.mean_n1);
        s.sd_n1 = std::sqrt(pairwise_sum(n1.data(), reps) / (r - 1.0));
    }
    if (has_inferior) {
        s.mean_inferior = pairwise_sum(inferior.data(), reps) / r;
        s.inferior_over_logn = *s.mean_inferior / std::log(static_cast<double>(cfg.total_n));
    }
    s.mean_counts.resize(m);
    for (std::size_t j = 0; j < m; ++j) s.mean_counts[j] = pairwise_sum(&counts[j * reps], reps) / r;
    s.min_expected_count = *std::min_element(s.mean_counts.begin(), s.mean_counts.end());
    s.min_expected_count_ratio = s.min_expected_count / static_cast<double>(cfg.total_n);
    s.pcs_se_bound = std::sqrt(1.0 / (4.0 * r));
    return s;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw PreconditionError("least_squares_slope: need two equal-length series of >= 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw PreconditionError("least_squares_slope: x is constant");
    return sxy / sxx;
}

BoundednessReport boundedness_diagnostic(std::span<const GrowthPoint> points) {
    if (points.size() < 3)
        throw PreconditionError("boundedness_diagnostic: need at least 3 distinct N values");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].n <= points[i - 1].n)
            throw PreconditionError("boundedness_diagnostic: N values must be strictly ascending");

    std::vector<double> logn, n1, inf;
    bool all_inferior = true;
    for (const auto& p : points) {
        logn.push_back(std::log(static_cast<double>(p.n)));
        n1.push_back(p.mean_n1);
        if (p.mean_inferior)
            inf.push_back(*p.mean_inferior);
        else
            all_inferior = false;
    }
    BoundednessReport rep;
    rep.n1_slope = least_squares_slope(logn, n1);
    rep.n1_flat = rep.n1_slope < BoundednessReport::kFlatSlope;
    if (all_inferior) rep.inferior_slope = least_squares_slope(logn, inf);
    return rep;
}

BoundednessReport boundedness_diagnostic(
    std::span<const std::pair<std::uint64_t, ReplicationSummary>> summaries) {
    std::vector<GrowthPoint> pts;
    pts.reserve(summaries.size());
    for (const auto& [n, s] : summaries) pts.push_back({n, s.mean_n1, s.mean_inferior});
    return boundedness_diagnostic(pts);
}

}  // namespace seqalloc

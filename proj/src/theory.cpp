#include "seqalloc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "seqalloc/errors.hpp"
#include "seqalloc/montecarlo.hpp"
#include "seqalloc/parallel.hpp"

namespace seqalloc {

namespace {

void check_base(const ShiftedModel& model) {
    const auto& b = model.base;
    if (b.family() == Family::Normal && (b.true_mean() != 0.0 || b.sd() != 1.0))
        throw ConfigError("shifted normal model requires a standard Normal(0, 1) base");
}

// Centered draw Z - E[Z].
double centered_draw(const ResponseModel& base, Rng& rng) {
    return base.draw(rng) - base.true_mean();
}

}  // namespace

double mgf(const ShiftedModel& model, double t) {
    check_base(model);
    const double u = model.u;
    if (model.base.family() == Family::Normal) return std::exp(0.5 * t * t - u * t);
    const double p = model.base.p();
    return (1.0 - p) * std::exp(t * (-p - u)) + p * std::exp(t * (1.0 - p - u));
}

double mgf_derivative(const ShiftedModel& model, double t) {
    check_base(model);
    const double u = model.u;
    if (model.base.family() == Family::Normal) return (t - u) * std::exp(0.5 * t * t - u * t);
    const double p = model.base.p();
    const double lo = -p - u;
    const double hi = 1.0 - p - u;
    return (1.0 - p) * lo * std::exp(t * lo) + p * hi * std::exp(t * hi);
}

double chernoff_rho_normal(double u) {
    if (!(u > 0.0)) throw DomainError("chernoff_rho_normal: u must be > 0");
    return std::exp(-0.5 * u * u);
}

ChernoffRate chernoff_rate_numeric(const ShiftedModel& model) {
    check_base(model);
    if (!(model.u > 0.0))
        throw DomainError("chernoff_rate_numeric: condition E[X] < 0 fails (shift u must be > 0)");
    if (model.base.family() == Family::Bernoulli) {
        const double p = model.base.p();
        if (!(p > 0.0 && 1.0 - p - model.u > 0.0))
            throw DomainError("chernoff_rate_numeric: condition P(X > 0) > 0 fails (need p > 0 and u < 1 - p)");
    }

    // M'(0) = E[X] < 0 and M is convex, so the root of M' is bracketed once M'(hi) > 0.
    double lo = 0.0;
    double hi = 1.0;
    while (mgf_derivative(model, hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw DomainError("chernoff_rate_numeric: minimizer not bracketed");
    }
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mgf_derivative(model, mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    ChernoffRate r;
    r.t_star = 0.5 * (lo + hi);
    r.rho = mgf(model, r.t_star);
    return r;
}

double chernoff_rho_numeric(const ShiftedModel& model) {
    return chernoff_rate_numeric(model).rho;
}

double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double incorrect_inference_bound(double delta, double eps, std::uint64_t m_init) {
    if (!(delta > 0.0)) throw DomainError("incorrect_inference_bound: delta must be > 0");
    if (!(eps >= 0.0)) throw DomainError("incorrect_inference_bound: eps must be >= 0");
    if (m_init < 1) throw DomainError("incorrect_inference_bound: m_init must be >= 1");
    return standard_normal_cdf(-(delta + eps) * std::sqrt(static_cast<double>(m_init)));
}

double tail_bound(std::uint64_t k, const TailBound& tb) {
    const double v = tb.c * std::pow(tb.rho, static_cast<double>(k)) / (1.0 - tb.rho);
    return std::min(1.0, v);
}

std::uint64_t required_horizon(double rho, double c, double target) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("required_horizon: rho must lie in (0, 1)");
    if (!(c > 0.0) || !(target > 0.0)) throw DomainError("required_horizon: c and target must be > 0");
    auto envelope = [&](std::uint64_t n) { return c * std::pow(rho, static_cast<double>(n)) / (1.0 - rho); };
    const double h = std::log(target * (1.0 - rho) / c) / std::log(rho);
    auto n = static_cast<std::uint64_t>(std::max(0.0, std::ceil(h)));
    while (envelope(n) >= target) ++n;
    while (n > 0 && envelope(n - 1) < target) --n;
    return n;
}

StoppingTime stopping_time_from_stream(std::span<const double> z, double u) {
    if (z.empty()) throw PreconditionError("stopping_time_from_stream: empty stream");
    double sum = 0.0;
    std::uint64_t last_exceed = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        sum += z[i];
        const auto n = static_cast<std::uint64_t>(i + 1);
        if (sum / static_cast<double>(n) > u) last_exceed = n;
    }
    const auto h = static_cast<std::uint64_t>(z.size());
    if (last_exceed == h) return {h + 1, true};
    return {last_exceed + 1, false};
}

std::vector<StoppingTime> stopping_time_nested(const ShiftedModel& model,
                                               std::span<const std::uint64_t> horizons, Rng& rng) {
    check_base(model);
    if (horizons.empty() || horizons.front() < 1)
        throw PreconditionError("stopping_time_oracle: horizon must be >= 1");
    for (std::size_t i = 1; i < horizons.size(); ++i)
        if (horizons[i] <= horizons[i - 1])
            throw PreconditionError("stopping_time_oracle: horizons must be strictly ascending");

    std::vector<StoppingTime> out(horizons.size());
    double sum = 0.0;
    std::uint64_t last_exceed = 0;
    std::size_t next = 0;
    for (std::uint64_t n = 1; n <= horizons.back(); ++n) {
        sum += centered_draw(model.base, rng);
        if (sum / static_cast<double>(n) > model.u) last_exceed = n;
        if (n == horizons[next]) {
            out[next] = last_exceed == n ? StoppingTime{n + 1, true} : StoppingTime{last_exceed + 1, false};
            ++next;
        }
    }
    return out;
}

StoppingTime stopping_time_oracle(const ShiftedModel& model, std::uint64_t horizon, Rng& rng) {
    const std::uint64_t h[] = {horizon};
    return stopping_time_nested(model, h, rng).front();
}

std::vector<std::vector<StoppingTime>> oracle_runs(const ShiftedModel& model,
                                                   std::span<const std::uint64_t> horizons,
                                                   std::uint64_t runs, std::uint64_t master_seed,
                                                   unsigned threads) {
    std::vector<std::vector<StoppingTime>> out(runs);
    parallel_for(runs, threads, [&](std::size_t i) {
        Rng rng(derive_seed(master_seed, i));
        out[i] = stopping_time_nested(model, horizons, rng);
    });
    return out;
}

std::vector<double> empirical_survival(std::span<const std::uint64_t> samples, std::uint64_t k_max) {
    std::vector<std::uint64_t> hist(k_max + 2, 0);
    for (const auto s : samples) ++hist[std::min<std::uint64_t>(s, k_max + 1)];
    // survival[k] = #{s > k} / n
    std::vector<double> surv(k_max + 1);
    std::uint64_t above = samples.size();
    for (std::uint64_t k = 0; k <= k_max; ++k) {
        above -= hist[k];
        surv[k] = static_cast<double>(above) / static_cast<double>(samples.size());
    }
    return surv;
}

double fit_tail_constant(std::span<const double> survival, double rho, std::uint64_t k0) {
    double c = 0.0;
    for (std::uint64_t k = k0; k < survival.size(); ++k)
        c = std::max(c, survival[k] * (1.0 - rho) / std::pow(rho, static_cast<double>(k)));
    return c;
}

double survival_tail_slope(std::span<const double> survival, std::uint64_t sample_count,
                           std::uint64_t min_hits) {
    std::uint64_t k_hi = 0;
    bool found = false;
    for (std::uint64_t k = 0; k < survival.size(); ++k) {
        if (survival[k] * static_cast<double>(sample_count) >= static_cast<double>(min_hits)) {
            k_hi = k;
            found = true;
        }
    }
    const std::uint64_t k_lo = k_hi / 2;
    if (!found || k_hi - k_lo < 2)
        throw PreconditionError("survival_tail_slope: too few tail samples for a fit");
    std::vector<double> ks, logs;
    for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
        ks.push_back(static_cast<double>(k));
        logs.push_back(std::log(survival[k]));
    }
    return least_squares_slope(ks, logs);
}

MomentStabilityReport moment_stability(const ShiftedModel& model, std::span<const int> orders,
                                       std::pair<std::uint64_t, std::uint64_t> horizons,
                                       std::uint64_t runs, std::uint64_t master_seed,
                                       unsigned threads) {
    if (orders.empty()) throw PreconditionError("moment_stability: no moment orders given");
    if (runs < 1) throw PreconditionError("moment_stability: runs must be >= 1");
    if (!(horizons.first >= 1 && horizons.first < horizons.second))
        throw PreconditionError("moment_stability: horizons must satisfy 1 <= h1 < h2");

    const std::uint64_t hs[] = {horizons.first, horizons.second};
    const auto paths = oracle_runs(model, hs, runs, master_seed, threads);

    MomentStabilityReport rep;
    rep.runs = runs;
    rep.horizons = horizons;
    std::uint64_t cens[2] = {0, 0};
    for (const auto& p : paths)
        for (int h = 0; h < 2; ++h) cens[h] += p[h].censored ? 1 : 0;
    rep.censored_short = static_cast<double>(cens[0]) / static_cast<double>(runs);
    rep.censored_long = static_cast<double>(cens[1]) / static_cast<double>(runs);
    if (rep.censored_short > MomentStabilityReport::kMaxCensored ||
        rep.censored_long > MomentStabilityReport::kMaxCensored)
        throw DomainError("moment_stability: censored fraction " +
                          std::to_string(std::max(rep.censored_short, rep.censored_long)) +
                          " exceeds 1e-4; horizon too small for this u");

    // Moments over uncensored runs only.
    std::vector<double> vals;
    vals.reserve(runs);
    auto moment = [&](int h, int q) {
        vals.clear();
        for (const auto& p : paths)
            if (!p[h].censored) vals.push_back(std::pow(static_cast<double>(p[h].index), q));
        return pairwise_sum(vals.data(), vals.size()) / static_cast<double>(vals.size());
    };
    rep.stable = true;
    for (const int q : orders) {
        MomentRow row;
        row.order = q;
        row.at_short = moment(0, q);
        row.at_long = moment(1, q);
        row.relative_change = std::abs(row.at_long - row.at_short) / row.at_short;
        rep.stable = rep.stable && row.relative_change < MomentStabilityReport::kStableChange;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace seqalloc

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seqalloc/response_model.hpp"
#include "seqalloc/rng.hpp"

namespace seqalloc {

/// Increment X = (Z - E Z) - u, where Z follows `base`.
///
/// For the Normal family `base` must be standard Normal(0, 1). Bernoulli(p)
/// bases are centered at p, so X = B - p - u.
struct ShiftedModel {
    ResponseModel base = ResponseModel::normal(0.0, 1.0);
    double u = 0.0;
};

/// E[exp(t X)].
double mgf(const ShiftedModel& model, double t);
/// d/dt E[exp(t X)].
double mgf_derivative(const ShiftedModel& model, double t);

/// min_t E[exp(t X)] for X ~ N(-u, 1), i.e. exp(-u^2 / 2). Throws DomainError for u <= 0.
double chernoff_rho_normal(double u);

struct ChernoffRate {
    double rho = 1.0;
    /// Minimizing t.
    double t_star = 0.0;
};

/// Numerically minimizes the mgf of X over t >= 0.
///
/// The upper end of the search interval doubles from 1 until M'(t) > 0, then
/// M'(t) = 0 is solved by bisection, so the minimizer is located to machine
/// precision. Throws DomainError naming the failed condition when E[X] < 0 or
/// P(X > 0) > 0 does not hold.
ChernoffRate chernoff_rate_numeric(const ShiftedModel& model);
double chernoff_rho_numeric(const ShiftedModel& model);

/// Standard normal CDF, 0.5 * erfc(-x / sqrt 2).
double standard_normal_cdf(double x);

/// Phi(-(delta + eps) * sqrt(m_init)): bound on the probability that the
/// procedure settles on the inferior arm. Throws DomainError unless
/// delta > 0, eps >= 0, m_init >= 1.
double incorrect_inference_bound(double delta, double eps, std::uint64_t m_init);

/// Geometric envelope C * rho^k / (1 - rho) for P(M*_u > k).
struct TailBound {
    double rho = 0.5;
    double c = 1.0;
    std::uint64_t horizon = 0;
};

/// min(1, c * rho^k / (1 - rho)).
double tail_bound(std::uint64_t k, const TailBound& tb);

/// Smallest h with c * rho^h / (1 - rho) < target. c = 1 is always valid for
/// the one-sided event, since P(mean(X_1..X_n) >= 0) <= rho^n by Markov's inequality.
std::uint64_t required_horizon(double rho, double c, double target = 1e-6);

/// M*_u truncated at a finite horizon.
struct StoppingTime {
    /// Smallest k with mean(z_1..z_n) <= u for every n in [k, horizon];
    /// horizon + 1 when the running mean exceeds u at the horizon itself.
    std::uint64_t index = 1;
    bool censored = false;
};

/// Evaluates M*_u on a given stream z_1..z_h (h = z.size()). Throws
/// PreconditionError for an empty stream.
StoppingTime stopping_time_from_stream(std::span<const double> z, double u);

/// Simulates Z_1..Z_horizon from the centered base model and evaluates M*_u.
/// Throws PreconditionError for horizon < 1.
StoppingTime stopping_time_oracle(const ShiftedModel& model, std::uint64_t horizon, Rng& rng);

/// Evaluates M*_u at several ascending horizons on one simulated path, so the
/// values for a shorter horizon are exactly those obtained by truncating the
/// longer path.
std::vector<StoppingTime> stopping_time_nested(const ShiftedModel& model,
                                               std::span<const std::uint64_t> horizons, Rng& rng);

/// `runs` independent oracle paths; run i seeds its Rng with derive_seed(master_seed, i).
/// Result row i holds the values for each horizon.
std::vector<std::vector<StoppingTime>> oracle_runs(const ShiftedModel& model,
                                                   std::span<const std::uint64_t> horizons,
                                                   std::uint64_t runs, std::uint64_t master_seed,
                                                   unsigned threads = 0);

/// P(M*_u > k) for k = 0..k_max from a sample of stopping times.
std::vector<double> empirical_survival(std::span<const std::uint64_t> samples, std::uint64_t k_max);

/// Smallest C such that survival[k] <= C * rho^k / (1 - rho) for all k >= k0.
double fit_tail_constant(std::span<const double> survival, double rho, std::uint64_t k0);

/// Least-squares slope of log survival[k] over the upper tail: k in
/// [k_hi / 2, k_hi], where k_hi is the largest k with at least `min_hits`
/// samples beyond it. Throws PreconditionError if the tail is too thin.
double survival_tail_slope(std::span<const double> survival, std::uint64_t sample_count,
                           std::uint64_t min_hits = 200);

struct MomentRow {
    int order = 1;
    double at_short = 0.0;
    double at_long = 0.0;
    double relative_change = 0.0;
};

struct MomentStabilityReport {
    std::uint64_t runs = 0;
    std::pair<std::uint64_t, std::uint64_t> horizons;
    std::vector<MomentRow> rows;
    double censored_short = 0.0;
    double censored_long = 0.0;
    /// Every relative change below kStableChange.
    bool stable = false;

    static constexpr double kStableChange = 0.02;
    static constexpr double kMaxCensored = 1e-4;
};

/// Estimates E[(M*_u)^q] for each order at both horizons from the same paths.
/// Throws PreconditionError if horizons are not ascending, orders is empty,
/// or runs < 1, and DomainError if either horizon censors more than
/// kMaxCensored of the runs.
MomentStabilityReport moment_stability(const ShiftedModel& model, std::span<const int> orders,
                                       std::pair<std::uint64_t, std::uint64_t> horizons,
                                       std::uint64_t runs = 100000,
                                       std::uint64_t master_seed = 0x5EED, unsigned threads = 0);

}  // namespace seqalloc

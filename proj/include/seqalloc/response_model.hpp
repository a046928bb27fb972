#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "seqalloc/rng.hpp"

namespace seqalloc {

enum class Family { Normal, Bernoulli };

/// Outcome distribution of one arm. Immutable and validated on construction.
class ResponseModel {
public:
    /// Normal(mean, sd); throws ConfigError unless sd > 0 and both are finite.
    static ResponseModel normal(double mean, double sd);
    /// Bernoulli(p); throws ConfigError unless 0 <= p <= 1.
    static ResponseModel bernoulli(double p);

    Family family() const noexcept { return family_; }
    /// theta for Normal, p for Bernoulli.
    double true_mean() const noexcept { return mean_; }
    /// sigma for Normal, sqrt(p(1-p)) for Bernoulli.
    double sd() const noexcept;
    /// Success probability; only meaningful for Bernoulli.
    double p() const noexcept { return mean_; }

    /// One realization. Normal consumes two engine outputs, Bernoulli one.
    double draw(Rng& rng) const;

    /// Same model with the location moved by `c` (Normal only; used by
    /// shift-invariance checks). Throws ConfigError for Bernoulli.
    ResponseModel shifted(double c) const;

    std::string describe() const;

    friend bool operator==(const ResponseModel&, const ResponseModel&) = default;

private:
    ResponseModel(Family f, double mean, double sd) : family_(f), mean_(mean), sd_(sd) {}

    Family family_;
    double mean_;
    double sd_;
};

/// Running count and sum for one arm. The mean is derived as sum / count so
/// that equal data give bit-equal means, which the tie rule relies on.
struct ArmState {
    std::uint64_t count = 0;
    double sum = 0.0;

    /// Empty when no samples have been drawn.
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
};

/// Returns the state after observing `x`.
constexpr ArmState update(ArmState state, double x) noexcept {
    state.count += 1;
    state.sum += x;
    return state;
}

}  // namespace seqalloc

#include "seqalloc/rng.hpp"

#include <cmath>
#include <numbers>

namespace seqalloc {

double standard_normal(Rng& rng) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return k < n ? k : n - 1;
}

}  // namespace seqalloc

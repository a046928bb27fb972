#include "seqalloc/response_model.hpp"

#include <cmath>
#include <sstream>

#include "seqalloc/errors.hpp"

namespace seqalloc {

ResponseModel ResponseModel::normal(double mean, double sd) {
    if (!std::isfinite(mean)) throw ConfigError("normal mean must be finite");
    if (!(sd > 0.0) || !std::isfinite(sd)) throw ConfigError("normal sd must be > 0");
    return ResponseModel(Family::Normal, mean, sd);
}

ResponseModel ResponseModel::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("bernoulli p must lie in [0, 1]");
    return ResponseModel(Family::Bernoulli, p, 0.0);
}

double ResponseModel::sd() const noexcept {
    if (family_ == Family::Normal) return sd_;
    return std::sqrt(mean_ * (1.0 - mean_));
}

double ResponseModel::draw(Rng& rng) const {
    if (family_ == Family::Normal) return mean_ + sd_ * standard_normal(rng);
    return uniform01(rng) < mean_ ? 1.0 : 0.0;
}

ResponseModel ResponseModel::shifted(double c) const {
    if (family_ != Family::Normal) throw ConfigError("only normal models can be shifted");
    return normal(mean_ + c, sd_);
}

std::string ResponseModel::describe() const {
    std::ostringstream os;
    os.precision(6);
    if (family_ == Family::Normal)
        os << "Normal(" << mean_ << ", sd=" << sd_ << ")";
    else
        os << "Bernoulli(" << mean_ << ")";
    return os.str();
}

}  // namespace seqalloc

#include "matchkit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace matchkit {

Measure::Measure(std::vector<double> weights, MeasureMode mode)
    : w_(std::move(weights)), mode_(mode) {
    if (w_.empty()) throw input_error("measure needs at least one weight");
    // Exact zeros are tolerated so that degenerate splits of an extended
    // measure round-trip; operations needing exact support check for it.
    for (double v : w_)
        if (v < 0.0 || !std::isfinite(v))
            throw input_error("measure weights must be nonnegative");
    if (mode_ == MeasureMode::probability) {
        double s = total();
        if (std::fabs(s - 1.0) > 1e-12 * std::max(1.0, s))
            throw input_error("probability measure must sum to 1");
    }
}

double Measure::total() const {
    return std::accumulate(w_.begin(), w_.end(), 0.0);
}

double Measure::min_weight() const {
    return *std::min_element(w_.begin(), w_.end());
}

double Measure::max_weight() const {
    return *std::max_element(w_.begin(), w_.end());
}

Measure Measure::normalized() const {
    double s = total();
    std::vector<double> w(w_);
    for (double& v : w) v /= s;
    // renormalize exactly so downstream sum checks hold
    double s2 = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= s2;
    return Measure(std::move(w), MeasureMode::probability);
}

} // namespace matchkit

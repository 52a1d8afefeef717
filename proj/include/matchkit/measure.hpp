#pragma once

#include <string>
#include <vector>

#include "matchkit/structure.hpp"

namespace matchkit {

enum class MeasureMode { probability, intensity };

// Weight vector over the nodes of a structure.  Probability mode requires
// full support and unit mass; intensity mode only positivity.
class Measure {
public:
    Measure(std::vector<double> weights, MeasureMode mode);

    static Measure probability(std::vector<double> w) {
        return Measure(std::move(w), MeasureMode::probability);
    }
    static Measure intensity(std::vector<double> w) {
        return Measure(std::move(w), MeasureMode::intensity);
    }
    static Measure uniform(int n) {
        return probability(std::vector<double>(n, 1.0 / n));
    }

    MeasureMode mode() const { return mode_; }
    int dim() const { return static_cast<int>(w_.size()); }
    double operator()(int i) const { return w_[i]; }
    double operator()(NodeSet s) const {
        double t = 0;
        for (int i : s.members()) t += w_[i];
        return t;
    }
    const std::vector<double>& weights() const { return w_; }

    double total() const;
    double min_weight() const;
    double max_weight() const;

    // lambda -> mu_lambda = lambda_i / lambda_bar
    Measure normalized() const;

private:
    std::vector<double> w_;
    MeasureMode mode_;
};

} // namespace matchkit

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace negeo::numeric {

/// log(sum_k exp(x_k)) with max subtraction. Entries equal to -inf are empty
/// terms; an all-empty input returns -inf.
inline double log_sum_exp(std::span<const double> x) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : x) peak = std::max(peak, v);
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (double v : x) acc += std::exp(v - peak);
    return peak + std::log(acc);
}

}  // namespace negeo::numeric

#pragma once

#include "negeo/types.hpp"

#include <cstddef>
#include <span>

namespace negeo::stats {

/// Durbin-Watson statistic. `segments` lists the lengths of consecutive
/// independent series in `residuals` (e.g. one per region); differences are
/// never taken across a segment boundary. Empty `segments` means one series.
/// NaN when every residual is zero.
double durbin_watson(const Vector& residuals, std::span<const std::size_t> segments = {});

struct FitStatistics {
    double ssr = 0.0;
    double r2 = 0.0;
    double dw = 0.0;
    double see = 0.0;
    long observations = 0;
    int parameters = 0;
    bool covariance_available = false;
    Vector standard_errors; // in the coordinates selected by transform_gradient; NaN if unavailable
};

/// Regression diagnostics from residuals e = observed - predicted.
///   SEE = sqrt(SSR / (N - k)),  R2 = 1 - SSR / sum (y - mean y)^2,
///   SE  = sqrt(diag(s^2 (J^T J)^-1)) scaled by |transform_gradient|
/// where `jacobian` is d(residual)/d(coordinates) and transform_gradient
/// (default: ones) maps those coordinates to the reported parameters by the
/// delta method. Singular J^T J leaves covariance_available false.
/// Throws UsageError unless N > k.
FitStatistics fit_statistics(const Vector& residuals, const Matrix& jacobian,
                             const Vector& observed, int k,
                             std::span<const std::size_t> segments = {},
                             const Vector* transform_gradient = nullptr);

}  // namespace negeo::stats

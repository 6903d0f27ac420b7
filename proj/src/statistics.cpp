#include "negeo/statistics.hpp"

#include "negeo/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace negeo::stats {

double durbin_watson(const Vector& e, std::span<const std::size_t> segments) {
    const std::size_t n = static_cast<std::size_t>(e.size());
    const std::size_t covered =
        segments.empty() ? n : std::accumulate(segments.begin(), segments.end(), std::size_t{0});
    if (covered != n) throw UsageError("durbin_watson: segment lengths do not cover the residuals");

    const double den = e.squaredNorm();
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();

    double num = 0.0;
    auto accumulate_segment = [&](std::size_t begin, std::size_t len) {
        for (std::size_t t = begin + 1; t < begin + len; ++t) {
            const double d = e(static_cast<Eigen::Index>(t)) - e(static_cast<Eigen::Index>(t - 1));
            num += d * d;
        }
    };
    if (segments.empty()) {
        accumulate_segment(0, n);
    } else {
        std::size_t begin = 0;
        for (std::size_t len : segments) {
            accumulate_segment(begin, len);
            begin += len;
        }
    }
    return num / den;
}

FitStatistics fit_statistics(const Vector& residuals, const Matrix& jacobian,
                             const Vector& observed, int k,
                             std::span<const std::size_t> segments,
                             const Vector* transform_gradient) {
    const Eigen::Index n = residuals.size();
    if (observed.size() != n) throw UsageError("fit_statistics: observed/residual length mismatch");
    if (n <= k) throw UsageError("fit_statistics: need more observations than parameters");
    if (jacobian.rows() != n || jacobian.cols() != k)
        throw UsageError("fit_statistics: jacobian must be N x k");

    FitStatistics s;
    s.observations = static_cast<long>(n);
    s.parameters = k;
    s.ssr = residuals.squaredNorm();
    s.see = std::sqrt(s.ssr / static_cast<double>(n - k));
    const double tss = (observed.array() - observed.mean()).square().sum();
    s.r2 = tss > 0.0 ? 1.0 - s.ssr / tss : std::numeric_limits<double>::quiet_NaN();
    s.dw = durbin_watson(residuals, segments);

    s.standard_errors = Vector::Constant(k, std::numeric_limits<double>::quiet_NaN());
    Eigen::JacobiSVD<Matrix> svd(jacobian);
    const Vector sv = svd.singularValues();
    if (k == 0 || !(sv(k - 1) > 1e-12 * sv(0))) return s;

    const Matrix info = jacobian.transpose() * jacobian;
    const Matrix cov = (s.ssr / static_cast<double>(n - k)) * info.inverse();
    s.covariance_available = true;
    for (int j = 0; j < k; ++j) {
        const double scale = transform_gradient ? std::abs((*transform_gradient)(j)) : 1.0;
        s.standard_errors(j) = scale * std::sqrt(cov(j, j));
    }
    return s;
}

}  // namespace negeo::stats

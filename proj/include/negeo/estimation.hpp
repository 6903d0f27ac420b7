#pragma once

#include "negeo/levenberg_marquardt.hpp"
#include "negeo/panel.hpp"
#include "negeo/types.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace negeo::estimation {

/// Stacked time-differenced residuals, region-major: region 1 all years,
/// region 2 all years, and so on.
struct ResidualSet {
    Vector residual;                         // observed - predicted
    Vector observed;                         // Delta log w
    std::vector<std::pair<int, int>> index;  // (region index, year) per entry
    std::vector<std::size_t> segments;       // kept observations per region
    long dropped = 0;
};

/// A row (i, t) is usable when its w, Y (and H for Thomas) are positive and
/// finite. Observation (i, t) needs rows (i, t) and (i, t-1); the
/// market-access sums of that year pair skip regions unusable in either year.
ResidualSet residuals(Variant variant, const ModelParams& params, const Panel& panel);

/// Maps unconstrained optimizer coordinates to positive parameters.
enum class Transform {
    Exp,      // x = exp(u)
    Softplus, // x = log(1 + exp(u))
};

struct FitOptions {
    ModelParams start{5.0, 1.0, 0.1};
    std::vector<ModelParams> extra_starts; // tried after `start`, before jittered starts
    int multistart = 5;                    // total starts including `start`
    std::uint64_t seed = 20240601;
    double jitter = 0.5;                   // uniform half-width in unconstrained coordinates
    int max_iter = 500;
    double fd_step = 1e-6;
    double ftol = 1e-12;
    std::optional<double> fixed_mu;        // pin mu instead of estimating it
    Transform transform = Transform::Exp;
};

struct ParameterEstimate {
    double value = 0.0;
    double se = 0.0;
    double t = 0.0;
    bool estimated = false; // false: pinned or absent
};

struct FitResult {
    Variant variant = Variant::Krugman;
    ParameterEstimate sigma, mu, tau;
    bool has_tau = true; // Fujita carries no tau
    bool se_available = false;
    double r2 = 0.0, dw = 0.0, see = 0.0;
    double objective = 0.0;
    long observations = 0;
    long dropped = 0;
    int iterations = 0;
    bool converged = false;
    double returns_index = 0.0;   // sigma / (sigma - 1)
    double blackhole_index = 0.0; // sigma (1 - mu)
    bool warn_mu_above_one = false;
    bool warn_tau_at_bound = false;
    std::vector<double> start_objectives; // SSR at each multistart point

    ModelParams params() const;
};

/// Residual function over unconstrained coordinates, as used by nls_fit.
/// Exposed for derivative checks.
struct Objective {
    Variant variant;
    const Panel* panel;
    std::optional<double> fixed_mu;
    Transform transform;

    int dimension() const;
    ModelParams to_params(const Vector& u) const;
    Vector to_coordinates(const ModelParams& p) const;
    /// d(parameter)/d(coordinate) for each free parameter.
    Vector transform_gradient(const Vector& u) const;
    Vector operator()(const Vector& u) const;
};

/// Levenberg-Marquardt NLS fit of the differenced reduced form with
/// multistart. Throws UsageError for missing variant series and
/// EstimationError for a degenerate panel.
FitResult nls_fit(Variant variant, const Panel& panel, const FitOptions& opts = {});

}  // namespace negeo::estimation

#pragma once

#include "negeo/types.hpp"

#include <functional>
#include <string>

namespace negeo::lm {

/// Residual vector as a function of the (unconstrained) parameter vector.
/// May throw negeo::Error or return non-finite values; both count as an
/// infinitely bad trial point.
using ResidualFn = std::function<Vector(const Vector&)>;

struct Options {
    int max_iter = 500;
    double ftol = 1e-12;    // relative decrease of the objective
    double xtol = 1e-14;    // relative step length
    double gtol = 1e-30;    // sup-norm of J^T r
    double fd_step = 1e-6;  // relative forward-difference step
    double lambda0 = 1e-3;  // initial damping, relative to diag(J^T J)
    double lambda_max = 1e16;
};

struct Result {
    Vector x;
    Vector residual;
    double objective = 0.0; // sum of squared residuals
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string reason;
};

/// Forward differences with step fd_step * max(|x_k|, 1).
Matrix forward_jacobian(const ResidualFn& f, const Vector& x, const Vector& fx, double fd_step);

/// Central differences with the same step convention.
Matrix central_jacobian(const ResidualFn& f, const Vector& x, double fd_step);

/// Marquardt-scaled Levenberg-Marquardt on sum(r^2). Only downhill steps are
/// accepted, so the returned objective never exceeds the objective at x0.
/// Throws NumericalError if the residual is not finite at x0.
Result minimize(const ResidualFn& f, const Vector& x0, const Options& opts = {});

}  // namespace negeo::lm

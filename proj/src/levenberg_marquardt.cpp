#include "negeo/levenberg_marquardt.hpp"

#include "negeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace negeo::lm {

namespace {

double step_for(double x, double rel) { return rel * std::max(std::abs(x), 1.0); }

// Residuals at a trial point; nullopt marks an unusable point.
std::optional<Vector> try_eval(const ResidualFn& f, const Vector& x) {
    try {
        Vector r = f(x);
        if (!r.allFinite()) return std::nullopt;
        return r;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

Matrix forward_jacobian(const ResidualFn& f, const Vector& x, const Vector& fx, double fd_step) {
    Matrix J(fx.size(), x.size());
    Vector xp = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = step_for(x(k), fd_step);
        xp(k) = x(k) + h;
        J.col(k) = (f(xp) - fx) / h;
        xp(k) = x(k);
    }
    return J;
}

Matrix central_jacobian(const ResidualFn& f, const Vector& x, double fd_step) {
    Vector xp = x, xm = x;
    Matrix J;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = step_for(x(k), fd_step);
        xp(k) = x(k) + h;
        xm(k) = x(k) - h;
        const Vector d = (f(xp) - f(xm)) / (2.0 * h);
        if (k == 0) J.resize(d.size(), x.size());
        J.col(k) = d;
        xp(k) = xm(k) = x(k);
    }
    return J;
}

Result minimize(const ResidualFn& f, const Vector& x0, const Options& opts) {
    Result res;
    res.x = x0;
    auto r0 = try_eval(f, x0);
    res.evaluations = 1;
    if (!r0) throw NumericalError("residuals are not finite at the starting point");
    res.residual = *r0;
    res.objective = res.residual.squaredNorm();

    const Eigen::Index k = x0.size();
    double lambda = opts.lambda0;
    Matrix J = forward_jacobian(f, res.x, res.residual, opts.fd_step);
    res.evaluations += static_cast<int>(k);

    for (res.iterations = 0; res.iterations < opts.max_iter; ++res.iterations) {
        if (res.objective == 0.0) {
            res.converged = true;
            res.reason = "zero residual";
            return res;
        }
        const Matrix A = J.transpose() * J;
        const Vector g = J.transpose() * res.residual;
        if (g.cwiseAbs().maxCoeff() <= opts.gtol) {
            res.converged = true;
            res.reason = "gradient tolerance";
            return res;
        }
        Vector scale = A.diagonal().cwiseMax(1e-12 * std::max(A.diagonal().maxCoeff(), 1e-300));

        bool accepted = false;
        while (!accepted) {
            Matrix damped = A;
            damped.diagonal() += lambda * scale;
            const Vector delta = damped.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= 10.0;
            } else {
                const Vector trial = res.x + delta;
                auto r = try_eval(f, trial);
                ++res.evaluations;
                const double cost = r ? r->squaredNorm() : std::numeric_limits<double>::infinity();
                if (cost < res.objective) {
                    const double decrease = res.objective - cost;
                    const double prev = res.objective;
                    res.x = trial;
                    res.residual = std::move(*r);
                    res.objective = cost;
                    lambda = std::max(lambda / 10.0, 1e-15);
                    accepted = true;
                    if (decrease <= opts.ftol * prev) {
                        res.converged = true;
                        res.reason = "objective tolerance";
                    } else if (delta.norm() <= opts.xtol * (res.x.norm() + opts.xtol)) {
                        res.converged = true;
                        res.reason = "step tolerance";
                    }
                } else {
                    lambda *= 10.0;
                }
            }
            if (!accepted && lambda > opts.lambda_max) {
                // No downhill direction left at working precision.
                res.converged = true;
                res.reason = "no further decrease";
                return res;
            }
        }
        if (res.converged) {
            ++res.iterations;
            return res;
        }
        J = forward_jacobian(f, res.x, res.residual, opts.fd_step);
        res.evaluations += static_cast<int>(k);
    }
    res.reason = "iteration limit";
    return res;
}

}  // namespace negeo::lm

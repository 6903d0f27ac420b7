#pragma once

#include "negeo/equilibrium.hpp"
#include "negeo/types.hpp"

#include <string>
#include <vector>

namespace negeo::dynamics {

struct DynamicsOptions {
    double gamma = 1.0;      // migration speed
    double dt = 0.05;
    long max_steps = 200000;
    double stop_tol = 1e-10; // sup-norm of lambda change per unit time
    long sample_every = 100; // trajectory thinning; the terminal point is always kept

    void validate() const;
};

struct Sample {
    double time = 0.0;
    Vector lambda;
    Vector omega;
};

struct Trajectory {
    std::vector<Sample> samples;
    Vector terminal_lambda;
    double concentration = 0.0; // max_i terminal lambda_i
    long steps = 0;
    bool settled = false;       // stop_tol reached before max_steps
};

/// Terminal classification used by sweeps and reports.
enum class Outcome { Agglomerated, Symmetric, Intermediate };
Outcome classify(const Vector& lambda);

/// One forward-Euler replicator step
///   lambda_i += gamma lambda_i (omega_i - mean_omega) dt,
/// with mean_omega = sum_j lambda_j omega_j, clamped at zero and renormalized.
/// Empty regions stay empty and do not enter the mean.
Vector migrate_step(const Vector& lambda, const Vector& omega, double gamma, double dt);

/// Uniform allocation with `perturbation` of mass moved from region 2 to
/// region 1 (no-op for a single region).
Vector perturbed_symmetric(Eigen::Index n, double perturbation);

/// Alternates short-run solves and migration steps until lambda settles.
/// A short-run non-convergence aborts with NumericalError carrying lambda.
Trajectory simulate(Variant variant, const ModelParams& params, const Geography& geo,
                    const Vector& lambda0, const equilibrium::Allocation& fixed,
                    const DynamicsOptions& dyn = {},
                    const equilibrium::SolverOptions& solver = {});

struct SweepPoint {
    double tau = 0.0;
    double concentration = 0.0;
    bool ok = false;
    bool settled = false;
    std::string error;
};

/// Runs simulate from the perturbed symmetric start at every tau in the
/// strictly increasing grid. Failed points are marked and the sweep goes on.
/// Points are independent and evaluated on up to `threads` workers, but the
/// output is ordered by grid index.
std::vector<SweepPoint> tau_sweep(Variant variant, const ModelParams& params,
                                  const Geography& geo, const std::vector<double>& tau_grid,
                                  double perturbation, const equilibrium::Allocation& fixed,
                                  const DynamicsOptions& dyn = {},
                                  const equilibrium::SolverOptions& solver = {},
                                  unsigned threads = 1);

/// True when at least 90% of points succeeded.
bool sweep_acceptable(const std::vector<SweepPoint>& points);

}  // namespace negeo::dynamics

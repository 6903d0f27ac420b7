#include "negeo/dynamics.hpp"

#include "negeo/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace negeo::dynamics {

void DynamicsOptions::validate() const {
    if (!(gamma > 0.0)) throw UsageError("gamma must be > 0");
    if (!(dt > 0.0)) throw UsageError("dt must be > 0");
    if (max_steps <= 0) throw UsageError("max_steps must be positive");
    if (!(stop_tol > 0.0)) throw UsageError("stop_tol must be > 0");
    if (sample_every <= 0) throw UsageError("sample_every must be positive");
}

Outcome classify(const Vector& lambda) {
    const double top = lambda.maxCoeff();
    if (top >= 0.99) return Outcome::Agglomerated;
    if (top <= 1.0 / static_cast<double>(lambda.size()) + 0.01) return Outcome::Symmetric;
    return Outcome::Intermediate;
}

Vector migrate_step(const Vector& lambda, const Vector& omega, double gamma, double dt) {
    const Eigen::Index n = lambda.size();
    double mean = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
        if (lambda(j) > 0.0) mean += lambda(j) * omega(j);

    Vector next(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        next(i) = lambda(i) > 0.0
                      ? std::max(0.0, lambda(i) + gamma * lambda(i) * (omega(i) - mean) * dt)
                      : 0.0;
    }
    return next / next.sum();
}

Vector perturbed_symmetric(Eigen::Index n, double perturbation) {
    Vector lambda = Vector::Constant(n, 1.0 / static_cast<double>(n));
    if (n >= 2) {
        lambda(0) += perturbation;
        lambda(1) -= perturbation;
    }
    return lambda;
}

namespace {

std::string describe(const Vector& v) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
    os << ')';
    return os.str();
}

}  // namespace

Trajectory simulate(Variant variant, const ModelParams& params, const Geography& geo,
                    const Vector& lambda0, const equilibrium::Allocation& fixed,
                    const DynamicsOptions& dyn, const equilibrium::SolverOptions& solver) {
    dyn.validate();
    equilibrium::Allocation alloc = fixed;
    alloc.lambda = lambda0;

    Trajectory traj;
    Vector warm;
    double time = 0.0;
    for (long step = 0;; ++step) {
        auto eq = equilibrium::solve_short_run(variant, params, geo, alloc, solver, std::nullopt,
                                               warm.size() ? &warm : nullptr);
        if (!eq.converged)
            throw NumericalError("short-run solve did not converge at lambda = " +
                                 describe(alloc.lambda) + " (residual " +
                                 std::to_string(eq.residual) + ")");
        warm = eq.state.w;

        const Vector next = migrate_step(alloc.lambda, eq.state.omega, dyn.gamma, dyn.dt);
        const double speed = (next - alloc.lambda).cwiseAbs().maxCoeff() / dyn.dt;
        const bool settled = speed < dyn.stop_tol;
        const bool last = settled || step >= dyn.max_steps;

        if (step % dyn.sample_every == 0 || last)
            traj.samples.push_back({time, alloc.lambda, eq.state.omega});
        if (last) {
            traj.settled = settled;
            traj.steps = step;
            break;
        }
        alloc.lambda = next;
        time += dyn.dt;
    }
    traj.terminal_lambda = alloc.lambda;
    traj.concentration = alloc.lambda.maxCoeff();
    return traj;
}

std::vector<SweepPoint> tau_sweep(Variant variant, const ModelParams& params,
                                  const Geography& geo, const std::vector<double>& tau_grid,
                                  double perturbation, const equilibrium::Allocation& fixed,
                                  const DynamicsOptions& dyn,
                                  const equilibrium::SolverOptions& solver, unsigned threads) {
    if (tau_grid.empty()) throw UsageError("tau grid is empty");
    for (std::size_t k = 0; k < tau_grid.size(); ++k) {
        if (!(tau_grid[k] >= 0.0)) throw UsageError("tau grid values must be >= 0");
        if (k > 0 && !(tau_grid[k] > tau_grid[k - 1]))
            throw UsageError("tau grid must be strictly increasing");
    }
    dyn.validate();
    const Vector lambda0 = perturbed_symmetric(geo.size(), perturbation);

    std::vector<SweepPoint> points(tau_grid.size());
    auto run_point = [&](std::size_t k) {
        SweepPoint& pt = points[k];
        pt.tau = tau_grid[k];
        ModelParams p = params;
        p.tau = tau_grid[k];
        try {
            const Trajectory t = simulate(variant, p, geo, lambda0, fixed, dyn, solver);
            pt.concentration = t.concentration;
            pt.settled = t.settled;
            pt.ok = true;
        } catch (const Error& e) {
            pt.ok = false;
            pt.error = e.what();
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
    if (threads == 1) {
        for (std::size_t k = 0; k < points.size(); ++k) run_point(k);
        return points;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < points.size(); k = next++) run_point(k);
        });
    }
    pool.clear();
    return points;
}

bool sweep_acceptable(const std::vector<SweepPoint>& points) {
    if (points.empty()) return false;
    const auto ok = std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return p.ok; });
    return static_cast<double>(ok) >= 0.9 * static_cast<double>(points.size());
}

}  // namespace negeo::dynamics

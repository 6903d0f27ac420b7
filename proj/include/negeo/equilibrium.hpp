#pragma once

#include "negeo/types.hpp"

#include <optional>

namespace negeo::equilibrium {

struct SolverOptions {
    double tol = 1e-12;   // relative sup-norm change in w
    int max_iter = 10000;
    double damping = 0.5; // weight on the new iterate, in (0, 1]

    void validate() const;
};

struct EquilibriumResult {
    RegionalState state;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Exogenous spatial allocation for a short-run solve. `phi` is required by
/// Krugman/Fujita; `H` and `L` by Thomas.
struct Allocation {
    Vector lambda;
    std::optional<Vector> phi;
    std::optional<Vector> H;
    double L = 1.0;
};

/// Damped successive substitution on the short-run system: income, price
/// index and nominal wage (plus housing price for Thomas). Starts from
/// w = 1 unless `initial_w` is given. Thomas wages are rescaled to the
/// numeraire sum_i lambda_i w_i = 1 on every iteration.
///
/// Non-convergence is reported through `converged`, not thrown. Invalid
/// shares or missing series throw UsageError.
EquilibriumResult solve_short_run(Variant variant, const ModelParams& params,
                                  const Geography& geo, const Allocation& alloc,
                                  const SolverOptions& opts = {},
                                  std::optional<int> year = std::nullopt,
                                  const Vector* initial_w = nullptr);

/// Largest relative violation of the structural equations by `state`:
/// income, price index, nominal wage and (Thomas) housing price. For Thomas
/// the wage equation is checked after rescaling its right-hand side to the
/// numeraire, since that system only pins wages up to a common factor.
double closure_residual(Variant variant, const ModelParams& params, const Geography& geo,
                        const RegionalState& state, std::optional<int> year = std::nullopt);

}  // namespace negeo::equilibrium

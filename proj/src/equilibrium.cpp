#include "negeo/equilibrium.hpp"

#include "negeo/error.hpp"
#include "negeo/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace negeo::equilibrium {

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw UsageError("solver tol must be > 0");
    if (max_iter <= 0) throw UsageError("solver max_iter must be positive");
    if (!(damping > 0.0 && damping <= 1.0)) throw UsageError("solver damping must be in (0, 1]");
}

namespace {

void check_shares(const Vector& v, Eigen::Index n, const char* name) {
    if (v.size() != n)
        throw UsageError(std::string(name) + " must have " + std::to_string(n) + " entries");
    if ((v.array() < 0.0).any() || (v.array() > 1.0).any() || !v.allFinite())
        throw UsageError(std::string(name) + " entries must lie in [0, 1]");
    if (std::abs(v.sum() - 1.0) > 1e-12)
        throw UsageError(std::string(name) + " must sum to 1");
}

struct System {
    Variant variant;
    const ModelParams& params;
    Matrix freight;
    const Allocation& alloc;

    Vector income(const Vector& w) const {
        const Eigen::Index n = w.size();
        Vector Y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            Y(i) = is_thomas(variant)
                       ? model::income_thomas(alloc.lambda(i), alloc.L, w(i))
                       : model::income_krugman(params, (*alloc.phi)(i), alloc.lambda(i), w(i));
        }
        return Y;
    }

    double numeraire(const Vector& w) const { return alloc.lambda.dot(w); }
};

RegionalState assemble(const System& sys, const Vector& w) {
    const auto& params = sys.params;
    RegionalState s;
    s.lambda = sys.alloc.lambda;
    s.L = sys.alloc.L;
    if (sys.alloc.phi) s.phi = *sys.alloc.phi;
    if (sys.alloc.H) s.H = *sys.alloc.H;
    s.w = w;
    s.Y = sys.income(w);
    s.G = model::price_index(params, s.lambda, w, sys.freight);
    const Eigen::Index n = w.size();
    s.omega.resize(n);
    if (is_thomas(sys.variant)) {
        s.P.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            s.P(i) = model::housing_price(params, s.Y(i), (*sys.alloc.H)(i));
            s.omega(i) = model::real_wage(sys.variant, params, w(i), s.G(i), s.P(i));
        }
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            s.omega(i) = model::real_wage(sys.variant, params, w(i), s.G(i));
    }
    return s;
}

}  // namespace

EquilibriumResult solve_short_run(Variant variant, const ModelParams& params,
                                  const Geography& geo, const Allocation& alloc,
                                  const SolverOptions& opts, std::optional<int> year,
                                  const Vector* initial_w) {
    params.validate();
    opts.validate();
    const Eigen::Index n = geo.size();
    if (n <= 0) throw UsageError("geography has no regions");
    check_shares(alloc.lambda, n, "lambda");
    if (is_thomas(variant)) {
        if (!alloc.H) throw UsageError("thomas variant requires the H series");
        if (alloc.H->size() != n || !(alloc.H->array() > 0.0).all())
            throw UsageError("H must have " + std::to_string(n) + " strictly positive entries");
        if (!(alloc.L > 0.0)) throw UsageError("L must be > 0");
        if (params.mu > 1.0)
            throw UsageError("thomas short-run system requires mu <= 1 (housing price "
                             "would be negative)");
    } else {
        if (!alloc.phi) throw UsageError("krugman/fujita variants require the phi series");
        check_shares(*alloc.phi, n, "phi");
    }

    const System sys{variant, params, model::freight_for(variant, params, geo, year), alloc};

    Vector w = initial_w ? *initial_w : Vector::Ones(n);
    if (w.size() != n || !(w.array() > 0.0).all())
        throw UsageError("initial wage guess must be positive with one entry per region");
    if (is_thomas(variant)) w /= sys.numeraire(w);

    EquilibriumResult out;
    out.residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= opts.max_iter; ++it) {
        const Vector Y = sys.income(w);
        const Vector G = model::price_index(params, alloc.lambda, w, sys.freight);
        Vector w_new = model::nominal_wage_rhs(params, Y, G, sys.freight);
        if (is_thomas(variant)) w_new /= sys.numeraire(w_new);
        if (!w_new.allFinite())
            throw NumericalError("short-run iteration produced non-finite wages");

        out.residual = ((w_new - w).array().abs() / w.array()).maxCoeff();
        out.iterations = it;
        w = opts.damping * w_new + (1.0 - opts.damping) * w;
        if (out.residual <= opts.tol) {
            out.converged = true;
            break;
        }
    }
    out.state = assemble(sys, w);
    return out;
}

double closure_residual(Variant variant, const ModelParams& params, const Geography& geo,
                        const RegionalState& s, std::optional<int> year) {
    const Matrix freight = model::freight_for(variant, params, geo, year);
    const Eigen::Index n = s.w.size();
    auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(std::abs(want), 1e-300);
    };

    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double Y = is_thomas(variant)
                             ? model::income_thomas(s.lambda(i), s.L, s.w(i))
                             : model::income_krugman(params, s.phi(i), s.lambda(i), s.w(i));
        worst = std::max(worst, std::abs(Y - s.Y(i)) / std::max(std::abs(Y), 1.0));
    }
    const Vector G = model::price_index(params, s.lambda, s.w, freight);
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, rel(s.G(i), G(i)));

    Vector w = model::nominal_wage_rhs(params, s.Y, s.G, freight);
    if (is_thomas(variant)) w /= s.lambda.dot(w);
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, rel(s.w(i), w(i)));

    if (is_thomas(variant)) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double P = model::housing_price(params, s.Y(i), s.H(i));
            worst = std::max(worst, std::abs(P - s.P(i)) / std::max(std::abs(P), 1.0));
        }
    }
    return worst;
}

}  // namespace negeo::equilibrium

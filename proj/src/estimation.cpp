#include "negeo/estimation.hpp"

#include "negeo/error.hpp"
#include "negeo/model.hpp"
#include "negeo/reduced_form.hpp"
#include "negeo/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace negeo::estimation {

namespace {

bool usable_row(Variant variant, const PanelSlice& s, Eigen::Index i) {
    auto ok = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!ok(s.w(i)) || !ok(s.Y(i))) return false;
    if (is_thomas(variant) && !ok((*s.H)(i))) return false;
    return true;
}

void require_series(Variant variant, const Panel& panel) {
    if (is_thomas(variant) && !panel.has_housing())
        throw UsageError("thomas variant requires the H series, which the panel lacks");
    if (variant == Variant::Fujita && !panel.has_transport())
        throw UsageError("fujita variant requires transport costs T; load the panel with a "
                         "transport file");
}

double positive(Transform t, double u) {
    if (t == Transform::Exp) return std::exp(u);
    return u > 30.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

double positive_inverse(Transform t, double x) {
    if (t == Transform::Exp) return std::log(x);
    return x > 30.0 ? x + std::log(-std::expm1(-x)) : std::log(std::expm1(x));
}

double positive_derivative(Transform t, double u) {
    if (t == Transform::Exp) return std::exp(u);
    return 1.0 / (1.0 + std::exp(-u));
}

}  // namespace

ResidualSet residuals(Variant variant, const ModelParams& params, const Panel& panel) {
    panel.validate();
    require_series(variant, panel);
    const Eigen::Index n = panel.regions();
    const std::size_t years = panel.years();

    std::vector<std::vector<bool>> usable(years, std::vector<bool>(static_cast<std::size_t>(n)));
    for (std::size_t t = 0; t < years; ++t)
        for (Eigen::Index i = 0; i < n; ++i)
            usable[t][static_cast<std::size_t>(i)] = usable_row(variant, panel.slices[t], i);

    // predicted[t-1] holds Delta log w predicted for the pair (t-1, t).
    std::vector<Vector> predicted(years - 1);
    std::vector<std::vector<bool>> pair_mask(years - 1, std::vector<bool>(static_cast<std::size_t>(n)));
    for (std::size_t t = 1; t < years; ++t) {
        auto& mask = pair_mask[t - 1];
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = usable[t][i] && usable[t - 1][i];
        if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) continue;
        predicted[t - 1] = reduced_form::predict_dlogw(variant, params, panel.slices[t],
                                                       panel.slices[t - 1], panel.geography, &mask);
    }

    ResidualSet out;
    std::vector<double> e, y;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t kept = 0;
        for (std::size_t t = 1; t < years; ++t) {
            if (!pair_mask[t - 1][static_cast<std::size_t>(i)]) {
                ++out.dropped;
                continue;
            }
            const double obs =
                std::log(panel.slices[t].w(i)) - std::log(panel.slices[t - 1].w(i));
            const double r = obs - predicted[t - 1](i);
            if (!std::isfinite(r))
                throw DomainError("non-finite residual at region " + std::to_string(i + 1) +
                                  ", year " + std::to_string(panel.slices[t].year));
            e.push_back(r);
            y.push_back(obs);
            out.index.emplace_back(static_cast<int>(i), panel.slices[t].year);
            ++kept;
        }
        out.segments.push_back(kept);
    }
    out.residual = Eigen::Map<const Vector>(e.data(), static_cast<Eigen::Index>(e.size()));
    out.observed = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
    return out;
}

int Objective::dimension() const {
    int k = 1;                                  // sigma
    if (!fixed_mu) ++k;                         // mu
    if (variant != Variant::Fujita) ++k;        // tau
    return k;
}

ModelParams Objective::to_params(const Vector& u) const {
    ModelParams p;
    Eigen::Index k = 0;
    p.sigma = 1.0 + positive(transform, u(k++));
    p.mu = fixed_mu ? *fixed_mu : positive(transform, u(k++));
    p.tau = variant != Variant::Fujita ? positive(transform, u(k++)) : 0.0;
    return p;
}

Vector Objective::to_coordinates(const ModelParams& p) const {
    Vector u(dimension());
    Eigen::Index k = 0;
    u(k++) = positive_inverse(transform, p.sigma - 1.0);
    if (!fixed_mu) u(k++) = positive_inverse(transform, p.mu);
    if (variant != Variant::Fujita) u(k++) = positive_inverse(transform, p.tau);
    return u;
}

Vector Objective::transform_gradient(const Vector& u) const {
    Vector g(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) g(k) = positive_derivative(transform, u(k));
    return g;
}

Vector Objective::operator()(const Vector& u) const {
    return residuals(variant, to_params(u), *panel).residual;
}

ModelParams FitResult::params() const {
    return {sigma.value, mu.value, has_tau ? tau.value : 0.0};
}

FitResult nls_fit(Variant variant, const Panel& panel, const FitOptions& opts) {
    panel.validate();
    require_series(variant, panel);
    if (opts.multistart < 1) throw UsageError("multistart must be >= 1");
    if (opts.fixed_mu && !(*opts.fixed_mu > 0.0)) throw UsageError("fixed mu must be > 0");

    const Objective objective{variant, &panel, opts.fixed_mu, opts.transform};
    const int k = objective.dimension();

    // Observed side does not depend on parameters.
    const ResidualSet probe = residuals(variant, opts.start, panel);
    if (probe.observed.size() <= k)
        throw EstimationError("too few usable observations (" +
                              std::to_string(probe.observed.size()) + ") for " +
                              std::to_string(k) + " parameters");
    const double tss = (probe.observed.array() - probe.observed.mean()).square().sum();
    if (!(tss > 0.0))
        throw EstimationError("degenerate panel: Delta log w has zero variance, R2 undefined");

    std::vector<Vector> starts;
    ModelParams first = opts.start;
    first.tau = std::max(first.tau, 1e-8);
    starts.push_back(objective.to_coordinates(first));
    for (const auto& p : opts.extra_starts) {
        if (static_cast<int>(starts.size()) >= opts.multistart) break;
        ModelParams q = p;
        q.tau = std::max(q.tau, 1e-8);
        starts.push_back(objective.to_coordinates(q));
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-opts.jitter, opts.jitter);
    while (static_cast<int>(starts.size()) < opts.multistart) {
        Vector u = starts.front();
        for (Eigen::Index j = 0; j < u.size(); ++j) u(j) += jitter(rng);
        starts.push_back(u);
    }

    lm::Options lm_opts;
    lm_opts.max_iter = opts.max_iter;
    lm_opts.ftol = opts.ftol;
    lm_opts.fd_step = opts.fd_step;

    FitResult fit;
    fit.variant = variant;
    std::optional<lm::Result> best;
    for (const Vector& u0 : starts) {
        lm::Result r;
        try {
            r = lm::minimize(objective, u0, lm_opts);
        } catch (const Error&) {
            fit.start_objectives.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        fit.start_objectives.push_back(residuals(variant, objective.to_params(u0), panel)
                                           .residual.squaredNorm());
        if (!best || r.objective < best->objective) best = std::move(r);
    }
    if (!best) throw EstimationError("no multistart point yields finite residuals");

    const Vector& u = best->x;
    const ModelParams est = objective.to_params(u);
    const ResidualSet rs = residuals(variant, est, panel);
    const Matrix J = lm::forward_jacobian(objective, u, rs.residual, opts.fd_step);
    const Vector grad = objective.transform_gradient(u);
    const auto st = stats::fit_statistics(rs.residual, J, rs.observed, k, rs.segments, &grad);

    fit.converged = best->converged;
    fit.iterations = best->iterations;
    fit.objective = rs.residual.squaredNorm();
    fit.r2 = st.r2;
    fit.dw = st.dw;
    fit.see = st.see;
    fit.observations = st.observations;
    fit.dropped = rs.dropped;
    fit.se_available = st.covariance_available;
    fit.has_tau = variant != Variant::Fujita;

    Eigen::Index j = 0;
    auto fill = [&](ParameterEstimate& pe, double value) {
        pe.value = value;
        pe.estimated = true;
        pe.se = st.standard_errors(j++);
        pe.t = pe.se > 0.0 ? value / pe.se : std::numeric_limits<double>::quiet_NaN();
    };
    fill(fit.sigma, est.sigma);
    if (opts.fixed_mu) {
        fit.mu.value = *opts.fixed_mu;
        fit.mu.se = fit.mu.t = std::numeric_limits<double>::quiet_NaN();
    } else {
        fill(fit.mu, est.mu);
    }
    if (fit.has_tau) {
        fill(fit.tau, est.tau);
    } else {
        fit.tau.value = fit.tau.se = fit.tau.t = std::numeric_limits<double>::quiet_NaN();
    }

    fit.returns_index = model::returns_index(est.sigma);
    fit.blackhole_index = model::blackhole_index(est.sigma, est.mu);
    fit.warn_mu_above_one = model::mu_above_one(est);
    fit.warn_tau_at_bound = fit.has_tau && est.tau < 1e-6;
    return fit;
}

}  // namespace negeo::estimation

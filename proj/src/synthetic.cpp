#include "negeo/synthetic.hpp"

#include "negeo/error.hpp"
#include "negeo/model.hpp"
#include "negeo/reduced_form.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace negeo::synthetic {

void SyntheticSpec::validate() const {
    truth.validate();
    if (years < 2) throw UsageError("synthetic panel needs at least 2 years");
    if (regions < 1) throw UsageError("synthetic panel needs at least 1 region");
    if (!(noise_sd >= 0.0)) throw UsageError("noise sd must be >= 0");
    if (!(innovation_sd >= 0.0) || !(drift_sd >= 0.0) || !(initial_log_income_sd >= 0.0))
        throw UsageError("income process standard deviations must be >= 0");
    if (geography && geography->size() != regions)
        throw UsageError("geography size does not match region count");
}

namespace {

// Solves log w = LMA(Y, w) / sigma. The map shifts by a = (sigma-1)/(mu sigma)
// under w -> c w, so the common level is solved in closed form and only the
// zero-mean part is iterated.
Vector solve_wages(const ModelParams& p, const PanelSlice& base, const Geography& geo, int year) {
    const Eigen::Index n = geo.size();
    const double a = (p.sigma - 1.0) / (p.mu * p.sigma);
    if (std::abs(1.0 - a) < 1e-9)
        throw NumericalError("wage level is indeterminate when (sigma-1)/(mu sigma) = 1");

    PanelSlice s = base;
    Vector z = Vector::Zero(n);
    auto level_map = [&](const Vector& x) {
        s.w = x.array().exp().matrix();
        return Vector(reduced_form::log_market_access(Variant::Krugman, p, s, geo) / p.sigma);
    };

    constexpr double damping = 0.5;
    constexpr int max_iter = 200000;
    double change = 0.0, best = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int it = 0; it < max_iter; ++it) {
        Vector f = level_map(z);
        f.array() -= f.mean();
        const Vector next = damping * f + (1.0 - damping) * z;
        change = (next - z).cwiseAbs().maxCoeff();
        z = next;
        if (change == 0.0) break;
        if (change < best) {
            best = change;
            stalled = 0;
        } else if (++stalled > 50) {
            break;
        }
    }
    if (!(change <= 1e-12) || !z.allFinite())
        throw NumericalError("synthetic wage fixed point failed in year " + std::to_string(year) +
                             " (last change " + std::to_string(change) + ")");
    // x = z + c with c (1 - a) = mean(F(z) - z).
    const Vector f = level_map(z);
    const double c = (f - z).mean() / (1.0 - a);
    return (z.array() + c).exp().matrix();
}

}  // namespace

Panel generate(const SyntheticSpec& spec) {
    spec.validate();
    const Eigen::Index n = spec.regions;
    Panel panel;
    panel.geography = spec.geography ? *spec.geography : Geography::line(n, 1.0);
    panel.geography.validate();
    for (Eigen::Index i = 0; i < n; ++i) panel.region_ids.push_back("r" + std::to_string(i + 1));

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> standard(0.0, 1.0);

    Vector log_y(n), drift(n), log_h(n), h_drift(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        log_y(i) = spec.initial_log_income_sd * standard(rng);
        drift(i) = spec.drift_mean + spec.drift_sd * standard(rng);
        log_h(i) = 0.5 * standard(rng);
        h_drift(i) = 0.01 + 0.01 * standard(rng);
    }
    const Matrix freight = model::iceberg_freight(spec.truth.tau, panel.geography.distance);

    // Separate stream so the income paths do not depend on noise_sd.
    std::mt19937_64 noise_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    Vector noise_path = Vector::Zero(n);
    for (int k = 0; k < spec.years; ++k) {
        const int year = spec.first_year + k;
        if (k > 0) {
            for (Eigen::Index i = 0; i < n; ++i) {
                log_y(i) += drift(i) + spec.innovation_sd * standard(rng);
                log_h(i) += h_drift(i) + 0.02 * standard(rng);
            }
        }
        PanelSlice s;
        s.year = year;
        s.Y = log_y.array().exp().matrix();
        s.w = Vector::Ones(n);
        if (spec.with_housing) s.H = Vector(log_h.array().exp().matrix());
        if (spec.with_transport) s.T = freight;
        s.w = solve_wages(spec.truth, s, panel.geography, year);

        if (k > 0 && spec.noise_sd > 0.0) {
            for (Eigen::Index i = 0; i < n; ++i) noise_path(i) += spec.noise_sd * standard(noise_rng);
            s.w.array() *= noise_path.array().exp();
        }
        if (spec.with_transport) panel.geography.transport[year] = freight;
        panel.slices.push_back(std::move(s));
    }
    panel.validate();
    return panel;
}

}  // namespace negeo::synthetic

#include "negeo/reduced_form.hpp"

#include "negeo/error.hpp"
#include "negeo/numeric.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace negeo {

bool Panel::has_housing() const {
    if (slices.empty()) return false;
    for (const auto& s : slices)
        if (!s.H) return false;
    return true;
}

bool Panel::has_transport() const {
    if (slices.empty()) return false;
    for (const auto& s : slices)
        if (!s.T) return false;
    return true;
}

void Panel::validate() const {
    const Eigen::Index n = regions();
    if (n <= 0) throw ValidationError("panel has no regions");
    if (slices.size() < 2) throw ValidationError("panel needs at least 2 years");
    if (!region_ids.empty() && static_cast<Eigen::Index>(region_ids.size()) != n)
        throw ValidationError("region id count does not match geography");
    for (std::size_t k = 0; k < slices.size(); ++k) {
        const auto& s = slices[k];
        if (k > 0 && s.year != slices[k - 1].year + 1)
            throw ValidationError("panel years are not consecutive at year " +
                                  std::to_string(s.year));
        if (s.Y.size() != n || s.w.size() != n || (s.H && s.H->size() != n))
            throw ValidationError("slice for year " + std::to_string(s.year) +
                                  " does not have one entry per region");
        if (s.T && (s.T->rows() != n || s.T->cols() != n))
            throw ValidationError("transport matrix for year " + std::to_string(s.year) +
                                  " has the wrong shape");
    }
}

}  // namespace negeo

namespace negeo::reduced_form {

Exponents exponents(Variant variant, const ModelParams& p) {
    const double s = p.sigma, m = p.mu;
    if (is_thomas(variant)) {
        return {(s * (m - 1.0) + 1.0) / m, (1.0 - m) * (s - 1.0) / m, (s - 1.0) / m,
                p.tau * (s - 1.0)};
    }
    if (variant == Variant::Fujita) return {1.0, 0.0, (s - 1.0) / m, s - 1.0};
    return {1.0, 0.0, (s - 1.0) / m, p.tau * (s - 1.0)};
}

namespace {

void require_positive(double v, const char* name, Eigen::Index region, int year) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive and finite (region " +
                          std::to_string(region + 1) + ", year " + std::to_string(year) + ")");
}

}  // namespace

Vector log_market_access(Variant variant, const ModelParams& params, const PanelSlice& slice,
                         const Geography& geo, const std::vector<bool>* include) {
    const Eigen::Index n = geo.size();
    if (slice.Y.size() != n || slice.w.size() != n)
        throw UsageError("slice does not match geography size");
    const bool thomas = is_thomas(variant);
    if (thomas && !slice.H)
        throw UsageError("thomas variant requires the H series (year " +
                         std::to_string(slice.year) + ")");
    if (variant == Variant::Fujita && !slice.T)
        throw UsageError("fujita variant requires transport costs T (year " +
                         std::to_string(slice.year) + ")");

    const Exponents e = exponents(variant, params);
    auto used = [&](Eigen::Index j) { return !include || (*include)[static_cast<std::size_t>(j)]; };

    // Region-specific part of the log terms, shared by every destination i.
    Vector own(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!used(j)) {
            own(j) = -std::numeric_limits<double>::infinity();
            continue;
        }
        require_positive(slice.Y(j), "Y", j, slice.year);
        require_positive(slice.w(j), "w", j, slice.year);
        own(j) = e.on_income * std::log(slice.Y(j)) + e.on_wage * std::log(slice.w(j));
        if (thomas) {
            require_positive((*slice.H)(j), "H", j, slice.year);
            // H^0 is exactly 1, so skip the term when the exponent vanishes.
            if (e.on_housing != 0.0) own(j) += e.on_housing * std::log((*slice.H)(j));
        }
    }

    std::vector<double> terms(static_cast<std::size_t>(n));
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double decay = variant == Variant::Fujita
                                     ? e.decay * std::log((*slice.T)(i, j))
                                     : e.decay * geo.distance(i, j);
            terms[static_cast<std::size_t>(j)] = own(j) - decay;
        }
        out(i) = numeric::log_sum_exp(terms);
    }
    return out;
}

Vector predict_dlogw(Variant variant, const ModelParams& params, const PanelSlice& slice_t,
                     const PanelSlice& slice_prev, const Geography& geo,
                     const std::vector<bool>* include) {
    const Vector now = log_market_access(variant, params, slice_t, geo, include);
    const Vector before = log_market_access(variant, params, slice_prev, geo, include);
    return (now - before) / params.sigma;
}

}  // namespace negeo::reduced_form

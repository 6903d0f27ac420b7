#pragma once

#include "negeo/panel.hpp"
#include "negeo/types.hpp"

#include <vector>

// Reduced-form log-wage equations and their time-differenced predictions.
// The level constants cancel under differencing and never appear here.
namespace negeo::reduced_form {

/// Exponents on Y, H and w inside the market-access sum, and the distance
/// decay coefficient multiplying d_ij (or log T_ij for Fujita).
struct Exponents {
    double on_income;
    double on_housing;
    double on_wage;
    double decay;
};
Exponents exponents(Variant variant, const ModelParams& params);

/// Per-region log market access of one slice, via log-sum-exp:
///   Krugman: log sum_j Y_j w_j^((s-1)/m) exp(-tau (s-1) d_ij)
///   Thomas:  log sum_j Y_j^((s(m-1)+1)/m) H_j^((1-m)(s-1)/m) w_j^((s-1)/m) exp(-tau (s-1) d_ij)
///   Fujita:  log sum_j Y_j w_j^((s-1)/m) T_ij^-(s-1)
/// `include` (optional, length n) masks regions out of the sum.
/// Throws UsageError for missing H/T and DomainError for nonpositive inputs
/// among the included regions.
Vector log_market_access(Variant variant, const ModelParams& params, const PanelSlice& slice,
                         const Geography& geo, const std::vector<bool>* include = nullptr);

/// Model-predicted Delta log w_i between two consecutive slices:
///   (LMA(slice_t) - LMA(slice_prev)) / sigma.
Vector predict_dlogw(Variant variant, const ModelParams& params, const PanelSlice& slice_t,
                     const PanelSlice& slice_prev, const Geography& geo,
                     const std::vector<bool>* include = nullptr);

}  // namespace negeo::reduced_form

#pragma once

#include "negeo/types.hpp"

#include <optional>
#include <string_view>

// Structural equations of the Krugman, Thomas and Fujita-Krugman-Venables
// models. Everything here is a pure function of its arguments.
namespace negeo::model {

/// Marker attached to reports whose expenditure share exceeds one.
inline constexpr std::string_view kMuAboveOneMarker = "[mu>1]";

inline bool mu_above_one(const ModelParams& p) { return p.mu > 1.0; }

/// Y_i = (1 - mu) phi_i + mu lambda_i w_i  (Krugman and Fujita).
double income_krugman(const ModelParams& params, double phi, double lambda, double w);

/// Y_i = lambda_i L w_i  (Thomas).
double income_thomas(double lambda, double L, double w);

/// P_i = (1 - mu) Y_i / H_i. Throws DomainError when H_i <= 0.
double housing_price(const ModelParams& params, double Y, double H);

/// Iceberg freight factors exp(tau d_ij) for Krugman/Thomas.
Matrix iceberg_freight(double tau, const Matrix& distance);

/// Freight matrix for the active variant. Fujita draws T for `year` from the
/// geography (first year when unset); the others use iceberg_freight.
Matrix freight_for(Variant variant, const ModelParams& params, const Geography& geo,
                   std::optional<int> year = std::nullopt);

/// G_i = [sum_j lambda_j (w_j f_ij)^(1-sigma)]^(1/(1-sigma)).
/// Regions with lambda_j = 0 drop out of the sum. Evaluated in log space.
/// Throws DomainError if every lambda_j is zero.
Vector price_index(const ModelParams& params, const Vector& lambda, const Vector& w,
                   const Matrix& freight);

/// w_i = [sum_j Y_j G_j^(sigma-1) f_ij^-(sigma-1)]^(1/sigma).
Vector nominal_wage_rhs(const ModelParams& params, const Vector& Y, const Vector& G,
                        const Matrix& freight);

/// Nominal wage deflated by the price index, and for Thomas also by the
/// housing price: w / (P^(1-mu) G^mu). Throws UsageError if the Thomas form
/// is requested without P.
double real_wage(Variant variant, const ModelParams& params, double w, double G,
                 std::optional<double> P = std::nullopt);

/// sigma / (sigma - 1); above one means increasing returns. DomainError if sigma <= 1.
double returns_index(double sigma);

/// sigma (1 - mu). Below one, agglomeration occurs for any transport cost.
double blackhole_index(double sigma, double mu);

}  // namespace negeo::model

#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace negeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Structural parameters shared by all three model variants.
///
/// `sigma` is the elasticity of substitution between manufactured varieties,
/// `mu` the manufacturing expenditure share and `tau` the transport cost per
/// unit distance. `mu` is deliberately not capped at one: fitted values above
/// one are common and are carried with a warning flag instead of rejected.
struct ModelParams {
    double sigma = 5.0;
    double mu = 0.4;
    double tau = 0.1;

    /// Throws DomainError unless sigma > 1, mu > 0, tau >= 0 (all finite).
    void validate() const;
};

enum class Variant {
    Krugman,
    ThomasHousing,      // H is the housing stock
    ThomasAgricultural, // H is agricultural employment
    Fujita,
};

inline bool is_thomas(Variant v) {
    return v == Variant::ThomasHousing || v == Variant::ThomasAgricultural;
}

/// Canonical CLI spelling: krugman, thomas-housing, thomas-agri, fujita.
std::string_view to_string(Variant v);
/// Throws UsageError on an unknown name.
Variant parse_variant(std::string_view name);
/// Human-readable model title used in reports.
std::string_view model_title(Variant v);

/// Regions, their pairwise distances and (optionally) observed transport
/// cost factors per year.
struct Geography {
    Matrix distance;                    // n x n, symmetric, zero diagonal
    std::map<int, Matrix> transport;    // year -> n x n, symmetric, T_ii = 1, T >= 1

    Eigen::Index size() const { return distance.rows(); }

    /// Throws ValidationError naming the first offending pair.
    void validate() const;

    /// n regions evenly spaced on a line with the given spacing.
    static Geography line(Eigen::Index n, double spacing = 1.0);
};

/// Per-region short-run quantities. Shares (lambda, phi) sum to one.
struct RegionalState {
    Vector Y, w, G, P, omega;
    Vector lambda, phi, H;
    double L = 1.0;
};

}  // namespace negeo

#pragma once

#include "negeo/panel.hpp"
#include "negeo/types.hpp"

#include <cstdint>
#include <optional>

namespace negeo::synthetic {

/// Data-generating process for a Krugman-form panel.
///
/// Incomes follow log Y_it = log Y_i,t-1 + drift_i + e_it with Gaussian
/// innovations. Each year's wages solve the level equation
///   log w_i = sigma^-1 log sum_j Y_j w_j^((sigma-1)/mu) exp(-tau (sigma-1) d_ij)
/// so the noiseless panel satisfies the differenced equation exactly.
/// Measurement noise is added to Delta log w for every year after the first.
struct SyntheticSpec {
    ModelParams truth{6.0, 0.9, 0.05};
    Eigen::Index regions = 10;
    int years = 8;
    int first_year = 1;
    std::optional<Geography> geography; // default: regions on a line, unit spacing
    double initial_log_income_sd = 0.5;
    double drift_mean = 0.02;
    double drift_sd = 0.01;
    double innovation_sd = 0.05;
    double noise_sd = 0.0;
    bool with_housing = true;   // exogenous H random walk (for Thomas fits)
    bool with_transport = true; // T_ijt = exp(tau d_ij), for Fujita fits
    std::uint64_t seed = 20240601;

    void validate() const;
};

/// Deterministic given the spec. Throws NumericalError if a year's wage fixed
/// point cannot be solved to 1e-12.
Panel generate(const SyntheticSpec& spec);

}  // namespace negeo::synthetic

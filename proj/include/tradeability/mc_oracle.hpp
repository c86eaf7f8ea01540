#pragma once

#include <cstdint>

#include "tradeability/levy_core.hpp"

namespace tradeability {

/// Simulation setup. Every path draws from its own substream derived from
/// (seed, path index), so estimates are bit-identical for a given config
/// regardless of batching.
struct SimConfig {
    std::int64_t n_paths = 100000;
    int n_steps_per_year = 50;  ///< only used where paths are needed (regression grid)
    std::uint64_t seed = 20180330;
    bool antithetic = true;
};

struct McEstimate {
    double estimate;
    double std_error;
};

/// Two-asset check of the measure reduction: simulate the asset as geometric
/// Brownian motion with drift phi_x1 and the project with correlated diffusion
/// plus Poisson jumps, both under the pricing measure, and average the
/// discounted exchange payoff e^{-rT} S_T (E_T - 1)^+.
McEstimate mc_two_asset_euro(double T, double s0, double e0, const ProjectModel& m,
                             const AssetAggregates& a, const SimConfig& cfg);

/// One-asset European value under the shifted measure, sampled from the exact
/// terminal law (lognormal conditional on the jump count). No time stepping.
McEstimate mc_single_asset_euro(double T, double e0, const EffectiveModel& em,
                                const SimConfig& cfg);

/// Longstaff-Schwartz lower-bound estimate of the American value. Exercise is
/// allowed on the step grid only; continuation values are regressed on
/// polynomials in the value level. Coefficients are fitted on a dedicated
/// first pass and applied to an independent second pass.
McEstimate mc_american_ls(double T, double e0, const EffectiveModel& em, const SimConfig& cfg,
                          int basis_degree = 3);

/// European value under an exponential horizon: T_R ~ Exp(vartheta) per path,
/// then one exact terminal draw.
McEstimate mc_randomized_euro(double vartheta, double e0, const EffectiveModel& em,
                              const SimConfig& cfg);

/// Sample mean and standard error of e^{-Phi^(1)(1) T} E_T / e0, which has
/// expectation 1 (compensated-exponential martingale check).
McEstimate mc_martingale_check(double T, double e0, const EffectiveModel& em,
                               const SimConfig& cfg);

}  // namespace tradeability

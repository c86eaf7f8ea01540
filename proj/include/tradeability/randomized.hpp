#pragma once

#include <limits>

#include "tradeability/levy_core.hpp"

namespace tradeability {

/// Semi-analytic solution of the exponential-horizon free-boundary problem.
/// Below the boundary the premium is c1_plus * x^gamma_plus; at and above it
/// the option is exercised immediately and the premium is x - 1 - C_E^R(x).
struct RandomizedSolution {
    enum class Regime { ZeroPremium, Standard };

    double vartheta = 0.0;
    double gamma_plus = 0.0;  ///< positive root of Phi^(1)(theta) = r_tilde + vartheta
    double c1_plus = 0.0;     ///< power-solution coefficient; 0 in the zero-premium regime
    double b_R = std::numeric_limits<double>::infinity();  ///< exercise boundary
    Regime regime = Regime::ZeroPremium;

    double value_matching_residual = 0.0;
    double smooth_pasting_residual = 0.0;
};

struct RandQuote {
    double price;
    double delta;
};

/// European switching value under an exponential horizon: the deterministic
/// price mixed against the Exp(vartheta) density, by Gauss-Legendre panels
/// with panel doubling to 1e-10 relative accuracy. The derivative integrates
/// the analytic series delta, never a difference quotient.
/// Requires the finite-value condition vartheta + r_tilde - Phi^(1)(1) > 0.
RandQuote euro_randomized(double x, double vartheta, const EffectiveModel& em);

/// Solve for the boundary and power coefficient. In the zero-premium regime
/// (r_tilde <= Phi^(1)(1)) returns immediately with a zero premium; otherwise
/// locates b_R by safeguarded Newton/bisection on the value-matching equation
/// and backs out c1_plus from the smooth-pasting slope.
RandomizedSolution solve_randomized(double vartheta, const EffectiveModel& em);

/// Absolute premium L^R*(x) from a solved boundary (piecewise form).
double premium_stoch(double x, const RandomizedSolution& sol, const EffectiveModel& em);

/// American value under the exponential horizon: euro_randomized + premium.
/// Equals the payoff exactly at and above the boundary.
double amer_randomized(double x, const RandomizedSolution& sol, const EffectiveModel& em);

}  // namespace tradeability

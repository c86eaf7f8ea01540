#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tradeability/errors.hpp"

namespace tradeability {

/// Jump-diffusion model of the project cash flow: log-dynamics with drift
/// b - lambda*(e^phi - 1) - sigma^2/2, diffusion volatility sigma and a
/// Poisson stream of log-jumps of fixed size phi <= 0 at intensity lambda.
/// b is the cash-flow growth rate (the Laplace exponent at 1).
struct ProjectModel {
    double b = 0.0;       ///< growth rate, per year
    double sigma = 0.2;   ///< diffusion volatility, per sqrt(year); > 0
    double phi = 0.0;     ///< log jump size; <= 0
    double lambda = 0.0;  ///< jump intensity, per year; >= 0
    double e0 = 1.0;      ///< initial project value per unit invested; > 0
};

/// Everything the traded asset contributes to a premium: its Laplace exponent
/// at 1, its diffusion volatility, the Brownian correlation with the project,
/// and the risk-free rate.
struct AssetAggregates {
    double phi_x1 = 0.005;  ///< asset growth rate Phi_X(1), per year; <= r
    double sigma_x = 0.2;   ///< asset volatility, per sqrt(year); >= 0
    double rho = 0.0;       ///< Brownian correlation, |rho| <= 1
    double r = 0.0225;      ///< risk-free rate, per year
};

/// Project dynamics after the measure change that absorbs the asset: the
/// drift picks up rho*sigma_x*sigma, the jump part is unchanged, and
/// discounting happens at the dividend-adjusted rate r_tilde = r - Phi_X(1).
struct EffectiveModel {
    double b_tilde;
    double sigma;
    double phi;
    double lambda;
    double r_tilde;

    /// Drift of the log-value process under the shifted measure.
    double log_drift() const { return b_tilde - lambda * std::expm1(phi) - 0.5 * sigma * sigma; }
};

/// Illiquidity horizon: either a fixed length T (years) or an exponentially
/// distributed time with arrival rate vartheta (per year).
struct HorizonSpec {
    enum class Kind { Deterministic, Exponential };
    Kind kind = Kind::Deterministic;
    double value = 1.0;  ///< T for Deterministic, vartheta for Exponential

    static HorizonSpec deterministic(double T) { return {Kind::Deterministic, T}; }
    static HorizonSpec exponential(double vartheta) { return {Kind::Exponential, vartheta}; }
};

/// Outcome of validate(): hard violations plus informational notes.
struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> notes;
    bool zero_premium = false;  ///< r_tilde <= Phi^(1)(1): American == European

    bool ok() const { return violations.empty(); }
};

/// Laplace exponent of the project's log-dynamics:
/// Phi(theta) = (b - lambda*(e^phi-1) - sigma^2/2)*theta + sigma^2*theta^2/2
///              + lambda*(e^(phi*theta) - 1).
/// Defined on the whole real line; Phi(1) == b.
double laplace_y(double theta, const ProjectModel& m);

/// Same exponent under the shifted measure (b replaced by b_tilde).
double laplace_y1(double theta, const EffectiveModel& em);

/// Build the effective one-asset model from project and asset parameters.
EffectiveModel esscher_shift(const ProjectModel& m, const AssetAggregates& a);

struct LaplaceRoots {
    double gamma_minus;  ///< negative root
    double gamma_plus;   ///< positive root
};

/// Solve laplace_y1(theta) == y for y > 0. The exponent is convex with
/// Phi(0) = 0 and grows at both ends, so there is exactly one root on each
/// side of zero. Brackets are found by doubling from +-1, refined by
/// bisection and polished with Newton steps to 1e-12 relative accuracy.
LaplaceRoots inverse_laplace_roots(double y, const EffectiveModel& em);

/// Expected net present value of a perpetual cash-flow stream growing at
/// rate b and discounted at r: c0 / (r - b). Throws if r <= b.
double project_value_from_cashflow(double c0, double r, double b);

/// Check a full scenario. Violations cover the type invariants, the
/// dividend admissibility Phi_X(1) <= r, the perpetuity condition b < r,
/// horizon positivity, and (for exponential horizons) the finite-value
/// condition vartheta + r_tilde - Phi^(1)(1) > 0. The degenerate regime
/// r_tilde <= Phi^(1)(1) is flagged as a note, not an error.
ValidationReport validate(const ProjectModel& m, const AssetAggregates& a, const HorizonSpec& h);

}  // namespace tradeability

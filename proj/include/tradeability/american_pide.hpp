#pragma once

#include <limits>
#include <vector>

#include "tradeability/levy_core.hpp"

namespace tradeability {

/// Finite-difference grid for the deterministic-horizon obstacle problem.
/// Space is uniform in log value with the strike snapped onto a node.
struct GridSpec {
    double x_min = std::exp(-8.0);
    double x_max = 0.0;  ///< 0 picks max(6, 3 * boundary estimate)
    int n_space = 800;
    int n_time = 0;      ///< 0 picks ceil(50 * T)

    enum class Scheme {
        ImexCrankNicolson,  ///< CN in the local part, lagged jump, projected direct solve
        FullyImplicitPsor,  ///< implicit Euler in the local part, lagged jump, PSOR
    };
    Scheme scheme = Scheme::ImexCrankNicolson;
};

/// Exercise boundary per remaining-maturity level; +infinity marks an empty
/// stopping set at that level.
struct BoundaryCurve {
    std::vector<double> tau;
    std::vector<double> level;

    static constexpr double kNoExercise = std::numeric_limits<double>::infinity();
};

/// Solved surfaces of the deterministic-horizon problem. `value` holds the
/// American option on the (time, space) grid; `premium` holds the difference
/// to a European companion solve run with the identical scheme, so that the
/// shared discretization error cancels.
struct AmericanSolution {
    std::vector<double> log_x;                 ///< spatial nodes (log value)
    std::vector<double> tau;                   ///< time levels, 0 .. T
    std::vector<std::vector<double>> value;    ///< [time][space] American value
    std::vector<std::vector<double>> premium;  ///< [time][space] American - European
    BoundaryCurve boundary;
    EffectiveModel model;
    GridSpec grid;
    double max_lcp_residual = 0.0;  ///< worst continuation-region step residual

    double x_at(std::size_t i) const { return std::exp(log_x[i]); }
    /// Index of the time level equal to t (within half a step), or -1.
    int level_index(double t) const;
    /// Cubic interpolation of the American value at remaining maturity tau[level].
    double value_at(int level, double x) const;
    /// Cubic interpolation of the premium at remaining maturity tau[level].
    double premium_at(int level, double x) const;
};

/// March the obstacle problem for the scaled American switching option from
/// the payoff at zero remaining maturity up to T. The jump part of the
/// generator is a single atom at log-shift phi, applied by linear
/// interpolation (values below the grid floor are taken as 0).
AmericanSolution solve_american(double T, const EffectiveModel& em, const GridSpec& g = {});

/// Extract the exercise boundary from a solved surface: per level, the lowest
/// node where the value meets the payoff within tol(x) = 1e-7 * (1 + x), with
/// an up-connectedness check above it. Throws if equality holds nowhere at
/// some level although the scenario is not in the zero-premium regime.
BoundaryCurve exercise_boundary(const AmericanSolution& sol);

/// Absolute tradeability premium L*(T, x). Exactly 0 in the zero-premium
/// regime; otherwise interpolated from the solved premium surface.
double premium_det(double T, double x, const EffectiveModel& em, const GridSpec& g = {});

/// Instantaneous benefit of waiting, H(x) = (A f - r_tilde f)(x) for the
/// payoff f(x) = (x-1)^+. Positive where holding earns carry, decreasing and
/// eventually negative when r_tilde exceeds the effective growth rate.
double instantaneous_benefit(double x, const EffectiveModel& em);

/// Default spatial ceiling: max(6, 3 * perpetual-boundary estimate).
double default_x_max(const EffectiveModel& em);

}  // namespace tradeability

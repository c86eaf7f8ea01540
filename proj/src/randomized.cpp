#include "tradeability/randomized.hpp"

#include <cmath>
#include <sstream>

#include "detail/gauss_legendre.hpp"
#include "tradeability/european.hpp"

namespace tradeability {

namespace {

void require_condinf(double vartheta, const EffectiveModel& em) {
    if (!(vartheta + em.r_tilde - em.b_tilde > 0.0)) {
        std::ostringstream os;
        os << "exponential-horizon value may be infinite: vartheta + r_tilde - Phi^(1)(1) = "
           << vartheta + em.r_tilde - em.b_tilde << " <= 0";
        throw AdmissibilityError(os.str());
    }
}

// integrand decay rate of vartheta*e^{-vt*t} * C_E*(t, x)
double integrand_decay(double vartheta, const EffectiveModel& em) {
    return std::min(vartheta, vartheta + em.r_tilde - em.b_tilde);
}

}  // namespace

RandQuote euro_randomized(double x, double vartheta, const EffectiveModel& em) {
    if (!(vartheta > 0.0)) throw AdmissibilityError("euro_randomized: vartheta must be positive");
    if (x < 0.0) throw AdmissibilityError("euro_randomized: x must be non-negative");
    require_condinf(vartheta, em);
    if (x == 0.0) return {0.0, 0.0};

    const double t_max = (40.0 + 23.0) / integrand_decay(vartheta, em);
    // substitute t = u^2: the short-maturity value behaves like sqrt(t) at the
    // money, which would otherwise stall the panel refinement near zero
    const double u_max = std::sqrt(t_max);
    bool conv_p = false, conv_d = false;
    const double price = detail::gl64_adaptive(
        [&](double u) {
            const double t = u * u;
            return 2.0 * u * vartheta * std::exp(-vartheta * t) * euro_price(t, x, em).price;
        },
        0.0, u_max, 1e-10, 12, &conv_p);
    const double delta = detail::gl64_adaptive(
        [&](double u) {
            const double t = u * u;
            return 2.0 * u * vartheta * std::exp(-vartheta * t) * euro_price(t, x, em).delta;
        },
        0.0, u_max, 1e-10, 12, &conv_d);
    if (!conv_p || !conv_d) {
        std::ostringstream os;
        os << "euro_randomized: quadrature did not converge on [0, " << t_max << "] at x=" << x;
        throw NumericsError(os.str());
    }
    return {price, delta};
}

RandomizedSolution solve_randomized(double vartheta, const EffectiveModel& em) {
    if (!(vartheta > 0.0)) throw AdmissibilityError("solve_randomized: vartheta must be positive");
    require_condinf(vartheta, em);

    RandomizedSolution sol;
    sol.vartheta = vartheta;
    sol.gamma_plus = inverse_laplace_roots(em.r_tilde + vartheta, em).gamma_plus;
    if (em.r_tilde <= em.b_tilde) {
        sol.regime = RandomizedSolution::Regime::ZeroPremium;
        return sol;
    }
    sol.regime = RandomizedSolution::Regime::Standard;

    const double gp = sol.gamma_plus;
    // value-matching equation in b, with the smooth-pasting slope substituted in
    const auto g = [&](double b) {
        const RandQuote q = euro_randomized(b, vartheta, em);
        return b - 1.0 - q.price - (b / gp) * (1.0 - q.delta);
    };

    double lo = 1.0 + 1e-6;
    double hi = 10.0;
    double g_lo = g(lo);
    double g_hi = g(hi);
    while (g_lo * g_hi > 0.0) {
        if (hi >= 1e4) {
            std::ostringstream os;
            os << "solve_randomized: no sign change on [" << lo << ", " << hi
               << "] (g(lo)=" << g_lo << ", g(hi)=" << g_hi << ")";
            throw NumericsError(os.str());
        }
        hi *= 2.0;
        g_hi = g(hi);
    }
    // bisection with secant-style acceleration, safeguarded by the bracket
    double b = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double g_mid = g(b);
        if (g_mid == 0.0) break;
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
            lo = b;
            g_lo = g_mid;
        } else {
            hi = b;
            g_hi = g_mid;
        }
        const double secant = lo - g_lo * (hi - lo) / (g_hi - g_lo);
        b = (secant > lo && secant < hi) ? secant : 0.5 * (lo + hi);
    }
    sol.b_R = b;

    const RandQuote at_b = euro_randomized(b, vartheta, em);
    sol.c1_plus = std::pow(b, 1.0 - gp) / gp * (1.0 - at_b.delta);
    sol.value_matching_residual =
        std::abs(sol.c1_plus * std::pow(b, gp) - (b - 1.0 - at_b.price));
    sol.smooth_pasting_residual =
        std::abs(gp * sol.c1_plus * std::pow(b, gp - 1.0) - (1.0 - at_b.delta));
    if (sol.value_matching_residual > 1e-8) {
        std::ostringstream os;
        os << "solve_randomized: value-matching residual " << sol.value_matching_residual
           << " above tolerance at b_R=" << b;
        throw NumericsError(os.str());
    }
    return sol;
}

double premium_stoch(double x, const RandomizedSolution& sol, const EffectiveModel& em) {
    if (x < 0.0) throw AdmissibilityError("premium_stoch: x must be non-negative");
    if (sol.regime == RandomizedSolution::Regime::ZeroPremium) return 0.0;
    if (x == 0.0) return 0.0;
    if (x < sol.b_R) return sol.c1_plus * std::pow(x, sol.gamma_plus);
    return x - 1.0 - euro_randomized(x, sol.vartheta, em).price;
}

double amer_randomized(double x, const RandomizedSolution& sol, const EffectiveModel& em) {
    if (sol.regime == RandomizedSolution::Regime::Standard && x >= sol.b_R)
        return std::max(x - 1.0, 0.0);
    return euro_randomized(x, sol.vartheta, em).price + premium_stoch(x, sol, em);
}

}  // namespace tradeability

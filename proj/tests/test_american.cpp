#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tradeability/american_pide.hpp"
#include "tradeability/european.hpp"

using namespace tradeability;

namespace {

EffectiveModel make_em(double b, double phi, double lambda, double rho, double sigma_x) {
    const ProjectModel m{b, 0.2, phi, lambda, 1.0};
    const AssetAggregates a{0.005, sigma_x, rho, 0.0225};
    return esscher_shift(m, a);
}

GridSpec coarse() {
    GridSpec g;
    g.n_space = 400;
    return g;
}

}  // namespace

TEST_CASE("initial condition is the payoff") {
    const EffectiveModel em = make_em(-0.04, std::log(0.85), 0.5, -0.5, 0.2);
    const AmericanSolution sol = solve_american(0.5, em, coarse());
    for (std::size_t i = 0; i < sol.log_x.size(); ++i) {
        const double x = std::exp(sol.log_x[i]);
        CHECK(sol.value[0][i] == doctest::Approx(std::max(x - 1.0, 0.0)).epsilon(1e-14));
    }
}

TEST_CASE("zero-premium regime collapses to the European value") {
    // b = 0, rho = 0.5: Phi^(1)(1) = 0.02 >= r_tilde = 0.0175
    const EffectiveModel em = make_em(0.0, std::log(0.85), 0.5, 0.5, 0.2);
    const AmericanSolution sol = solve_american(1.5, em, coarse());
    const int last = static_cast<int>(sol.tau.size()) - 1;
    for (double x : {0.8, 1.0, 1.25, 2.0}) {
        const double grid_val = sol.value_at(last, x);
        const double euro = euro_price(1.5, x, em).price;
        CHECK(grid_val == doctest::Approx(euro).epsilon(2e-3));
        CHECK(sol.premium_at(last, x) == 0.0);  // analytic zero in this regime
    }
    // empty stopping set at every positive level
    for (std::size_t k = 1; k < sol.boundary.level.size(); ++k)
        CHECK(std::isinf(sol.boundary.level[k]));
}

TEST_CASE("matches an independent binomial tree (no jumps)") {
    const EffectiveModel em = make_em(-0.04, 0.0, 0.0, -0.5, 0.2);
    const AmericanSolution sol = solve_american(1.5, em, {});
    const int last = static_cast<int>(sol.tau.size()) - 1;
    for (double x : {0.9, 1.0, 1.2}) {
        const double tree = oracles::crr_american_call(x, 1.5, em.sigma, em.r_tilde, em.b_tilde, 4000);
        CHECK(sol.value_at(last, x) == doctest::Approx(tree).epsilon(5e-4));
    }
}

TEST_CASE("factor spot value for the long-horizon no-jump scenario") {
    const EffectiveModel em = make_em(-0.04, 0.0, 0.0, -0.5, 0.2);
    const double prem = premium_det(5.0, 1.2, em, {});
    const double euro = euro_price(5.0, 1.2, em).price;
    CHECK(euro / (euro + prem) == doctest::Approx(0.515).epsilon(0.01));  // +-0.005 absolute
}

TEST_CASE("surface shape: monotonicity, convexity, Lipschitz bound") {
    const EffectiveModel em = make_em(-0.04, std::log(0.85), 0.5, -0.5, 0.2);
    REQUIRE(em.r_tilde >= em.b_tilde);
    const AmericanSolution sol = solve_american(2.0, em, coarse());
    const auto& y = sol.log_x;
    const std::size_t n = y.size();
    for (std::size_t k : {std::size_t(10), sol.value.size() - 1}) {
        const auto& u = sol.value[k];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dx = std::exp(y[i + 1]) - std::exp(y[i]);
            const double quot = (u[i + 1] - u[i]) / dx;
            CHECK(quot >= -1e-10);        // non-decreasing in x
            CHECK(quot <= 1.0 + 1e-8);    // contraction when r_tilde >= Phi^(1)(1)
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            // convexity in x via second divided differences
            const double x0 = std::exp(y[i - 1]), x1 = std::exp(y[i]), x2 = std::exp(y[i + 1]);
            const double dd =
                ((u[i + 1] - u[i]) / (x2 - x1) - (u[i] - u[i - 1]) / (x1 - x0)) / (x2 - x0);
            CHECK(2.0 * dd >= -1e-8);
        }
    }
    // non-decreasing in remaining maturity
    for (std::size_t k = 1; k < sol.value.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) CHECK(sol.value[k][i] >= sol.value[k - 1][i] - 1e-10);
    // premium never negative
    for (const auto& level : sol.premium)
        for (double p : level) CHECK(p >= -1e-10);
}

TEST_CASE("complementarity residual stays small in the continuation region") {
    const EffectiveModel em = make_em(-0.04, std::log(0.7), 0.5, -0.5, 0.4);
    const AmericanSolution sol = solve_american(1.0, em, coarse());
    CHECK(sol.max_lcp_residual <= 1e-8);
    GridSpec psor = coarse();
    psor.scheme = GridSpec::Scheme::FullyImplicitPsor;
    const AmericanSolution sol2 = solve_american(1.0, em, psor);
    CHECK(sol2.max_lcp_residual <= 1e-8);
}

TEST_CASE("the two schemes agree to discretization accuracy") {
    const EffectiveModel em = make_em(-0.04, 0.0, 0.0, -0.5, 0.2);
    GridSpec psor;
    psor.scheme = GridSpec::Scheme::FullyImplicitPsor;
    const AmericanSolution a = solve_american(1.0, em, {});
    const AmericanSolution b = solve_american(1.0, em, psor);
    const int last = static_cast<int>(a.tau.size()) - 1;
    for (double x : {0.9, 1.1, 1.3}) {
        CHECK(a.value_at(last, x) == doctest::Approx(b.value_at(last, x)).epsilon(2e-3));
    }
}

TEST_CASE("exercise boundary properties") {
    const EffectiveModel em = make_em(-0.04, std::log(0.85), 0.5, -0.5, 0.2);
    const AmericanSolution sol = solve_american(2.5, em, {});
    const BoundaryCurve curve = exercise_boundary(sol);
    REQUIRE(curve.level.size() == sol.tau.size());
    for (std::size_t k = 1; k < curve.level.size(); ++k) {
        const double b = curve.level[k];
        REQUIRE(std::isfinite(b));
        CHECK(b >= 1.0);
        // defining property: the value meets the payoff at the boundary node
        const double val = sol.value_at(static_cast<int>(k), b);
        CHECK(std::abs(val - (b - 1.0)) <= 1e-6 * (1.0 + b));
    }
}

TEST_CASE("smooth pasting holds to grid accuracy at the final level") {
    const EffectiveModel em = make_em(-0.04, 0.0, 0.0, -0.5, 0.2);
    const AmericanSolution sol = solve_american(2.5, em, {});
    const int last = static_cast<int>(sol.tau.size()) - 1;
    const double b = sol.boundary.level[last];
    REQUIRE(std::isfinite(b));
    const double dy = sol.log_x[1] - sol.log_x[0];
    // one-sided slope from below at the boundary node
    int bi = 0;
    while (std::exp(sol.log_x[bi]) < b - 1e-12) ++bi;
    const double dx = std::exp(sol.log_x[bi]) - std::exp(sol.log_x[bi - 1]);
    const double slope = (sol.value[last][bi] - sol.value[last][bi - 1]) / dx;
    CHECK(std::abs(slope - 1.0) <= 5.0 * dy);
}

TEST_CASE("instantaneous benefit of waiting") {
    const EffectiveModel em = make_em(-0.04, std::log(0.85), 0.5, -0.5, 0.2);
    SUBCASE("vanishes below the strike for downward jumps") {
        for (double x : {0.2, 0.7, 0.99}) CHECK(instantaneous_benefit(x, em) == 0.0);
    }
    SUBCASE("falls off linearly for large x") {
        const double h50 = instantaneous_benefit(50.0, em);
        const double h100 = instantaneous_benefit(100.0, em);
        CHECK(h50 < 0.0);
        CHECK(h100 < h50);
        // once x e^phi clears the strike the two jump terms cancel and the
        // slope settles at Phi^(1)(1) - r_tilde
        const double slope = (h100 - h50) / 50.0;
        CHECK(slope == doctest::Approx(em.b_tilde - em.r_tilde).epsilon(1e-10));
    }
    SUBCASE("non-positive at solved boundary nodes") {
        const AmericanSolution sol = solve_american(2.5, em, {});
        for (double t : {0.5, 1.5, 2.5}) {
            const int k = sol.level_index(t);
            REQUIRE(k >= 0);
            const double b = sol.boundary.level[k];
            REQUIRE(std::isfinite(b));
            CHECK(instantaneous_benefit(b, em) <= 1e-6);
        }
    }
}

TEST_CASE("premium_det edge cases") {
    const EffectiveModel zero_prem = make_em(0.0, 0.0, 0.0, 0.5, 0.2);
    for (double T : {0.5, 2.0}) CHECK(premium_det(T, 1.1, zero_prem, {}) == 0.0);
    const EffectiveModel em = make_em(-0.04, 0.0, 0.0, -0.5, 0.2);
    CHECK(premium_det(0.0, 1.1, em, {}) == 0.0);
}

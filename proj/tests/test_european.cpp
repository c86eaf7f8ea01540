#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tradeability/european.hpp"

using namespace tradeability;

namespace {

EffectiveModel make_em(double b, double phi, double lambda, double rho, double sigma_x) {
    const ProjectModel m{b, 0.2, phi, lambda, 1.0};
    const AssetAggregates a{0.005, sigma_x, rho, 0.0225};
    return esscher_shift(m, a);
}

}  // namespace

TEST_CASE("payoff limits and degenerate inputs") {
    const EffectiveModel em = make_em(-0.04, std::log(0.85), 0.5, -0.5, 0.2);
    CHECK(euro_price(0.0, 1.3, em).price == doctest::Approx(0.3));
    CHECK(euro_price(0.0, 0.7, em).price == 0.0);
    for (double tau : {0.25, 1.0, 4.0}) CHECK(euro_price(tau, 0.0, em).price == 0.0);
    CHECK_THROWS_AS(euro_price(-1.0, 1.0, em), AdmissibilityError);
}

TEST_CASE("no-jump series matches the independent lognormal formula") {
    const EffectiveModel em = make_em(0.0, 0.0, 0.0, 0.0, 0.2);  // b_tilde = 0
    const double ref = oracles::bs_call(1.0, 1.0, 0.2, 0.0175, 0.0);
    const EuroQuote q = euro_price(1.0, 1.0, em);
    CHECK(q.price == doctest::Approx(ref).epsilon(1e-12));
    CHECK(q.delta == doctest::Approx(oracles::bs_delta(1.0, 1.0, 0.2, 0.0175, 0.0)).epsilon(1e-12));
    // a couple of other points
    for (double x : {0.8, 1.15}) {
        for (double tau : {0.5, 3.0}) {
            CHECK(euro_price(tau, x, em).price ==
                  doctest::Approx(oracles::bs_call(x, tau, 0.2, 0.0175, 0.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("series and Fourier agree") {
    const double taus[] = {0.5, 1.5, 2.5, 5.0};
    const double xs[] = {0.9, 1.0, 1.1, 1.2};
    const double jumps[][2] = {{0.0, 0.0}, {std::log(0.85), 0.5}, {std::log(0.7), 0.5}};
    for (double b : {0.0, -0.04}) {
        for (const auto& jc : jumps) {
            const EffectiveModel em = make_em(b, jc[0], jc[1], -0.5, 0.2);
            for (double tau : taus) {
                for (double x : xs) {
                    const double ps = euro_price(tau, x, em).price;
                    const double pf = euro_price_fourier(tau, x, em).price;
                    CHECK(std::abs(pf - ps) <= 1e-6 * std::max(1e-12, std::abs(ps)));
                }
            }
        }
    }
}

TEST_CASE("Fourier price approaches the payoff as tau shrinks") {
    const EffectiveModel em = make_em(-0.04, std::log(0.85), 0.5, -0.5, 0.2);
    double prev_err = 1.0;
    for (double tau : {1e-2, 1e-3, 1e-4}) {
        const double p = euro_price_fourier(tau, 1.2, em).price;
        const double err = std::abs(p - 0.2);
        CHECK(err < prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err <= 1e-4);
    // decaying transform keeps the quadrature convergent at extreme maturities
    CHECK_NOTHROW(euro_price_fourier(10.0, 1.05, em));
    CHECK_NOTHROW(euro_price_fourier(1e-3, 0.9, em));
}

TEST_CASE("monotone, convex and inside the discounted-payoff bounds") {
    const EffectiveModel em = make_em(-0.04, std::log(0.7), 0.5, -0.5, 0.4);
    for (double tau : {0.5, 2.5}) {
        double prev = -1.0;
        std::vector<double> grid_vals;
        for (double x = 0.05; x <= 3.0; x += 0.05) {
            const double p = euro_price(tau, x, em).price;
            CHECK(p >= prev - 1e-12);  // non-decreasing
            prev = p;
            grid_vals.push_back(p);
            const double upper = x * std::exp(-(em.r_tilde - em.b_tilde) * tau);
            const double lower = std::max(0.0, upper - std::exp(-em.r_tilde * tau));
            CHECK(p >= lower - 1e-12);
            CHECK(p <= upper + 1e-12);
        }
        for (std::size_t i = 1; i + 1 < grid_vals.size(); ++i) {
            const double second = grid_vals[i - 1] - 2.0 * grid_vals[i] + grid_vals[i + 1];
            CHECK(second >= -1e-10);
        }
    }
}

TEST_CASE("delta matches a central difference and stays in its band") {
    const EffectiveModel em = make_em(0.0, std::log(0.85), 0.5, 0.5, 0.4);
    for (double tau : {0.5, 2.0}) {
        for (double x : {0.9, 1.0, 1.3}) {
            const double h = 1e-4;
            const double fd =
                (euro_price(tau, x + h, em).price - euro_price(tau, x - h, em).price) / (2.0 * h);
            const EuroQuote q = euro_price(tau, x, em);
            CHECK(std::abs(q.delta - fd) <= 1e-6);
            CHECK(q.delta >= 0.0);
            CHECK(q.delta <= std::exp(-(em.r_tilde - em.b_tilde) * tau) + 1e-12);
        }
    }
}

TEST_CASE("full price is linear in the asset leg") {
    const EffectiveModel em = make_em(-0.04, 0.0, 0.0, -0.5, 0.2);
    const double scaled = euro_price(1.5, 1.1, em).price;
    CHECK(full_euro_price(1.5, 0.0, 1.1, em) == 0.0);
    CHECK(full_euro_price(1.5, 1.0, 1.1, em) == doctest::Approx(scaled));
    CHECK(full_euro_price(1.5, 2.0, 1.1, em) == doctest::Approx(2.0 * scaled));
}

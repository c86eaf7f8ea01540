#pragma once

// Test-only reference implementations, kept independent of the library's
// pricing path: a plain Black-Scholes-style call on the project value and a
// binomial-tree American valuation.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracles {

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Discounted call on a lognormal value: E[e^{-r_tilde T} (E_T - 1)^+] where
/// E_T = e0 * exp((b_tilde - sigma^2/2) T + sigma sqrt(T) Z).
inline double bs_call(double e0, double T, double sigma, double r_tilde, double b_tilde) {
    if (T <= 0.0) return std::max(e0 - 1.0, 0.0);
    const double st = sigma * std::sqrt(T);
    const double d2 = (std::log(e0) + (b_tilde - 0.5 * sigma * sigma) * T) / st;
    const double d1 = d2 + st;
    return std::exp(-r_tilde * T) * (e0 * std::exp(b_tilde * T) * norm_cdf(d1) - norm_cdf(d2));
}

inline double bs_delta(double e0, double T, double sigma, double r_tilde, double b_tilde) {
    const double st = sigma * std::sqrt(T);
    const double d1 = (std::log(e0) + (b_tilde + 0.5 * sigma * sigma) * T) / st;
    return std::exp((b_tilde - r_tilde) * T) * norm_cdf(d1);
}

/// Binomial-tree American call on the same dynamics (no jumps), strike 1.
inline double crr_american_call(double e0, double T, double sigma, double r_tilde,
                                double b_tilde, int n_steps) {
    const double dt = T / n_steps;
    const double u = std::exp(sigma * std::sqrt(dt));
    const double d = 1.0 / u;
    const double growth = std::exp(b_tilde * dt);
    const double p = (growth - d) / (u - d);
    const double disc = std::exp(-r_tilde * dt);
    std::vector<double> v(n_steps + 1);
    for (int j = 0; j <= n_steps; ++j) {
        const double x = e0 * std::pow(u, j) * std::pow(d, n_steps - j);
        v[j] = std::max(x - 1.0, 0.0);
    }
    for (int step = n_steps; step >= 1; --step) {
        for (int j = 0; j < step; ++j) {
            const double x = e0 * std::pow(u, j) * std::pow(d, step - 1 - j);
            v[j] = std::max(disc * (p * v[j + 1] + (1.0 - p) * v[j]), x - 1.0);
        }
    }
    return v[0];
}

}  // namespace oracles

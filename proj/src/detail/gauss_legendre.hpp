#pragma once

#include <array>
#include <cmath>

namespace tradeability::detail {

// 64-point Gauss-Legendre rule on [-1, 1]. Nodes/weights are computed once by
// Newton iteration on the Legendre recurrence (accurate to machine precision).
struct GaussLegendre64 {
    std::array<double, 64> node{};
    std::array<double, 64> weight{};

    GaussLegendre64() {
        constexpr int n = 64;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            node[i] = -x;
            node[n - 1 - i] = x;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            weight[i] = w;
            weight[n - 1 - i] = w;
        }
    }
};

inline const GaussLegendre64& gl64() {
    static const GaussLegendre64 rule;
    return rule;
}

/// Integrate f over [a, b] with one 64-point panel.
template <class F>
double gl64_panel(F&& f, double a, double b) {
    const auto& rule = gl64();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 64; ++i) sum += rule.weight[i] * f(mid + half * rule.node[i]);
    return half * sum;
}

/// Integrate f over [a, b] by splitting into equal panels and doubling the
/// panel count until two successive refinements agree to `tol` (relative to
/// max(1, |value|)). Returns the refined value; sets *converged if given.
template <class F>
double gl64_adaptive(F&& f, double a, double b, double tol, int max_doublings,
                     bool* converged = nullptr) {
    int panels = 1;
    double prev = gl64_panel(f, a, b);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        double sum = 0.0;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) sum += gl64_panel(f, a + p * h, a + (p + 1) * h);
        if (std::abs(sum - prev) <= tol * std::max(1.0, std::abs(sum))) {
            if (converged) *converged = true;
            return sum;
        }
        prev = sum;
    }
    if (converged) *converged = false;
    return prev;
}

}  // namespace tradeability::detail

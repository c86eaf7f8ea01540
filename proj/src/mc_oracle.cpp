#include "tradeability/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

namespace tradeability {

namespace {

// splitmix64: documented substream derivation, one generator per path
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::int64_t path) {
    std::uint64_t s = seed ^ (0x51u + static_cast<std::uint64_t>(path) * 0x100000001b3ull);
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    McEstimate finish() const {
        const double mean = sum / n;
        const double var = std::max(sum_sq / n - mean * mean, 0.0);
        return {mean, std::sqrt(var / n)};
    }
};

// Exact one-shot draw of log E_T / e0 under the effective model.
double draw_terminal_log(double T, const EffectiveModel& em, std::mt19937_64& rng,
                         double z_sign) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double z = z_sign * normal(rng);
    int jumps = 0;
    if (em.lambda > 0.0) {
        std::poisson_distribution<int> pois(em.lambda * T);
        jumps = pois(rng);
    }
    return em.log_drift() * T + em.sigma * std::sqrt(T) * z + em.phi * jumps;
}

}  // namespace

McEstimate mc_two_asset_euro(double T, double s0, double e0, const ProjectModel& m,
                             const AssetAggregates& a, const SimConfig& cfg) {
    const double mu_y = m.b - m.lambda * std::expm1(m.phi) - 0.5 * m.sigma * m.sigma;
    const double mu_x = a.phi_x1 - 0.5 * a.sigma_x * a.sigma_x;
    const double rho_c = std::sqrt(std::max(1.0 - a.rho * a.rho, 0.0));
    Accumulator acc;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        auto rng = path_rng(cfg.seed, p);
        const double z1 = normal(rng);
        const double z2 = normal(rng);
        int jumps = 0;
        if (m.lambda > 0.0) {
            std::poisson_distribution<int> pois(m.lambda * T);
            jumps = pois(rng);
        }
        const int reps = cfg.antithetic ? 2 : 1;
        double payoff = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            const double sgn = rep == 0 ? 1.0 : -1.0;
            const double zx = sgn * z1;
            const double zy = a.rho * zx + rho_c * sgn * z2;
            const double sT = s0 * std::exp(mu_x * T + a.sigma_x * std::sqrt(T) * zx);
            const double eT =
                e0 * std::exp(mu_y * T + m.sigma * std::sqrt(T) * zy + m.phi * jumps);
            payoff += std::exp(-a.r * T) * sT * std::max(eT - 1.0, 0.0);
        }
        acc.add(payoff / reps);
    }
    return acc.finish();
}

McEstimate mc_single_asset_euro(double T, double e0, const EffectiveModel& em,
                                const SimConfig& cfg) {
    if (T == 0.0) return {std::max(e0 - 1.0, 0.0), 0.0};
    Accumulator acc;
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        auto rng = path_rng(cfg.seed, p);
        std::normal_distribution<double> normal(0.0, 1.0);
        const double z = normal(rng);
        int jumps = 0;
        if (em.lambda > 0.0) {
            std::poisson_distribution<int> pois(em.lambda * T);
            jumps = pois(rng);
        }
        const int reps = cfg.antithetic ? 2 : 1;
        double payoff = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            const double sgn = rep == 0 ? 1.0 : -1.0;
            const double log_growth =
                em.log_drift() * T + em.sigma * std::sqrt(T) * sgn * z + em.phi * jumps;
            payoff += std::exp(-em.r_tilde * T) * std::max(e0 * std::exp(log_growth) - 1.0, 0.0);
        }
        acc.add(payoff / reps);
    }
    return acc.finish();
}

McEstimate mc_martingale_check(double T, double e0, const EffectiveModel& em,
                               const SimConfig& cfg) {
    Accumulator acc;
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        auto rng = path_rng(cfg.seed, p);
        const double lg = draw_terminal_log(T, em, rng, 1.0);
        acc.add(std::exp(lg - em.b_tilde * T));
        (void)e0;
    }
    return acc.finish();
}

McEstimate mc_randomized_euro(double vartheta, double e0, const EffectiveModel& em,
                              const SimConfig& cfg) {
    Accumulator acc;
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        auto rng = path_rng(cfg.seed, p);
        std::exponential_distribution<double> horizon(vartheta);
        const double tR = horizon(rng);
        const double lg = draw_terminal_log(tR, em, rng, 1.0);
        acc.add(std::exp(-em.r_tilde * tR) * std::max(e0 * std::exp(lg) - 1.0, 0.0));
    }
    return acc.finish();
}

McEstimate mc_american_ls(double T, double e0, const EffectiveModel& em, const SimConfig& cfg,
                          int basis_degree) {
    if (basis_degree < 2) throw AdmissibilityError("mc_american_ls: basis_degree must be >= 2");
    const int n_steps = std::max(1, static_cast<int>(std::lround(cfg.n_steps_per_year * T)));
    const double dt = T / n_steps;
    const double disc = std::exp(-em.r_tilde * dt);
    const double mu_dt = em.log_drift() * dt;
    const double vol_dt = em.sigma * std::sqrt(dt);

    const auto simulate = [&](std::uint64_t seed_offset, std::vector<std::vector<double>>& paths) {
        paths.assign(n_steps + 1, std::vector<double>(cfg.n_paths));
        for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
            auto rng = path_rng(cfg.seed + seed_offset, p);
            std::normal_distribution<double> normal(0.0, 1.0);
            double lx = std::log(e0);
            paths[0][p] = e0;
            for (int k = 1; k <= n_steps; ++k) {
                int jumps = 0;
                if (em.lambda > 0.0) {
                    std::poisson_distribution<int> pois(em.lambda * dt);
                    jumps = pois(rng);
                }
                lx += mu_dt + vol_dt * normal(rng) + em.phi * jumps;
                paths[k][p] = std::exp(lx);
            }
        }
    };

    // Pass 1: fit per-step continuation regressions on in-the-money paths.
    std::vector<std::vector<double>> paths;
    simulate(0x5a5a5a5a, paths);
    const int n_basis = basis_degree + 1;
    std::vector<std::vector<double>> coeffs(n_steps, std::vector<double>(n_basis, 0.0));
    std::vector<char> has_fit(n_steps, 0);
    std::vector<int> fit_degree(n_steps, basis_degree);
    std::vector<double> cash(cfg.n_paths);
    for (std::int64_t p = 0; p < cfg.n_paths; ++p)
        cash[p] = std::max(paths[n_steps][p] - 1.0, 0.0);
    int degree = basis_degree;
    for (int k = n_steps - 1; k >= 1; --k) {
        for (std::int64_t p = 0; p < cfg.n_paths; ++p) cash[p] *= disc;
        // normal equations on (1, x, x^2, ...) over in-the-money paths
        std::vector<std::int64_t> itm;
        for (std::int64_t p = 0; p < cfg.n_paths; ++p)
            if (paths[k][p] > 1.0) itm.push_back(p);
        if (itm.size() < static_cast<std::size_t>(4 * n_basis)) continue;
        for (;;) {
            const int nb = degree + 1;
            std::vector<double> ata(nb * nb, 0.0), atb(nb, 0.0);
            for (std::int64_t p : itm) {
                double pow_cache[16];
                double xp = 1.0;
                for (int i = 0; i < nb; ++i) {
                    pow_cache[i] = xp;
                    xp *= paths[k][p];
                }
                for (int i = 0; i < nb; ++i) {
                    atb[i] += pow_cache[i] * cash[p];
                    for (int j = i; j < nb; ++j) ata[i * nb + j] += pow_cache[i] * pow_cache[j];
                }
            }
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < i; ++j) ata[i * nb + j] = ata[j * nb + i];
            // Cholesky; a failure means rank deficiency -> drop the degree
            std::vector<double> chol = ata;
            bool ok = true;
            for (int i = 0; i < nb && ok; ++i) {
                for (int j = 0; j <= i; ++j) {
                    double s = chol[i * nb + j];
                    for (int t = 0; t < j; ++t) s -= chol[i * nb + t] * chol[j * nb + t];
                    if (i == j) {
                        if (s <= 1e-13 * std::max(1.0, ata[i * nb + i])) {
                            ok = false;
                            break;
                        }
                        chol[i * nb + i] = std::sqrt(s);
                    } else {
                        chol[i * nb + j] = s / chol[j * nb + j];
                    }
                }
            }
            if (!ok) {
                if (degree <= 2)
                    throw NumericsError("mc_american_ls: regression rank-deficient at degree 2");
                --degree;  // retry with a smaller basis
                std::fprintf(stderr,
                             "mc_american_ls: rank-deficient regression, degree reduced to %d\n",
                             degree);
                continue;
            }
            std::vector<double> y(nb);
            for (int i = 0; i < nb; ++i) {
                double s = atb[i];
                for (int t = 0; t < i; ++t) s -= chol[i * nb + t] * y[t];
                y[i] = s / chol[i * nb + i];
            }
            for (int i = nb - 1; i >= 0; --i) {
                double s = y[i];
                for (int t = i + 1; t < nb; ++t) s -= chol[t * nb + i] * coeffs[k][t];
                coeffs[k][i] = s / chol[i * nb + i];
            }
            has_fit[k] = 1;
            fit_degree[k] = degree;
            break;
        }
        // update pass-1 cashflows with the fitted rule (standard backward recursion)
        if (!has_fit[k]) continue;
        for (std::int64_t p : itm) {
            const double exercise = paths[k][p] - 1.0;
            double cont = 0.0, xp = 1.0;
            for (int i = 0; i <= fit_degree[k]; ++i) {
                cont += coeffs[k][i] * xp;
                xp *= paths[k][p];
            }
            if (exercise > cont) cash[p] = exercise;
        }
    }

    // Pass 2: value the fitted rule on independent paths (keeps the low bias).
    simulate(0xa7a7a7a7, paths);
    Accumulator acc;
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        double value = 0.0;
        bool exercised = false;
        for (int k = 1; k <= n_steps && !exercised; ++k) {
            const double x = paths[k][p];
            const double exercise = x - 1.0;
            if (k == n_steps) {
                value = std::exp(-em.r_tilde * k * dt) * std::max(exercise, 0.0);
                break;
            }
            if (x <= 1.0 || !has_fit[k]) continue;
            double cont = 0.0, xp = 1.0;
            for (int i = 0; i <= fit_degree[k]; ++i) {
                cont += coeffs[k][i] * xp;
                xp *= x;
            }
            if (exercise > cont) {
                value = std::exp(-em.r_tilde * k * dt) * exercise;
                exercised = true;
            }
        }
        acc.add(value);
    }
    return acc.finish();
}

}  // namespace tradeability

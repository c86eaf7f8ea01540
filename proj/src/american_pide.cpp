#include "tradeability/american_pide.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tradeability/european.hpp"

namespace tradeability {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double boundary_tol(double x) { return 1e-7 * (1.0 + x); }

struct Workspace {
    // tridiagonal coefficients of the local generator L (constant on the grid):
    // L u = a u_{i-1} + b u_i + c u_{i+1}, including discount and jump compensator
    double a, b, c;
    double dy, dt;
    int n;  // highest node index
    std::vector<double> y, x, payoff;
    std::vector<int> jump_idx;      // lower node of the interpolation for y + phi
    std::vector<double> jump_w;     // weight on the upper node
    std::vector<char> jump_below;   // target fell below the grid floor
    double lambda;

    std::vector<double> jump_term(const std::vector<double>& u) const {
        std::vector<double> j(u.size(), 0.0);
        if (lambda == 0.0) return j;
        for (int i = 0; i <= n; ++i) {
            if (jump_below[i]) continue;
            const int k = jump_idx[i];
            j[i] = lambda * ((1.0 - jump_w[i]) * u[k] + jump_w[i] * u[k + 1]);
        }
        return j;
    }
};

Workspace make_workspace(const EffectiveModel& em, const GridSpec& g, double T, int n_time) {
    Workspace w;
    const double x_max = g.x_max > 0.0 ? g.x_max : default_x_max(em);
    double y_min = std::log(g.x_min);
    const double y_max = std::log(x_max);
    w.n = g.n_space;
    w.dy = (y_max - y_min) / w.n;
    // snap the strike (log value 0) onto a node
    const long k0 = std::lround(-y_min / w.dy);
    y_min = -static_cast<double>(k0) * w.dy;
    w.dt = T / n_time;
    w.y.resize(w.n + 1);
    w.x.resize(w.n + 1);
    w.payoff.resize(w.n + 1);
    for (int i = 0; i <= w.n; ++i) {
        w.y[i] = y_min + i * w.dy;
        w.x[i] = std::exp(w.y[i]);
        w.payoff[i] = std::max(w.x[i] - 1.0, 0.0);
    }
    const double s2 = em.sigma * em.sigma;
    const double mu = em.log_drift();
    w.a = 0.5 * s2 / (w.dy * w.dy) - 0.5 * mu / w.dy;
    w.b = -s2 / (w.dy * w.dy) - (em.r_tilde + em.lambda);
    w.c = 0.5 * s2 / (w.dy * w.dy) + 0.5 * mu / w.dy;
    w.lambda = em.lambda;
    w.jump_idx.assign(w.n + 1, 0);
    w.jump_w.assign(w.n + 1, 0.0);
    w.jump_below.assign(w.n + 1, 0);
    for (int i = 0; i <= w.n; ++i) {
        const double yj = w.y[i] + em.phi;
        if (yj < y_min) {
            w.jump_below[i] = 1;
            continue;
        }
        int k = static_cast<int>(std::floor((yj - y_min) / w.dy));
        k = std::clamp(k, 0, w.n - 1);
        w.jump_idx[i] = k;
        w.jump_w[i] = (yj - w.y[k]) / w.dy;
    }
    return w;
}

// L applied to the interior of u (local part only; jump handled separately).
std::vector<double> apply_local(const Workspace& w, const std::vector<double>& u) {
    std::vector<double> lu(u.size(), 0.0);
    for (int i = 1; i < w.n; ++i) lu[i] = w.a * u[i - 1] + w.b * u[i] + w.c * u[i + 1];
    return lu;
}

// Direct solve of (I - th*dt*L) u = rhs with Dirichlet ends, optionally with
// the payoff obstacle. For the obstacle the sub-diagonal is eliminated bottom
// up and the projection is applied while substituting top down, which is the
// exact complementarity solution when the exercise set is up-connected.
void solve_tridiag(const Workspace& w, double th, double ddt, std::vector<double> rhs,
                   double lo_bc, double hi_bc, const std::vector<double>* obstacle,
                   std::vector<double>& out) {
    const int n = w.n;
    const double A = -th * ddt * w.a;
    const double B = 1.0 - th * ddt * w.b;
    const double C = -th * ddt * w.c;
    std::vector<double> diag(n + 1, B);
    diag[0] = 1.0;
    diag[n] = 1.0;
    rhs[0] = lo_bc;
    rhs[n] = hi_bc;
    // eliminate the sub-diagonal from the bottom
    {
        // row 1 couples to row 0 (identity)
        double f = A / diag[0];
        rhs[1] -= f * rhs[0];
        for (int i = 2; i < n; ++i) {
            f = A / diag[i - 1];
            diag[i] -= f * C;
            rhs[i] -= f * rhs[i - 1];
        }
        // top row is identity; nothing to eliminate
    }
    out.resize(n + 1);
    out[n] = rhs[n];
    for (int i = n - 1; i >= 1; --i) {
        out[i] = (rhs[i] - C * out[i + 1]) / diag[i];
        if (obstacle) out[i] = std::max(out[i], (*obstacle)[i]);
    }
    out[0] = rhs[0];
}

// Projected SOR on the same system; enforces the complementarity conditions
// to the iteration tolerance regardless of the shape of the exercise set.
void solve_psor(const Workspace& w, double th, double ddt, const std::vector<double>& rhs_in,
                double lo_bc, double hi_bc, const std::vector<double>* obstacle,
                std::vector<double>& u) {
    const int n = w.n;
    const double A = -th * ddt * w.a;
    const double B = 1.0 - th * ddt * w.b;
    const double C = -th * ddt * w.c;
    std::vector<double> rhs = rhs_in;
    u[0] = lo_bc;
    u[n] = hi_bc;
    const double omega = 1.5;
    const int max_iter = 20000;
    int it = 0;
    for (; it < max_iter; ++it) {
        double worst = 0.0;
        for (int i = 1; i < n; ++i) {
            const double resid = rhs[i] - A * u[i - 1] - B * u[i] - C * u[i + 1];
            double next = u[i] + omega * resid / B;
            if (obstacle) next = std::max(next, (*obstacle)[i]);
            worst = std::max(worst, std::abs(next - u[i]));
            u[i] = next;
        }
        if (worst < 1e-12) return;
    }
    std::ostringstream os;
    os << "PSOR did not converge within " << max_iter << " iterations";
    throw NumericsError(os.str());
}

// residual of the implicit system at non-binding nodes, relative to scale
double continuation_residual(const Workspace& w, double th, double ddt,
                             const std::vector<double>& rhs, const std::vector<double>& u,
                             const std::vector<double>* obstacle) {
    const double A = -th * ddt * w.a;
    const double B = 1.0 - th * ddt * w.b;
    const double C = -th * ddt * w.c;
    double worst = 0.0;
    for (int i = 1; i < w.n; ++i) {
        if (obstacle && u[i] <= (*obstacle)[i] + boundary_tol(w.x[i])) continue;
        const double r = rhs[i] - A * u[i - 1] - B * u[i] - C * u[i + 1];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

struct MarchResult {
    std::vector<std::vector<double>> levels;
    double max_residual = 0.0;
};

// Time march shared by the American (with obstacle) and the European
// companion (without). Rannacher start: the first two steps are taken as
// four fully implicit half-steps to damp the payoff kink, then the scheme's
// theta weighting applies. The jump atom is lagged and corrected once per
// step against the midpoint average, keeping the local part tridiagonal.
MarchResult march(const Workspace& w, const EffectiveModel& em, const GridSpec& g, int n_time,
                  bool with_obstacle) {
    const bool psor = g.scheme == GridSpec::Scheme::FullyImplicitPsor;
    const double theta = psor ? 1.0 : 0.5;
    const bool zero_prem = em.r_tilde <= em.b_tilde;
    const bool euro_top = !with_obstacle || zero_prem;

    MarchResult res;
    res.levels.reserve(n_time + 1);
    std::vector<double> u = w.payoff;
    res.levels.push_back(u);

    const auto top_bc = [&](double t) {
        const double xm = w.x[w.n];
        // exercise value in premium-positive regimes, European asymptote otherwise
        return euro_top ? xm * std::exp(-(em.r_tilde - em.b_tilde) * t) - std::exp(-em.r_tilde * t)
                        : xm - 1.0;
    };
    const std::vector<double>* obstacle = with_obstacle ? &w.payoff : nullptr;

    double t = 0.0;
    std::vector<double> u_new = u;
    const int rannacher_steps = std::min(2, n_time);
    for (int step = 1; step <= n_time; ++step) {
        const bool implicit_start = step <= rannacher_steps;
        const int substeps = implicit_start ? 2 : 1;
        const double th = implicit_start ? 1.0 : theta;
        for (int sub = 0; sub < substeps; ++sub) {
            const double ddt = w.dt / substeps;
            t += ddt;
            const double hi = top_bc(t);
            const std::vector<double> lu = apply_local(w, u);
            std::vector<double> jt = w.jump_term(u);
            std::vector<double> rhs(w.n + 1);
            for (int i = 1; i < w.n; ++i)
                rhs[i] = u[i] + (1.0 - th) * ddt * lu[i] + ddt * jt[i];
            if (psor) {
                u_new = u;
                solve_psor(w, th, ddt, rhs, 0.0, hi, obstacle, u_new);
            } else {
                solve_tridiag(w, th, ddt, rhs, 0.0, hi, obstacle, u_new);
            }
            if (w.lambda > 0.0) {
                // correct the lagged atom against the step midpoint
                std::vector<double> mid(w.n + 1);
                for (int i = 0; i <= w.n; ++i) mid[i] = 0.5 * (u[i] + u_new[i]);
                jt = w.jump_term(mid);
                for (int i = 1; i < w.n; ++i)
                    rhs[i] = u[i] + (1.0 - th) * ddt * lu[i] + ddt * jt[i];
                if (psor) {
                    solve_psor(w, th, ddt, rhs, 0.0, hi, obstacle, u_new);
                } else {
                    solve_tridiag(w, th, ddt, rhs, 0.0, hi, obstacle, u_new);
                }
            }
            res.max_residual = std::max(
                res.max_residual, continuation_residual(w, th, ddt, rhs, u_new, obstacle));
            u = u_new;
        }
        res.levels.push_back(u);
    }
    return res;
}

}  // namespace

double default_x_max(const EffectiveModel& em) {
    double estimate = 0.0;
    if (em.r_tilde > em.b_tilde && em.r_tilde > 0.0) {
        const double gp = inverse_laplace_roots(em.r_tilde, em).gamma_plus;
        if (gp > 1.0 + 1e-9) estimate = std::min(gp / (gp - 1.0), 50.0);
    }
    return std::max(6.0, 3.0 * estimate);
}

int AmericanSolution::level_index(double t) const {
    if (tau.empty()) return -1;
    const double dt = tau.size() > 1 ? tau[1] - tau[0] : 1.0;
    for (std::size_t k = 0; k < tau.size(); ++k)
        if (std::abs(tau[k] - t) <= 0.5 * dt * 1e-6 + 1e-12) return static_cast<int>(k);
    return -1;
}

namespace {
double cubic_interp(const std::vector<double>& ys, const std::vector<double>& vals, double yq) {
    const int n = static_cast<int>(ys.size()) - 1;
    const double dy = ys[1] - ys[0];
    int i = static_cast<int>(std::floor((yq - ys[0]) / dy));
    i = std::clamp(i, 1, n - 2);
    double out = 0.0;
    for (int a = i - 1; a <= i + 2; ++a) {
        double l = 1.0;
        for (int b = i - 1; b <= i + 2; ++b)
            if (b != a) l *= (yq - ys[b]) / (ys[a] - ys[b]);
        out += vals[a] * l;
    }
    return out;
}
}  // namespace

double AmericanSolution::value_at(int level, double x) const {
    return cubic_interp(log_x, value[level], std::log(x));
}

double AmericanSolution::premium_at(int level, double x) const {
    return cubic_interp(log_x, premium[level], std::log(x));
}

AmericanSolution solve_american(double T, const EffectiveModel& em, const GridSpec& g) {
    if (!(T > 0.0)) throw AdmissibilityError("solve_american: T must be positive");
    if (g.n_space < 3 || (g.n_time < 0))
        throw AdmissibilityError("solve_american: grid must have n_space >= 3, n_time >= 1");
    if (!(g.x_min > 0.0 && g.x_min < 1.0) || (g.x_max > 0.0 && g.x_max <= 1.0))
        throw AdmissibilityError("solve_american: grid must straddle the strike, x_min < 1 < x_max");
    const int n_time = g.n_time > 0 ? g.n_time : std::max(1, (int)std::ceil(50.0 * T));

    const Workspace w = make_workspace(em, g, T, n_time);
    MarchResult amer = march(w, em, g, n_time, true);
    MarchResult euro = march(w, em, g, n_time, false);

    AmericanSolution sol;
    sol.log_x = w.y;
    sol.tau.resize(n_time + 1);
    for (int k = 0; k <= n_time; ++k) sol.tau[k] = k * w.dt;
    sol.value = std::move(amer.levels);
    sol.premium.resize(sol.value.size());
    const bool zero_prem = em.r_tilde <= em.b_tilde;
    for (std::size_t k = 0; k < sol.value.size(); ++k) {
        sol.premium[k].resize(w.n + 1);
        for (int i = 0; i <= w.n; ++i)
            sol.premium[k][i] = zero_prem ? 0.0 : sol.value[k][i] - euro.levels[k][i];
    }
    sol.model = em;
    sol.grid = g;
    sol.grid.n_time = n_time;
    if (sol.grid.x_max <= 0.0) sol.grid.x_max = std::exp(w.y[w.n]);
    sol.max_lcp_residual = amer.max_residual;
    sol.boundary = exercise_boundary(sol);
    return sol;
}

BoundaryCurve exercise_boundary(const AmericanSolution& sol) {
    BoundaryCurve curve;
    curve.tau = sol.tau;
    curve.level.assign(sol.tau.size(), BoundaryCurve::kNoExercise);
    const bool zero_prem = sol.model.r_tilde <= sol.model.b_tilde;
    const int n = static_cast<int>(sol.log_x.size()) - 1;
    // The boundary lives above the strike: below x = 1 the payoff vanishes and
    // deep out-of-the-money nodes meet it trivially.
    int strike_node = 0;
    while (strike_node <= n && sol.log_x[strike_node] <= 0.0) ++strike_node;
    for (std::size_t k = 0; k < sol.tau.size(); ++k) {
        const auto& u = sol.value[k];
        int first = -1;
        for (int i = strike_node; i < n; ++i) {
            const double x = std::exp(sol.log_x[i]);
            if (std::abs(u[i] - std::max(x - 1.0, 0.0)) <= boundary_tol(x)) {
                first = i;
                break;
            }
        }
        if (first < 0) {
            if (!zero_prem && k > 0) {
                std::ostringstream os;
                os << "exercise_boundary: no exercise node at tau=" << sol.tau[k]
                   << " outside the zero-premium regime";
                throw NumericsError(os.str());
            }
            continue;  // empty stopping set
        }
        // up-connectedness: everything above must sit on the payoff as well
        for (int i = first; i < n; ++i) {
            const double x = std::exp(sol.log_x[i]);
            if (std::abs(u[i] - std::max(x - 1.0, 0.0)) > boundary_tol(x)) {
                std::ostringstream os;
                os << "exercise_boundary: stopping set not up-connected at tau=" << sol.tau[k]
                   << ", node x=" << x;
                throw NumericsError(os.str());
            }
        }
        curve.level[k] = std::exp(sol.log_x[first]);
    }
    return curve;
}

double premium_det(double T, double x, const EffectiveModel& em, const GridSpec& g) {
    if (em.r_tilde <= em.b_tilde) return 0.0;
    if (T == 0.0) return 0.0;
    const AmericanSolution sol = solve_american(T, em, g);
    const int level = static_cast<int>(sol.tau.size()) - 1;
    return std::max(sol.premium_at(level, x), 0.0);
}

double instantaneous_benefit(double x, const EffectiveModel& em) {
    if (!(x > 0.0)) throw AdmissibilityError("instantaneous_benefit: x must be positive");
    const auto f = [](double v) { return std::max(v - 1.0, 0.0); };
    double h = em.lambda * (f(x * std::exp(em.phi)) - f(x));
    if (x >= 1.0)
        h += em.b_tilde * x - em.r_tilde * (x - 1.0) - em.lambda * std::expm1(em.phi) * x;
    return h;
}

}  // namespace tradeability

#include "tradeability/premium.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "tradeability/european.hpp"

namespace tradeability {

namespace {

ProjectModel with_overrides(const ScenarioGrid& grid, double phi, double lambda, double e0) {
    ProjectModel m;
    m.b = grid.b;
    m.sigma = grid.sigma;
    m.phi = phi;
    m.lambda = lambda;
    m.e0 = e0;
    return m;
}

AssetAggregates asset_of(const ScenarioGrid& grid, double sigma_x, double rho) {
    AssetAggregates a;
    a.phi_x1 = grid.phi_x1;
    a.sigma_x = sigma_x;
    a.rho = rho;
    a.r = grid.r;
    return a;
}

double factor_from_parts(double euro, double premium) {
    if (!(euro > 0.0))
        throw NumericsError("illiquidity factor undefined: European value is zero");
    return euro / (euro + std::max(premium, 0.0));
}

std::string format_horizon(const HorizonSpec& h) {
    std::ostringstream os;
    os << (h.kind == HorizonSpec::Kind::Deterministic ? "T=" : "vartheta=") << h.value;
    return os.str();
}

}  // namespace

double illiquidity_factor_det(double T, double e0, const ProjectModel& m,
                              const AssetAggregates& a, const GridSpec& g) {
    const EffectiveModel em = esscher_shift(m, a);
    if (em.r_tilde <= em.b_tilde) return 1.0;
    const AmericanSolution sol = solve_american(T, em, g);
    const int level = static_cast<int>(sol.tau.size()) - 1;
    const double euro = euro_price(T, e0, em).price;
    return factor_from_parts(euro, sol.premium_at(level, e0));
}

double illiquidity_factor_stoch(double vartheta, double e0, const ProjectModel& m,
                                const AssetAggregates& a) {
    const EffectiveModel em = esscher_shift(m, a);
    if (em.r_tilde <= em.b_tilde) {
        // the finite-value condition still has to hold for the factor to exist
        if (!(vartheta + em.r_tilde - em.b_tilde > 0.0))
            throw AdmissibilityError("illiquidity_factor_stoch: finite-value condition violated");
        return 1.0;
    }
    const RandomizedSolution sol = solve_randomized(vartheta, em);
    const double euro = euro_randomized(e0, vartheta, em).price;
    return factor_from_parts(euro, premium_stoch(e0, sol, em));
}

FactorTable generate_table(const ScenarioGrid& grid, HorizonSpec::Kind kind, int jobs) {
    for (const HorizonSpec& h : grid.horizons)
        if (h.kind != kind)
            throw AdmissibilityError("generate_table: horizon kind mismatch in the grid");
    FactorTable table;
    for (double sx : grid.sigma_x_list)
        for (const HorizonSpec& h : grid.horizons)
            for (double e0 : grid.e0_list)
                table.rows.push_back({sx, h, e0});
    for (const auto& [phi, lambda] : grid.jump_cases)
        for (double rho : grid.rho_list) table.cols.push_back({phi, lambda, rho});

    const std::size_t n_rows = table.rows.size(), n_cols = table.cols.size();
    table.values.assign(n_rows, std::vector<double>(n_cols, std::nan("")));
    table.zero_premium.assign(n_rows, std::vector<std::uint8_t>(n_cols, 0));

    // Work units share the expensive solve across the E0 rows of one block:
    // the solved surface (or boundary) is a pure function of the column
    // parameters, sigma_x and the horizon, never of E0.
    struct Task {
        std::size_t col;
        double sigma_x;
        HorizonSpec horizon;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < n_cols; ++c)
        for (double sx : grid.sigma_x_list)
            for (const HorizonSpec& h : grid.horizons) tasks.push_back({c, sx, h});

    struct TaskResult {
        std::map<double, double> factor_by_e0;
        bool zero_premium = false;
        std::string error;
    };
    std::vector<TaskResult> results(tasks.size());

    const auto run_task = [&](std::size_t ti) {
        const Task& task = tasks[ti];
        TaskResult& out = results[ti];
        const FactorTable::ColKey& col = table.cols[task.col];
        const ProjectModel m = with_overrides(grid, col.phi, col.lambda, grid.e0_list.front());
        const AssetAggregates a = asset_of(grid, task.sigma_x, col.rho);
        try {
            const ValidationReport rep = validate(m, a, task.horizon);
            if (!rep.ok()) throw AdmissibilityError(rep.violations.front());
            const EffectiveModel em = esscher_shift(m, a);
            out.zero_premium = rep.zero_premium;
            if (rep.zero_premium) {
                for (double e0 : grid.e0_list) out.factor_by_e0[e0] = 1.0;
                return;
            }
            if (task.horizon.kind == HorizonSpec::Kind::Deterministic) {
                const AmericanSolution sol = solve_american(task.horizon.value, em);
                const int level = static_cast<int>(sol.tau.size()) - 1;
                for (double e0 : grid.e0_list) {
                    const double euro = euro_price(task.horizon.value, e0, em).price;
                    out.factor_by_e0[e0] = factor_from_parts(euro, sol.premium_at(level, e0));
                }
            } else {
                const RandomizedSolution sol = solve_randomized(task.horizon.value, em);
                for (double e0 : grid.e0_list) {
                    const double euro = euro_randomized(e0, task.horizon.value, em).price;
                    out.factor_by_e0[e0] = factor_from_parts(euro, premium_stoch(e0, sol, em));
                }
            }
        } catch (const std::exception& ex) {
            out.error = ex.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t ti = 0; ti < tasks.size(); ++ti) run_task(ti);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const int n_workers = std::min<std::size_t>(jobs, tasks.size());
        for (int wkr = 0; wkr < n_workers; ++wkr)
            workers.emplace_back([&] {
                for (std::size_t ti = next.fetch_add(1); ti < tasks.size();
                     ti = next.fetch_add(1))
                    run_task(ti);
            });
        for (auto& w : workers) w.join();
    }

    // deterministic assembly, in task order
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        const Task& task = tasks[ti];
        const TaskResult& out = results[ti];
        for (std::size_t rix = 0; rix < n_rows; ++rix) {
            const FactorTable::RowKey& row = table.rows[rix];
            if (row.sigma_x != task.sigma_x || row.horizon.kind != task.horizon.kind ||
                row.horizon.value != task.horizon.value)
                continue;
            if (!out.error.empty()) {
                std::ostringstream os;
                os << "cell (sigma_x=" << row.sigma_x << ", " << format_horizon(row.horizon)
                   << ", e0=" << row.e0 << ", phi=" << table.cols[task.col].phi
                   << ", rho=" << table.cols[task.col].rho << "): " << out.error;
                table.cell_log.push_back(os.str());
                continue;
            }
            table.values[rix][task.col] = out.factor_by_e0.at(row.e0);
            table.zero_premium[rix][task.col] = out.zero_premium ? 1 : 0;
        }
    }
    return table;
}

std::string FactorTable::to_csv(int decimals) const {
    std::ostringstream os;
    os << "sigma_x,horizon_kind,horizon,e0";
    for (const ColKey& c : cols)
        os << ",phi=" << c.phi << ";lambda=" << c.lambda << ";rho=" << c.rho;
    os << "\n";
    os << std::fixed << std::setprecision(decimals);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const RowKey& row = rows[r];
        os << row.sigma_x << ","
           << (row.horizon.kind == HorizonSpec::Kind::Deterministic ? "T" : "vartheta") << ","
           << row.horizon.value << "," << row.e0;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            os << ",";
            if (std::isnan(values[r][c]))
                os << "NaN";
            else
                os << values[r][c];
        }
        os << "\n";
    }
    return os.str();
}

std::string FactorTable::to_json() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "{\n  \"columns\": [";
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) os << ", ";
        os << "{\"phi\": " << cols[c].phi << ", \"lambda\": " << cols[c].lambda
           << ", \"rho\": " << cols[c].rho << "}";
    }
    os << "],\n  \"rows\": [";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r) os << ", ";
        os << "{\"sigma_x\": " << rows[r].sigma_x << ", \"horizon_kind\": \""
           << (rows[r].horizon.kind == HorizonSpec::Kind::Deterministic ? "T" : "vartheta")
           << "\", \"horizon\": " << rows[r].horizon.value << ", \"e0\": " << rows[r].e0 << "}";
    }
    os << "],\n  \"values\": [";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r) os << ", ";
        os << "[";
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) os << ", ";
            if (std::isnan(values[r][c]))
                os << "null";
            else
                os << values[r][c];
        }
        os << "]";
    }
    os << "],\n  \"zero_premium\": [";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r) os << ", ";
        os << "[";
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) os << ", ";
            os << int(zero_premium[r][c]);
        }
        os << "]";
    }
    os << "],\n  \"log\": [";
    for (std::size_t i = 0; i < cell_log.size(); ++i) {
        if (i) os << ", ";
        os << "\"" << cell_log[i] << "\"";
    }
    os << "]\n}\n";
    return os.str();
}

FigureSeries figure_series(SweepParam param, const std::vector<double>& range,
                           const ProjectModel& base_m, const AssetAggregates& base_a,
                           const HorizonSpec& base_horizon, const GridSpec& g) {
    if (range.empty()) throw AdmissibilityError("figure_series: empty sweep range");
    FigureSeries out;
    out.param = param;
    for (double v : range) {
        ProjectModel m = base_m;
        AssetAggregates a = base_a;
        double T = base_horizon.kind == HorizonSpec::Kind::Deterministic
                       ? base_horizon.value
                       : 1.0 / base_horizon.value;
        switch (param) {
            case SweepParam::Horizon: T = v; break;
            case SweepParam::JumpSize: m.phi = v; break;
            case SweepParam::Correlation: a.rho = v; break;
        }
        const ValidationReport rep = validate(m, a, HorizonSpec::deterministic(T));
        const ValidationReport rep_s = validate(m, a, HorizonSpec::exponential(1.0 / T));
        if (!rep.ok() || !rep_s.ok()) {
            std::ostringstream os;
            os << "sweep point " << v << " skipped: "
               << (!rep.ok() ? rep.violations.front() : rep_s.violations.front());
            out.warnings.push_back(os.str());
            continue;
        }
        out.values.push_back(v);
        out.factor_det.push_back(illiquidity_factor_det(T, m.e0, m, a, g));
        out.factor_stoch.push_back(illiquidity_factor_stoch(1.0 / T, m.e0, m, a));
    }
    return out;
}

std::string FigureSeries::to_csv() const {
    std::ostringstream os;
    const char* name = param == SweepParam::Horizon ? "horizon"
                       : param == SweepParam::JumpSize ? "jump_size"
                                                       : "correlation";
    os << name << ",factor_deterministic,factor_stochastic\n";
    os << std::setprecision(10);
    for (std::size_t i = 0; i < values.size(); ++i)
        os << values[i] << "," << factor_det[i] << "," << factor_stoch[i] << "\n";
    return os.str();
}

ValuationResult value_scenario(const ProjectModel& m, const AssetAggregates& a,
                               const HorizonSpec& h, const GridSpec& g) {
    const ValidationReport rep = validate(m, a, h);
    if (!rep.ok()) throw AdmissibilityError(rep.violations.front());
    const EffectiveModel em = esscher_shift(m, a);
    ValuationResult res;
    res.zero_premium = rep.zero_premium;
    if (h.kind == HorizonSpec::Kind::Deterministic) {
        const double T = h.value;
        res.euro_scaled = euro_price(T, m.e0, em).price;
        if (rep.zero_premium) {
            res.amer_scaled = res.euro_scaled;
            res.boundary = BoundaryCurve::kNoExercise;
        } else {
            const AmericanSolution sol = solve_american(T, em, g);
            const int level = static_cast<int>(sol.tau.size()) - 1;
            res.premium_abs = std::max(sol.premium_at(level, m.e0), 0.0);
            res.amer_scaled = res.euro_scaled + res.premium_abs;
            res.boundary = sol.boundary.level[level];
            res.lcp_residual = sol.max_lcp_residual;
            res.n_space = sol.grid.n_space;
            res.n_time = sol.grid.n_time;
            res.x_max = sol.grid.x_max;
            // one-sided slope of the American value at the boundary node vs 1
            const auto& u = sol.value[level];
            int bi = 0;
            for (std::size_t i = 0; i < sol.log_x.size(); ++i)
                if (std::exp(sol.log_x[i]) >= res.boundary) {
                    bi = static_cast<int>(i);
                    break;
                }
            if (bi >= 2) {
                const double dx = std::exp(sol.log_x[bi]) - std::exp(sol.log_x[bi - 1]);
                res.smooth_pasting_residual =
                    std::abs((u[bi] - u[bi - 1]) / dx - 1.0);
            }
        }
    } else {
        const double vt = h.value;
        res.euro_scaled = euro_randomized(m.e0, vt, em).price;
        const RandomizedSolution sol = solve_randomized(vt, em);
        res.gamma_plus = sol.gamma_plus;
        res.boundary = sol.b_R;
        res.smooth_pasting_residual = sol.smooth_pasting_residual;
        res.premium_abs = premium_stoch(m.e0, sol, em);
        res.amer_scaled = res.euro_scaled + res.premium_abs;
    }
    res.premium_rel = res.euro_scaled > 0.0 ? res.premium_abs / res.euro_scaled : 0.0;
    res.factor = factor_from_parts(res.euro_scaled, res.premium_abs);
    return res;
}

}  // namespace tradeability

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tradeability/american_pide.hpp"
#include "tradeability/levy_core.hpp"
#include "tradeability/randomized.hpp"

namespace tradeability {

/// One fully worked valuation, as reported by the CLI.
struct ValuationResult {
    double euro_scaled = 0.0;
    double amer_scaled = 0.0;
    double premium_abs = 0.0;       ///< scaled absolute premium
    double premium_rel = 0.0;       ///< premium / European
    double factor = 1.0;            ///< European / American, in (0, 1]
    bool zero_premium = false;
    // horizon-specific diagnostics
    double boundary = 0.0;          ///< b_R (exponential) or b_s(T) (deterministic)
    double gamma_plus = 0.0;        ///< exponential horizon only
    double smooth_pasting_residual = 0.0;
    double lcp_residual = 0.0;      ///< deterministic horizon only
    // grid actually used (deterministic horizon)
    int n_space = 0;
    int n_time = 0;
    double x_max = 0.0;
};

/// Parameter grid for one reproduction table.
struct ScenarioGrid {
    std::vector<HorizonSpec> horizons;
    std::vector<double> e0_list;
    std::vector<double> rho_list;
    std::vector<double> sigma_x_list;
    std::vector<std::pair<double, double>> jump_cases;  ///< (phi, lambda)
    double b = 0.0;
    double sigma = 0.2;
    double r = 0.0225;
    double phi_x1 = 0.005;
};

/// Illiquidity factors, rows keyed by (sigma_x block, horizon, E0), columns by
/// (jump case, rho). Cells that fail are NaN with a log entry; zero-premium
/// cells are flagged and exactly 1.
struct FactorTable {
    struct RowKey {
        double sigma_x;
        HorizonSpec horizon;
        double e0;
    };
    struct ColKey {
        double phi;
        double lambda;
        double rho;
    };
    std::vector<RowKey> rows;
    std::vector<ColKey> cols;
    std::vector<std::vector<double>> values;
    std::vector<std::vector<std::uint8_t>> zero_premium;
    std::vector<std::string> cell_log;

    std::string to_csv(int decimals = 3) const;
    std::string to_json() const;
};

/// C_E*(T, e0) / C_A*(T, e0); exactly 1 in the zero-premium regime.
double illiquidity_factor_det(double T, double e0, const ProjectModel& m,
                              const AssetAggregates& a, const GridSpec& g = {});

/// C_E^R*(e0) / C_A^R*(e0); exactly 1 in the zero-premium regime.
double illiquidity_factor_stoch(double vartheta, double e0, const ProjectModel& m,
                                const AssetAggregates& a);

/// Fill a factor table for the requested horizon kind. Cells are pure
/// functions of their scenario; iteration order cannot change any value.
/// `jobs` caps the number of worker threads (columns are independent).
FactorTable generate_table(const ScenarioGrid& grid, HorizonSpec::Kind kind, int jobs = 1);

enum class SweepParam { Horizon, JumpSize, Correlation };

/// Paired deterministic/stochastic factor series over a parameter sweep.
/// The horizon sweep reads its values as T = 1/vartheta.
struct FigureSeries {
    SweepParam param;
    std::vector<double> values;
    std::vector<double> factor_det;
    std::vector<double> factor_stoch;
    std::vector<std::string> warnings;

    std::string to_csv() const;
};

FigureSeries figure_series(SweepParam param, const std::vector<double>& range,
                           const ProjectModel& base_m, const AssetAggregates& base_a,
                           const HorizonSpec& base_horizon, const GridSpec& g = {});

/// Full valuation at one scenario (used by `price` / `premium` commands).
ValuationResult value_scenario(const ProjectModel& m, const AssetAggregates& a,
                               const HorizonSpec& h, const GridSpec& g = {});

}  // namespace tradeability

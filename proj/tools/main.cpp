// Command-line front end: single valuations, premium and factor queries,
// boundary reports, reproduction tables, figure data and Monte-Carlo checks.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "table_presets.hpp"

#include "tradeability/american_pide.hpp"
#include "tradeability/european.hpp"
#include "tradeability/levy_core.hpp"
#include "tradeability/mc_oracle.hpp"
#include "tradeability/premium.hpp"
#include "tradeability/randomized.hpp"

using nlohmann::json;
using namespace tradeability;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;

int log_level() {
    const char* lvl = std::getenv("TRADEABILITY_LOG");
    if (!lvl) return 1;
    const std::string s = lvl;
    if (s == "debug") return 2;
    if (s == "quiet" || s == "error") return 0;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[tradeability] " << msg << "\n";
}

[[noreturn]] void fail_config(const std::string& message) {
    json err{{"error", "config"}, {"message", message}};
    std::cerr << err.dump() << "\n";
    std::exit(kExitBadConfig);
}

struct RunConfig {
    ProjectModel model;
    AssetAggregates asset;
    HorizonSpec horizon = HorizonSpec::deterministic(1.0);
    bool horizon_set = false;
    GridSpec grid;
    double s0 = 1.0;
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = 20180330;
    int jobs = 1;
};

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) fail_config("unknown key '" + it.key() + "' in " + where);
    }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) fail_config("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        fail_config(std::string("malformed JSON: ") + ex.what());
    }
    if (!j.is_object()) fail_config("config root must be an object");
    reject_unknown(j,
                   {"b", "sigma", "phi", "lambda", "e0", "r", "phi_x1", "sigma_x", "rho",
                    "horizon", "grid", "s0", "format", "out", "seed", "jobs"},
                   "config");
    try {
        if (j.contains("b")) cfg.model.b = j["b"].get<double>();
        if (j.contains("sigma")) cfg.model.sigma = j["sigma"].get<double>();
        if (j.contains("phi")) cfg.model.phi = j["phi"].get<double>();
        if (j.contains("lambda")) cfg.model.lambda = j["lambda"].get<double>();
        if (j.contains("e0")) cfg.model.e0 = j["e0"].get<double>();
        if (j.contains("r")) cfg.asset.r = j["r"].get<double>();
        if (j.contains("phi_x1")) cfg.asset.phi_x1 = j["phi_x1"].get<double>();
        if (j.contains("sigma_x")) cfg.asset.sigma_x = j["sigma_x"].get<double>();
        if (j.contains("rho")) cfg.asset.rho = j["rho"].get<double>();
        if (j.contains("s0")) cfg.s0 = j["s0"].get<double>();
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
        if (j.contains("horizon")) {
            const json& h = j["horizon"];
            reject_unknown(h, {"kind", "T", "vartheta"}, "config.horizon");
            const std::string kind = h.at("kind").get<std::string>();
            if (kind == "deterministic")
                cfg.horizon = HorizonSpec::deterministic(h.at("T").get<double>());
            else if (kind == "exponential")
                cfg.horizon = HorizonSpec::exponential(h.at("vartheta").get<double>());
            else
                fail_config("horizon.kind must be 'deterministic' or 'exponential'");
            cfg.horizon_set = true;
        }
        if (j.contains("grid")) {
            const json& g = j["grid"];
            reject_unknown(g, {"x_min", "x_max", "n_space", "n_time", "scheme"}, "config.grid");
            if (g.contains("x_min")) cfg.grid.x_min = g["x_min"].get<double>();
            if (g.contains("x_max")) cfg.grid.x_max = g["x_max"].get<double>();
            if (g.contains("n_space")) cfg.grid.n_space = g["n_space"].get<int>();
            if (g.contains("n_time")) cfg.grid.n_time = g["n_time"].get<int>();
            if (g.contains("scheme")) {
                const std::string s = g["scheme"].get<std::string>();
                if (s == "imex-cn")
                    cfg.grid.scheme = GridSpec::Scheme::ImexCrankNicolson;
                else if (s == "psor")
                    cfg.grid.scheme = GridSpec::Scheme::FullyImplicitPsor;
                else
                    fail_config("grid.scheme must be 'imex-cn' or 'psor'");
            }
        }
    } catch (const json::exception& ex) {
        fail_config(std::string("bad config value: ") + ex.what());
    }
}

void validate_or_die(const RunConfig& cfg) {
    const ValidationReport rep = validate(cfg.model, cfg.asset, cfg.horizon);
    if (!rep.ok()) {
        json err{{"error", "validation"}, {"violations", rep.violations}};
        std::cerr << err.dump() << "\n";
        std::exit(kExitBadConfig);
    }
    for (const std::string& note : rep.notes) log_info(note);
}

void write_output(const RunConfig& cfg, const std::string& payload) {
    if (cfg.out.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(cfg.out);
    if (!out) fail_config("cannot open output file: " + cfg.out);
    out << payload;
    log_info("wrote " + cfg.out);
}

json valuation_to_json(const RunConfig& cfg, const ValuationResult& v) {
    json j;
    j["euro_scaled"] = v.euro_scaled;
    j["amer_scaled"] = v.amer_scaled;
    j["euro_full"] = cfg.s0 * v.euro_scaled;
    j["amer_full"] = cfg.s0 * v.amer_scaled;
    j["premium_abs"] = v.premium_abs;
    j["premium_rel"] = v.premium_rel;
    j["illiquidity_factor"] = v.factor;
    j["zero_premium"] = v.zero_premium;
    json diag;
    diag["boundary"] = std::isinf(v.boundary) ? json() : json(v.boundary);
    if (cfg.horizon.kind == HorizonSpec::Kind::Exponential) {
        diag["gamma_plus"] = v.gamma_plus;
        diag["smooth_pasting_residual"] = v.smooth_pasting_residual;
    } else {
        diag["lcp_residual"] = v.lcp_residual;
        diag["smooth_pasting_residual"] = v.smooth_pasting_residual;
        if (v.n_space > 0) {
            diag["grid"] = json{{"n_space", v.n_space}, {"n_time", v.n_time}, {"x_max", v.x_max}};
        }
    }
    j["diagnostics"] = diag;
    return j;
}

std::string valuation_to_csv(const RunConfig& cfg, const ValuationResult& v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    os << "quantity,value\n";
    os << "euro_scaled," << v.euro_scaled << "\n";
    os << "amer_scaled," << v.amer_scaled << "\n";
    os << "euro_full," << cfg.s0 * v.euro_scaled << "\n";
    os << "amer_full," << cfg.s0 * v.amer_scaled << "\n";
    os << "premium_abs," << v.premium_abs << "\n";
    os << "premium_rel," << v.premium_rel << "\n";
    os << "illiquidity_factor," << v.factor << "\n";
    os << "zero_premium," << (v.zero_premium ? 1 : 0) << "\n";
    if (std::isfinite(v.boundary)) os << "boundary," << v.boundary << "\n";
    if (cfg.horizon.kind == HorizonSpec::Kind::Exponential)
        os << "gamma_plus," << v.gamma_plus << "\n";
    return os.str();
}

ScenarioGrid preset_grid(const std::string& name, HorizonSpec::Kind* kind_out) {
    const json presets = json::parse(tradeability_cli::kTablePresetsJson);
    const json& tables = presets.at("tables");
    if (!tables.contains(name)) fail_config("unknown table name: " + name);
    const json& common = presets.at("common");
    const json& t = tables.at(name);
    ScenarioGrid grid;
    grid.r = common.at("r").get<double>();
    grid.phi_x1 = common.at("phi_x1").get<double>();
    grid.sigma = common.at("sigma").get<double>();
    grid.b = t.at("b").get<double>();
    for (const auto& v : common.at("e0_list")) grid.e0_list.push_back(v.get<double>());
    for (const auto& v : common.at("rho_list")) grid.rho_list.push_back(v.get<double>());
    for (const auto& v : common.at("sigma_x_list")) grid.sigma_x_list.push_back(v.get<double>());
    for (const auto& v : common.at("jump_cases"))
        grid.jump_cases.emplace_back(v.at("phi").get<double>(), v.at("lambda").get<double>());
    const HorizonSpec::Kind kind = t.at("kind").get<std::string>() == "deterministic"
                                       ? HorizonSpec::Kind::Deterministic
                                       : HorizonSpec::Kind::Exponential;
    for (const auto& v : t.at("horizons"))
        grid.horizons.push_back(kind == HorizonSpec::Kind::Deterministic
                                    ? HorizonSpec::deterministic(v.get<double>())
                                    : HorizonSpec::exponential(v.get<double>()));
    *kind_out = kind;
    return grid;
}

int compare_tables(const FactorTable& table, const std::string& ref_path, int decimals) {
    std::ifstream in(ref_path);
    if (!in) fail_config("cannot open reference CSV: " + ref_path);
    std::string line;
    std::getline(in, line);  // header
    double max_dev = 0.0;
    std::size_t n_cells = 0, row = 0;
    while (std::getline(in, line) && row < table.rows.size()) {
        std::stringstream ss(line);
        std::string cell;
        for (int skip = 0; skip < 4; ++skip) std::getline(ss, cell, ',');
        std::size_t col = 0;
        while (std::getline(ss, cell, ',') && col < table.cols.size()) {
            try {
                const double ref = std::stod(cell);
                const double ours = table.values[row][col];
                if (!std::isnan(ours)) {
                    max_dev = std::max(max_dev, std::abs(ours - ref));
                    ++n_cells;
                }
            } catch (...) {
            }
            ++col;
        }
        ++row;
    }
    std::cout << std::fixed << std::setprecision(decimals + 3);
    std::cout << "compared_cells," << n_cells << "\n";
    std::cout << "max_abs_deviation," << max_dev << "\n";
    return kExitOk;
}

// -------------------------------------------------------------------------
// verify: Monte-Carlo oracle suite
// -------------------------------------------------------------------------

struct CheckReport {
    int passed = 0;
    int failed = 0;

    void record(const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
        ok ? ++passed : ++failed;
    }
};

int run_verify(const RunConfig& cfg, std::int64_t n_paths) {
    SimConfig sim;
    sim.seed = cfg.seed;
    sim.n_paths = n_paths;
    CheckReport rep;
    std::ostringstream detail;

    const auto check_close = [&](const std::string& name, double got, double want, double tol_abs) {
        std::ostringstream os;
        os << std::setprecision(8) << "got " << got << ", want " << want << " +- " << tol_abs;
        rep.record(name, std::abs(got - want) <= tol_abs, os.str());
    };

    // Two-asset reduction under the pricing measure vs the one-asset value.
    {
        ProjectModel m{-0.04, 0.2, std::log(0.85), 0.5, 1.1};
        AssetAggregates a{0.005, 0.2, -0.5, 0.0225};
        const EffectiveModel em = esscher_shift(m, a);
        const double T = 1.5, s0 = 1.3;
        const McEstimate est = mc_two_asset_euro(T, s0, m.e0, m, a, sim);
        const double ref = s0 * euro_price(T, m.e0, em).price;
        check_close("two_asset_reduction", est.estimate, ref, 3.0 * est.std_error);
    }
    // One-asset European vs the series price.
    {
        ProjectModel m{0.0, 0.2, std::log(0.7), 0.5, 1.0};
        AssetAggregates a{0.005, 0.4, -0.5, 0.0225};
        const EffectiveModel em = esscher_shift(m, a);
        const McEstimate est = mc_single_asset_euro(2.5, m.e0, em, sim);
        check_close("single_asset_euro", est.estimate, euro_price(2.5, m.e0, em).price,
                    3.0 * est.std_error);
    }
    // Martingale structure of the compensated exponential.
    {
        ProjectModel m{-0.04, 0.2, std::log(0.85), 0.5, 1.0};
        AssetAggregates a{0.005, 0.2, -0.5, 0.0225};
        const EffectiveModel em = esscher_shift(m, a);
        const McEstimate est = mc_martingale_check(2.0, 1.0, em, sim);
        check_close("martingale_sanity", est.estimate, 1.0, 3.0 * est.std_error);
    }
    // American lower bound vs the PIDE value, zero-premium equality included.
    {
        ProjectModel m{0.0, 0.2, 0.0, 0.0, 1.1};
        AssetAggregates a{0.005, 0.2, 0.5, 0.0225};  // zero-premium regime
        const EffectiveModel em = esscher_shift(m, a);
        const McEstimate est = mc_american_ls(1.5, m.e0, em, sim);
        const double ref = euro_price(1.5, m.e0, em).price;
        check_close("ls_zero_premium", est.estimate, ref,
                    std::max(3.0 * est.std_error, 0.01 * ref));
    }
    {
        ProjectModel m{-0.04, 0.2, 0.0, 0.0, 1.0};
        AssetAggregates a{0.005, 0.2, -0.5, 0.0225};
        const EffectiveModel em = esscher_shift(m, a);
        const McEstimate est = mc_american_ls(1.5, m.e0, em, sim);
        const AmericanSolution sol = solve_american(1.5, em, cfg.grid);
        const int level = static_cast<int>(sol.tau.size()) - 1;
        const double pide = euro_price(1.5, m.e0, em).price + sol.premium_at(level, m.e0);
        const double tol = std::max(3.0 * est.std_error, 0.01 * pide);
        check_close("ls_vs_pide", est.estimate, pide, tol);
        rep.record("ls_lower_bound", est.estimate <= pide + 3.0 * est.std_error,
                   "lower-bound property");
    }
    // Randomized European vs quadrature.
    {
        ProjectModel m{-0.04, 0.2, std::log(0.85), 0.5, 1.0};
        AssetAggregates a{0.005, 0.2, -0.5, 0.0225};
        const EffectiveModel em = esscher_shift(m, a);
        const McEstimate est = mc_randomized_euro(2.0, m.e0, em, sim);
        check_close("randomized_euro", est.estimate, euro_randomized(m.e0, 2.0, em).price,
                    3.0 * est.std_error);
    }
    std::cout << "verify: " << rep.passed << " passed, " << rep.failed << " failed\n";
    return rep.failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tradeability valuation: exchange-option premiums and illiquidity factors"};
    app.require_subcommand(1);
    app.fallthrough();  // model flags may follow the subcommand name

    RunConfig cfg;
    std::string config_path;
    std::optional<double> opt_T, opt_vartheta, opt_e0, opt_rho, opt_sigma_x, opt_b, opt_sigma,
        opt_phi, opt_lambda, opt_r, opt_phi_x1, opt_s0;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--T", opt_T, "deterministic horizon in years");
    app.add_option("--vartheta", opt_vartheta, "exponential horizon arrival rate (per year)");
    app.add_option("--e0", opt_e0, "initial project value per unit invested");
    app.add_option("--rho", opt_rho, "correlation");
    app.add_option("--sigma-x", opt_sigma_x, "asset volatility");
    app.add_option("--b", opt_b, "cash-flow growth rate");
    app.add_option("--sigma", opt_sigma, "project volatility");
    app.add_option("--phi", opt_phi, "log jump size (<= 0)");
    app.add_option("--lambda", opt_lambda, "jump intensity");
    app.add_option("--r", opt_r, "risk-free rate");
    app.add_option("--phi-x1", opt_phi_x1, "asset growth rate Phi_X(1)");
    app.add_option("--s0", opt_s0, "asset level for full (unscaled) prices");
    app.add_option("--jobs", cfg.jobs, "worker threads for table/figure commands");
    app.add_option("--format", cfg.format, "output format: csv or json");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--seed", cfg.seed, "Monte-Carlo seed");

    // price <euro|amer>
    auto* cmd_price = app.add_subcommand("price", "price the switching option");
    std::string price_which;
    cmd_price->add_option("which", price_which, "euro or amer")->required();

    auto* cmd_premium = app.add_subcommand("premium", "premium and illiquidity factor");
    std::string premium_horizon = "det";
    cmd_premium->add_option("--horizon", premium_horizon, "det or exp");

    auto* cmd_boundary = app.add_subcommand("boundary", "exercise boundary report");

    auto* cmd_table = app.add_subcommand("table", "reproduce a factor table");
    std::string table_name;
    std::string compare_path;
    cmd_table->add_option("which", table_name, "det-b0, det-bneg, exp-b0 or exp-bneg")->required();
    cmd_table->add_option("--compare", compare_path, "reference CSV for deviation report");

    auto* cmd_figure = app.add_subcommand("figure", "factor sweep series");
    std::string figure_param;
    double fig_from = 0.0, fig_to = 0.0;
    int fig_points = 0;
    cmd_figure->add_option("param", figure_param, "horizon, jump-size or correlation")->required();
    cmd_figure->add_option("--from", fig_from, "sweep start")->required();
    cmd_figure->add_option("--to", fig_to, "sweep end")->required();
    cmd_figure->add_option("--points", fig_points, "number of sweep points")->required();

    auto* cmd_verify = app.add_subcommand("verify", "Monte-Carlo oracle checks");
    std::int64_t verify_paths = 100000;
    cmd_verify->add_option("--paths", verify_paths, "paths per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return kExitOk;
        json err{{"error", "usage"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return kExitBadConfig;
    }

    if (!config_path.empty()) load_config_file(config_path, cfg);
    if (opt_b) cfg.model.b = *opt_b;
    if (opt_sigma) cfg.model.sigma = *opt_sigma;
    if (opt_phi) cfg.model.phi = *opt_phi;
    if (opt_lambda) cfg.model.lambda = *opt_lambda;
    if (opt_e0) cfg.model.e0 = *opt_e0;
    if (opt_r) cfg.asset.r = *opt_r;
    if (opt_phi_x1) cfg.asset.phi_x1 = *opt_phi_x1;
    if (opt_sigma_x) cfg.asset.sigma_x = *opt_sigma_x;
    if (opt_rho) cfg.asset.rho = *opt_rho;
    if (opt_s0) cfg.s0 = *opt_s0;
    if (opt_T && opt_vartheta) fail_config("give either --T or --vartheta, not both");
    if (opt_T) {
        cfg.horizon = HorizonSpec::deterministic(*opt_T);
        cfg.horizon_set = true;
    }
    if (opt_vartheta) {
        cfg.horizon = HorizonSpec::exponential(*opt_vartheta);
        cfg.horizon_set = true;
    }
    if (cfg.format != "csv" && cfg.format != "json")
        fail_config("format must be 'csv' or 'json'");

    try {
        if (cmd_price->parsed() || cmd_premium->parsed() || cmd_boundary->parsed()) {
            if (cmd_premium->parsed() && !cfg.horizon_set)
                cfg.horizon = premium_horizon == "exp" ? HorizonSpec::exponential(2.0)
                                                       : HorizonSpec::deterministic(1.0);
            if (cmd_premium->parsed() && premium_horizon != "det" && premium_horizon != "exp")
                fail_config("premium --horizon must be 'det' or 'exp'");
            validate_or_die(cfg);
        }

        if (cmd_price->parsed()) {
            if (price_which != "euro" && price_which != "amer")
                fail_config("price expects 'euro' or 'amer'");
            const ValuationResult v = value_scenario(cfg.model, cfg.asset, cfg.horizon, cfg.grid);
            if (cfg.format == "json") {
                json j = valuation_to_json(cfg, v);
                j["requested"] = price_which;
                write_output(cfg, j.dump(2) + "\n");
            } else {
                write_output(cfg, valuation_to_csv(cfg, v));
            }
            return kExitOk;
        }

        if (cmd_premium->parsed()) {
            const ValuationResult v = value_scenario(cfg.model, cfg.asset, cfg.horizon, cfg.grid);
            if (cfg.format == "json")
                write_output(cfg, valuation_to_json(cfg, v).dump(2) + "\n");
            else
                write_output(cfg, valuation_to_csv(cfg, v));
            return kExitOk;
        }

        if (cmd_boundary->parsed()) {
            validate_or_die(cfg);
            const EffectiveModel em = esscher_shift(cfg.model, cfg.asset);
            std::ostringstream os;
            os << std::setprecision(10);
            if (cfg.horizon.kind == HorizonSpec::Kind::Deterministic) {
                const AmericanSolution sol = solve_american(cfg.horizon.value, em, cfg.grid);
                os << "tau,boundary\n";
                for (std::size_t k = 0; k < sol.boundary.tau.size(); ++k) {
                    os << sol.boundary.tau[k] << ",";
                    if (std::isinf(sol.boundary.level[k]))
                        os << "inf";
                    else
                        os << sol.boundary.level[k];
                    os << "\n";
                }
            } else {
                const RandomizedSolution sol = solve_randomized(cfg.horizon.value, em);
                os << "quantity,value\n";
                os << "vartheta," << sol.vartheta << "\n";
                os << "gamma_plus," << sol.gamma_plus << "\n";
                os << "c1_plus," << sol.c1_plus << "\n";
                os << "boundary,";
                if (std::isinf(sol.b_R))
                    os << "inf";
                else
                    os << sol.b_R;
                os << "\n";
            }
            write_output(cfg, os.str());
            return kExitOk;
        }

        if (cmd_table->parsed()) {
            HorizonSpec::Kind kind;
            const ScenarioGrid grid = preset_grid(table_name, &kind);
            log_info("generating table " + table_name);
            const FactorTable table = generate_table(grid, kind, cfg.jobs);
            for (const std::string& entry : table.cell_log) log_info(entry);
            if (!compare_path.empty()) {
                write_output(cfg, table.to_csv());
                return compare_tables(table, compare_path, 3);
            }
            write_output(cfg, cfg.format == "json" ? table.to_json() : table.to_csv());
            return kExitOk;
        }

        if (cmd_figure->parsed()) {
            SweepParam param;
            if (figure_param == "horizon")
                param = SweepParam::Horizon;
            else if (figure_param == "jump-size")
                param = SweepParam::JumpSize;
            else if (figure_param == "correlation")
                param = SweepParam::Correlation;
            else
                fail_config("figure expects 'horizon', 'jump-size' or 'correlation'");
            if (fig_points < 1) fail_config("figure needs at least one sweep point");

            // defaults from the baked scenario, overridable by flags
            const json presets = json::parse(tradeability_cli::kTablePresetsJson);
            const json& fd = presets.at("figure_defaults");
            RunConfig base = cfg;
            if (!opt_r) base.asset.r = fd.at("r").get<double>();
            if (!opt_phi_x1) base.asset.phi_x1 = fd.at("phi_x1").get<double>();
            if (!opt_sigma_x) base.asset.sigma_x = fd.at("sigma_x").get<double>();
            if (!opt_rho) base.asset.rho = fd.at("rho").get<double>();
            if (!opt_b) base.model.b = fd.at("b").get<double>();
            if (!opt_sigma) base.model.sigma = fd.at("sigma").get<double>();
            if (!opt_phi) base.model.phi = fd.at("phi").get<double>();
            if (!opt_lambda) base.model.lambda = fd.at("lambda").get<double>();
            if (!opt_e0) base.model.e0 = fd.at("e0").get<double>();
            if (!cfg.horizon_set) base.horizon = HorizonSpec::deterministic(0.5);

            std::vector<double> range;
            for (int i = 0; i < fig_points; ++i)
                range.push_back(fig_points == 1
                                    ? fig_from
                                    : fig_from + (fig_to - fig_from) * i / (fig_points - 1));
            const FigureSeries series =
                figure_series(param, range, base.model, base.asset, base.horizon, base.grid);
            for (const std::string& w : series.warnings) log_info(w);
            write_output(cfg, series.to_csv());
            return kExitOk;
        }

        if (cmd_verify->parsed()) {
            return run_verify(cfg, verify_paths);
        }
    } catch (const AdmissibilityError& ex) {
        json err{{"error", "validation"}, {"message", ex.what()}};
        std::cerr << err.dump() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& ex) {
        json err{{"error", "runtime"}, {"message", ex.what()}};
        std::cerr << err.dump() << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

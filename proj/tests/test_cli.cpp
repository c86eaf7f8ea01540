#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "tradeability/european.hpp"
#include "tradeability/premium.hpp"

using namespace tradeability;

namespace {

std::string cli_path() {
    const char* p = std::getenv("TRADEABILITY_CLI_PATH");
    REQUIRE_MESSAGE(p != nullptr, "TRADEABILITY_CLI_PATH must point at the CLI binary");
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

double csv_value(const std::string& csv, const std::string& key) {
    const std::size_t pos = csv.find(key + ",");
    REQUIRE(pos != std::string::npos);
    return std::stod(csv.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("price euro matches the library") {
    const RunResult r =
        run("price euro --T 0.5 --e0 1.2 --b -0.04 --rho -0.5 --sigma-x 0.2");
    CHECK(r.exit_code == 0);
    const ProjectModel m{-0.04, 0.2, 0.0, 0.0, 1.2};
    const AssetAggregates a{0.005, 0.2, -0.5, 0.0225};
    const double want = euro_price(0.5, 1.2, esscher_shift(m, a)).price;
    CHECK(csv_value(r.out, "euro_scaled") == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("price amer under an exponential horizon reports boundary diagnostics") {
    const RunResult r = run(
        "price amer --vartheta 2 --e0 1.0 --b -0.04 --rho -0.5 --sigma-x 0.2 --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"gamma_plus\"") != std::string::npos);
    CHECK(r.out.find("\"boundary\"") != std::string::npos);
}

TEST_CASE("premium factor query") {
    const RunResult r =
        run("premium --horizon exp --vartheta 2 --e0 1.0 --b -0.04 --rho -0.5");
    CHECK(r.exit_code == 0);
    const double factor = csv_value(r.out, "illiquidity_factor");
    CHECK(factor == doctest::Approx(0.933).epsilon(0.006));
}

TEST_CASE("malformed and invalid configs exit with code 2") {
    {
        std::ofstream bad("/tmp/tradeability_bad.json");
        bad << "{ not json";
    }
    CHECK(run("price euro --config /tmp/tradeability_bad.json").exit_code == 2);
    {
        std::ofstream unknown("/tmp/tradeability_unknown.json");
        unknown << "{\"bee\": 1.0}";
    }
    CHECK(run("price euro --config /tmp/tradeability_unknown.json").exit_code == 2);
    // validation failure: negative sigma
    CHECK(run("price euro --T 1 --sigma -0.5").exit_code == 2);
    // unknown table name
    CHECK(run("table det-nope").exit_code == 2);
    // empty figure range
    CHECK(run("figure horizon --from 0.5 --to 5 --points 0").exit_code == 2);
}

TEST_CASE("config file values are applied") {
    {
        std::ofstream cfg("/tmp/tradeability_cfg.json");
        cfg << "{\"b\": -0.04, \"rho\": -0.5, \"e0\": 1.2, "
               "\"horizon\": {\"kind\": \"deterministic\", \"T\": 0.5}}";
    }
    const RunResult r = run("price euro --config /tmp/tradeability_cfg.json");
    CHECK(r.exit_code == 0);
    const ProjectModel m{-0.04, 0.2, 0.0, 0.0, 1.2};
    const AssetAggregates a{0.005, 0.2, -0.5, 0.0225};
    const double want = euro_price(0.5, 1.2, esscher_shift(m, a)).price;
    CHECK(csv_value(r.out, "euro_scaled") == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("exponential-horizon table command") {
    const RunResult r = run("table exp-b0 --jobs 2");
    CHECK(r.exit_code == 0);
    // header + 2 sigma_x * 4 horizons * 4 e0 rows
    std::size_t lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines == 33);
    // every rho=0.5 cell sits in the zero-premium regime for b=0
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        for (int i = 0; i < 4; ++i) std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');  // first value column: phi=0, rho=0.5
        CHECK(cell == "1.000");
    }
}

TEST_CASE("table output is byte-identical across runs and job counts") {
    const RunResult a = run("table exp-bneg --jobs 1");
    const RunResult b = run("table exp-bneg --jobs 4");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("table comparison against a reference CSV reports deviations") {
    const RunResult gen = run("table exp-b0 --out /tmp/tradeability_ref.csv");
    REQUIRE(gen.exit_code == 0);
    // comparing a table against itself must report a zero maximum deviation
    const RunResult cmp = run("table exp-b0 --compare /tmp/tradeability_ref.csv --out /dev/null");
    CHECK(cmp.exit_code == 0);
    CHECK(cmp.out.find("compared_cells,288") != std::string::npos);
    // the reference carries 3 decimals, so a self-comparison is bounded by
    // the rounding half-width
    CHECK(csv_value(cmp.out, "max_abs_deviation") <= 5.0e-4);
}

TEST_CASE("figure sweep endpoints reproduce scalar calls") {
    const RunResult r = run("figure correlation --from -0.5 --to 0.5 --points 3 --T 0.5");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string header, first;
    std::getline(in, header);
    CHECK(header == "correlation,factor_deterministic,factor_stochastic");
    std::getline(in, first);
    std::stringstream ss(first);
    std::string cell;
    std::getline(ss, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(-0.5));
    std::getline(ss, cell, ',');
    // default figure scenario at rho = -0.5, T = 0.5
    const ProjectModel m{-0.04, 0.2, std::log(0.85), 0.5, 1.0};
    const AssetAggregates a{0.005, 0.2, -0.5, 0.0225};
    CHECK(std::stod(cell) == doctest::Approx(illiquidity_factor_det(0.5, 1.0, m, a)).epsilon(1e-9));
}

TEST_CASE("verify runs reproducibly at reduced path counts") {
    const RunResult a = run("verify --paths 4000 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.out.find("PASS") != std::string::npos);
    const RunResult b = run("verify --paths 4000 --seed 7");
    CHECK(a.out == b.out);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "powerwall/propagators.hpp"

using json = nlohmann::json;
using namespace powerwall;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "powerwall_cli_test";

int run_cli(const std::string& sub, const fs::path& config) {
    std::string cmd = std::string(POWERWALL_CLI_PATH) + " " + sub + " --config " +
                      config.string() + " > " + (kWorkDir / "stdout.txt").string() +
                      " 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path write_config(const char* name, const json& cfg) {
    fs::create_directories(kWorkDir);
    fs::path path = kWorkDir / name;
    std::ofstream(path) << cfg.dump(2);
    return path;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("paths subcommand emits one row per path") {
    json cfg = {{"potential", {{"kind", "quadratic"}, {"omega", kPi}}},
                {"output", (kWorkDir / "paths.csv").string()},
                {"paths", {{"y", {-1.0}}, {"x", {-1.0}}, {"t", {2.0}}}}};
    fs::create_directories(kWorkDir);
    CHECK(run_cli("paths", write_config("paths.json", cfg)) == 0);
    auto rows = read_csv(kWorkDir / "paths.csv");
    REQUIRE(rows.size() == 3);  // header + A + E
    CHECK(rows[1][3] == "A");
    CHECK(rows[2][3] == "E");
}

TEST_CASE("paths subcommand linear two-bounce point") {
    json cfg = {{"potential", {{"kind", "linear"}, {"k", 1.0}}},
                {"output", (kWorkDir / "paths_lin.csv").string()},
                {"paths", {{"y", {-1.5}}, {"x", {-1.5}}, {"t", {4.0}}}}};
    CHECK(run_cli("paths", write_config("paths_lin.json", cfg)) == 0);
    auto rows = read_csv(kWorkDir / "paths_lin.csv");
    REQUIRE(rows.size() == 4);  // header + A + E + E
}

TEST_CASE("empty grid yields a header-only file") {
    json cfg = {{"potential", {{"kind", "linear"}, {"k", 1.0}}},
                {"output", (kWorkDir / "paths_empty.csv").string()},
                {"paths", {{"y", json::array()}, {"x", {1.0}}, {"t", {1.0}}}}};
    CHECK(run_cli("paths", write_config("paths_empty.json", cfg)) == 0);
    CHECK(read_csv(kWorkDir / "paths_empty.csv").size() == 1);
}

TEST_CASE("propagator subcommand matches k_free in the free regime") {
    json cfg = {{"potential", {{"kind", "quadratic"}, {"omega", 1.0}}},
                {"output", (kWorkDir / "prop.csv").string()},
                {"propagator",
                 {{"y", -2.0},
                  {"x", {{"min", -3.0}, {"max", -1.0}, {"n", 5}}},
                  {"t", {{"min", 0.2}, {"max", 0.6}, {"n", 3}}}}}};
    CHECK(run_cli("propagator", write_config("prop.json", cfg)) == 0);
    auto rows = read_csv(kWorkDir / "prop.csv");
    REQUIRE(rows.size() == 16);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double x = std::stod(rows[i][0]), t = std::stod(rows[i][1]);
        Complex want = k_free(x, -2.0, t);
        CHECK(std::stod(rows[i][2]) == doctest::Approx(want.real()).epsilon(1e-12));
        CHECK(std::stod(rows[i][3]) == doctest::Approx(want.imag()).epsilon(1e-12));
    }
}

TEST_CASE("caustics subcommand recovers the linear axis caustic") {
    double k = 1.0;
    json cfg = {{"potential", {{"kind", "linear"}, {"k", k}}},
                {"output", (kWorkDir / "caustics.csv").string()},
                {"caustics",
                 {{"slice", "yt"},
                  {"fixed", 1e-9},
                  {"u", {{"min", -2.2}, {"max", -0.3}, {"n", 12}}},
                  {"v", {{"min", 0.1}, {"max", 4.0}, {"n", 2000}}}}}};
    CHECK(run_cli("caustics", write_config("caustics.json", cfg)) == 0);
    auto rows = read_csv(kWorkDir / "caustics.csv");
    REQUIRE(rows.size() > 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double y = std::stod(rows[i][0]), t = std::stod(rows[i][1]);
        // smallest-t branch of the discriminant locus is y = -k t^2 / 4
        double t_pred = 2.0 * std::sqrt(-y / k);
        if (t < 1.5 * t_pred)
            CHECK(t == doctest::Approx(t_pred).epsilon(5e-3));
    }
}

TEST_CASE("hypothesis subcommand writes a JSON report") {
    json cfg = {{"potential", {{"kind", "quadratic"}, {"omega", 1.0}}},
                {"output", (kWorkDir / "hyp.json").string()},
                {"hypothesis",
                 {{"window",
                   {{"y_lo", -2.0}, {"y_hi", -0.5}, {"x_lo", -2.0}, {"x_hi", -0.5},
                    {"t_lo", 0.2}, {"t_hi", 2.0}}},
                  {"n", 3},
                  {"opnorm",
                   {{{"t", 0.5}, {"x_lo", -8.0}, {"x_hi", 8.0}, {"n", 81}}}}}}};
    CHECK(run_cli("hypothesis", write_config("hyp.json", cfg)) == 0);
    std::ifstream is(kWorkDir / "hyp.json");
    json report = json::parse(is);
    CHECK(report.at("verdict_i").get<bool>());
    CHECK(report.at("sup_residual").get<double>() == 0.0);
    REQUIRE(report.at("opnorm_estimates").size() == 1);
    CHECK(std::isfinite(report["opnorm_estimates"][0]["norm"].get<double>()));
}

TEST_CASE("validate subcommand passes") {
    json cfg = {{"potential", {{"kind", "quadratic"}, {"omega", 1.0}}}};
    CHECK(run_cli("validate", write_config("validate.json", cfg)) == 0);
}

TEST_CASE("config errors exit with code 2") {
    fs::create_directories(kWorkDir);
    fs::path bad = kWorkDir / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("paths", bad) == 2);

    json cfg = {{"potential", {{"kind", "cubic"}}},
                {"output", (kWorkDir / "x.csv").string()},
                {"paths", {{"y", {0.0}}, {"x", {0.0}}, {"t", {1.0}}}}};
    CHECK(run_cli("paths", write_config("badkind.json", cfg)) == 2);
    CHECK(run_cli("paths", kWorkDir / "does_not_exist.json") == 2);
}

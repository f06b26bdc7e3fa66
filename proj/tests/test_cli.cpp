#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "micz/run_config.hpp"

using namespace micz;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigDir = MICZ_CONFIG_DIR;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("cli_test_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("simulate mode writes the trajectory and a clean report") {
    const fs::path out = fresh_dir("simulate");
    const int rc = run(RunMode::Simulate, (kConfigDir / "kepler.json").string(), out.string(), 0,
                       true);
    REQUIRE(rc == 0);

    const std::string csv = slurp(out / "trajectory.csv");
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() > 10);
    CHECK(lines[0] == "t,x,y,z,vx,vy,vz,E,p_phi,I_p");

    const std::string report = slurp(out / "report.json");
    CHECK(report.find("\"E\"") != std::string::npos);
    // circular Kepler orbit at machine-tight tolerance: drift well under 1e-8
    const auto pos = report.find("max_rel_drift");
    REQUIRE(pos != std::string::npos);
    CHECK(report.find("\"flagged\": true") == std::string::npos);
}

TEST_CASE("green mode tabulates the sphere potential with a zero at r = 1") {
    const fs::path out = fresh_dir("green");
    const int rc =
        run(RunMode::Green, (kConfigDir / "green_sphere.json").string(), out.string(), 0, true);
    REQUIRE(rc == 0);
    const auto lines = split_lines(slurp(out / "green.csv"));
    REQUIRE(lines.size() > 2);
    CHECK(lines[0] == "r,phi_C");
    bool found = false;
    for (const std::string& line : lines)
        if (line == "1,0" || line == "1,-0") found = true;
    CHECK(found);
}

TEST_CASE("validate mode reports small residuals for the shipped orbit") {
    const fs::path out = fresh_dir("validate");
    const int rc = run(RunMode::Validate, (kConfigDir / "two_center_validate.json").string(),
                       out.string(), 0, true);
    REQUIRE(rc == 0);
    const std::string text = slurp(out / "validation.json");
    CHECK(text.find("max_dt_residual") != std::string::npos);
    // parse the residual numbers crudely but robustly
    const auto value_after = [&text](const std::string& key) {
        const auto pos = text.find(key);
        REQUIRE(pos != std::string::npos);
        return std::stod(text.substr(text.find(':', pos) + 1));
    };
    CHECK(value_after("max_dt_residual") < 1e-4);
    CHECK(value_after("max_dphi_residual") < 1e-4);
}

TEST_CASE("sweep mode writes one row per value in deterministic order") {
    const fs::path out = fresh_dir("sweep");
    const int rc =
        run(RunMode::Sweep, (kConfigDir / "sweep_field.json").string(), out.string(), 0, true);
    REQUIRE(rc == 0);
    const auto lines = split_lines(slurp(out / "sweep.csv"));
    REQUIRE(lines.size() == 6);  // header + 5 values
    CHECK(lines[1].substr(0, 2) == "0,");
    CHECK(lines[5].substr(0, 2) == "4,");
}

TEST_CASE("identical configs give bit-identical outputs") {
    const fs::path out1 = fresh_dir("det1");
    const fs::path out2 = fresh_dir("det2");
    const std::string cfg = (kConfigDir / "two_center.json").string();
    REQUIRE(run(RunMode::Simulate, cfg, out1.string(), 0, true) == 0);
    REQUIRE(run(RunMode::Simulate, cfg, out2.string(), 0, true) == 0);
    CHECK(slurp(out1 / "trajectory.csv") == slurp(out2 / "trajectory.csv"));
    CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
}

TEST_CASE("config errors exit with code 2") {
    const fs::path out = fresh_dir("bad");

    SUBCASE("three dyons in the two-center family") {
        const fs::path cfg = write_text(out, "bad.json", R"({
            "system": {
              "family": "two_center_elliptic",
              "a": 1.0,
              "dyons": [
                {"position": [0,0,-1], "g": 1.0, "q": 0.0},
                {"position": [0,0,1], "g": 1.0, "q": 0.0},
                {"position": [0,0,0], "g": 1.0, "q": 0.0}
              ]
            },
            "initial_state": {"position": [2,0,0], "velocity": [0,0.5,0]}
        })");
        CHECK(run(RunMode::Simulate, cfg.string(), out.string(), 0, true) == 2);
    }
    SUBCASE("mode mismatch between config and command") {
        const fs::path cfg = write_text(out, "mismatch.json", R"({
            "mode": "green",
            "system": {
              "family": "flat_multi_center",
              "dyons": [{"position": [0,0,0], "g": 0.0, "q": -1.0}]
            },
            "initial_state": {"position": [1,0,0], "velocity": [0,1,0]}
        })");
        CHECK(run(RunMode::Simulate, cfg.string(), out.string(), 0, true) == 2);
    }
    SUBCASE("validate refuses non-separable families") {
        const fs::path cfg = write_text(out, "family.json", R"({
            "system": {
              "family": "flat_multi_center",
              "dyons": [{"position": [0,0,0], "g": 0.0, "q": -1.0}]
            },
            "initial_state": {"position": [1,0,0], "velocity": [0,1,0]},
            "integrator": {"t_end": 5.0}
        })");
        CHECK(run(RunMode::Validate, cfg.string(), out.string(), 0, true) == 2);
    }
    SUBCASE("unreadable file") {
        CHECK(run(RunMode::Simulate, (out / "missing.json").string(), out.string(), 0, true) == 2);
    }
    SUBCASE("invalid JSON") {
        const fs::path cfg = write_text(out, "broken.json", "{ not json");
        CHECK(run(RunMode::Simulate, cfg.string(), out.string(), 0, true) == 2);
    }
}

TEST_CASE("stride thins the written samples") {
    const fs::path out1 = fresh_dir("stride1");
    const fs::path out4 = fresh_dir("stride4");
    const std::string cfg = (kConfigDir / "kepler.json").string();
    REQUIRE(run(RunMode::Simulate, cfg, out1.string(), 0, true) == 0);
    REQUIRE(run(RunMode::Simulate, cfg, out4.string(), 4, true) == 0);
    const auto n1 = split_lines(slurp(out1 / "trajectory.csv")).size();
    const auto n4 = split_lines(slurp(out4 / "trajectory.csv")).size();
    CHECK(n4 < n1);
    CHECK(n4 >= (n1 - 1) / 4);
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = CRPOWER_CLI_PATH;
const fs::path kPresets = fs::path(CRPOWER_SOURCE_DIR) / "presets";

int run(const std::string& args) {
    const int rc = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("crpower_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("") == 2);                        // missing subcommand
    CHECK(run("frobnicate") == 2);              // unknown subcommand
    CHECK(run("--trials 0 validate") == 2);     // non-positive trials
    CHECK(run("--config /nonexistent.json prob-opportunity") == 2);
}

TEST_CASE("corrupted config exits with code 2") {
    const fs::path dir = temp_dir("badcfg");
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK(run("--config " + (dir / "bad.json").string() + " prob-opportunity") ==
          2);
}

TEST_CASE("degenerate analytic conditioning exits with code 3") {
    const fs::path dir = temp_dir("degen");
    // vanishing traffic makes the miss-detection conditional undefined
    std::ofstream(dir / "cfg.json") << R"({
        "lambda": 0.00025, "p": 1e-15, "R_p": 200.0, "R_I": 250.0,
        "d_factor": 0.9,
        "sweep": { "ratios": [1.0], "r_D_points": 10 }
    })";
    CHECK(run("--config " + (dir / "cfg.json").string() + " --out " +
              dir.string() + " roc") == 3);
}

TEST_CASE("prob-opportunity reproduces the bound sandwich") {
    const fs::path dir = temp_dir("fig5a");
    const int rc = run("--config " + (kPresets / "fig5a.json").string() +
                       " --out " + dir.string() + " prob-opportunity");
    REQUIRE(rc == 0);

    const std::string csv = slurp(dir / "prob_vs_r_I.csv");
    REQUIRE(csv.rfind("r_I,prob,lower,upper\n", 0) == 0);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    int rows = 0;
    while (std::getline(lines, line)) {
        double r_I, prob, lower, upper;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r_I, &prob,
                            &lower, &upper) == 4);
        CHECK(lower < prob);
        CHECK(prob <= upper * (1 + 1e-9));
        ++rows;
    }
    CHECK(rows == 200);
    CHECK(fs::exists(dir / "manifest.json"));

    // reruns are byte-identical
    const fs::path dir2 = temp_dir("fig5a_rerun");
    REQUIRE(run("--config " + (kPresets / "fig5a.json").string() + " --out " +
                dir2.string() + " prob-opportunity") == 0);
    CHECK(slurp(dir / "prob_vs_r_I.csv") == slurp(dir2 / "prob_vs_r_I.csv"));
}

TEST_CASE("prob-opportunity per-load series") {
    const fs::path dir = temp_dir("fig5b");
    REQUIRE(run("--config " + (kPresets / "fig5b.json").string() + " --out " +
                dir.string() + " prob-opportunity") == 0);
    for (const char* name :
         {"prob_vs_p_rI100.csv", "prob_vs_p_rI250.csv", "prob_vs_p_rI500.csv"}) {
        const std::string csv = slurp(dir / name);
        REQUIRE(csv.rfind("p,prob\n", 0) == 0);
    }
}

TEST_CASE("environment overrides reach the config") {
    const fs::path dir = temp_dir("envovr");
    setenv("CRPOWER_p", "0", 1);
    const int rc = run("--config " + (kPresets / "fig5a.json").string() +
                       " --out " + dir.string() + " prob-opportunity");
    unsetenv("CRPOWER_p");
    REQUIRE(rc == 0);
    // with p = 0 every probability is exactly 1
    std::istringstream lines(slurp(dir / "prob_vs_r_I.csv"));
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        double r_I, prob, lower, upper;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r_I, &prob,
                            &lower, &upper) == 4);
        CHECK(prob == 1.0);
        ++rows;
    }
    CHECK(rows == 200);
}

TEST_CASE("roc command emits analytic curves per ratio") {
    const fs::path dir = temp_dir("roc");
    std::ofstream(dir / "cfg.json") << R"({
        "lambda": 0.00025, "p": 0.01, "R_p": 200.0, "R_I": 250.0,
        "d_factor": 0.9,
        "sweep": { "ratios": [0.5, 2.0], "r_D_points": 20 }
    })";
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " --out " +
                dir.string() + " roc") == 0);
    const std::string csv = slurp(dir / "roc.csv");
    REQUIRE(csv.rfind("r_I_over_R_I,r_D,P_F,P_D,source\n", 0) == 0);

    // P_F nondecreasing within each ratio block
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    double prev_ratio = -1, prev_pf = -1;
    int rows = 0;
    while (std::getline(lines, line)) {
        double ratio, r_D, pf, pd;
        char src[16];
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%15s", &ratio, &r_D,
                            &pf, &pd, src) == 5);
        if (ratio != prev_ratio) prev_pf = -1;
        CHECK(pf >= prev_pf - 1e-12);
        prev_ratio = ratio;
        prev_pf = pf;
        ++rows;
    }
    CHECK(rows == 40);
}

TEST_CASE("roc --simulate adds empirical rows with standard errors") {
    const fs::path dir = temp_dir("rocsim");
    std::ofstream(dir / "cfg.json") << R"({
        "lambda": 0.00025, "p": 0.01, "R_p": 200.0, "R_I": 250.0,
        "alpha": 3.0, "P_tx": 10.0, "tau_B": 6.4e-07, "d_factor": 0.9,
        "sweep": { "ratios": [0.5], "r_D_points": 10, "tau_points": 8 }
    })";
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " --out " +
                dir.string() + " --trials 2000 --seed 3 roc --simulate") == 0);
    const std::string csv = slurp(dir / "roc.csv");
    REQUIRE(csv.rfind("r_I_over_R_I,r_D,P_F,P_D,source,P_F_se,P_D_se,flag\n",
                      0) == 0);
    CHECK(csv.find(",analytic,") != std::string::npos);
    CHECK(csv.find(",mc,") != std::string::npos);

    // trials must be positive for simulation
    CHECK(run("--config " + (dir / "cfg.json").string() + " --out " +
              dir.string() + " --trials 0 roc --simulate") == 2);
}

TEST_CASE("optimize command emits one row per combination") {
    const fs::path dir = temp_dir("opt");
    std::ofstream(dir / "cfg.json") << R"({
        "lambda": 0.00025, "R_p": 200.0, "R_I": 250.0, "d_factor": 0.9,
        "zeta": 0.05, "p_grid": [0.1],
        "sweep": { "r_I_points": 24 }
    })";
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " --out " +
                dir.string() + " optimize --schemes lbt genie --modes best_effort") == 0);
    const std::string csv = slurp(dir / "optimize.csv");
    REQUIRE(csv.rfind("p,scheme,mode,r_I_star,r_D_star,C_star,boundary_flag,error\n",
                      0) == 0);
    CHECK(csv.find(",lbt,best_effort,") != std::string::npos);
    CHECK(csv.find(",genie,best_effort,") != std::string::npos);

    // empty p grid is a usage error
    std::ofstream(dir / "empty.json") << R"({
        "lambda": 0.00025, "R_p": 200.0, "R_I": 250.0, "zeta": 0.05,
        "p_grid": []
    })";
    CHECK(run("--config " + (dir / "empty.json").string() + " --out " +
              dir.string() + " optimize") == 2);
}

TEST_CASE("validate quick preset with low-power trials is inconclusive, exit 0") {
    const fs::path dir = temp_dir("val");
    REQUIRE(run("--out " + dir.string() +
                " --trials 10 --seed 1 validate --preset quick") == 0);
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"inconclusive\"") != std::string::npos);

    // byte-identical rerun
    const fs::path dir2 = temp_dir("val2");
    REQUIRE(run("--out " + dir2.string() +
                " --trials 10 --seed 1 validate --preset quick") == 0);
    CHECK(slurp(dir / "report.json") == slurp(dir2 / "report.json"));

    CHECK(run("--out " + dir.string() + " validate --preset bogus") == 2);
}

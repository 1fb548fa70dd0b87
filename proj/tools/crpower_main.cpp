// crpower command-line front end: reproduces the reference figures as CSV
// data files, runs the validation suite, and exposes the library to scripts.
//
// Exit codes: 0 ok, 1 validation-suite failure, 2 input error, 3 numeric
// error, 4 insufficient Monte Carlo samples.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crpower/analytic.hpp"
#include "crpower/model.hpp"
#include "crpower/montecarlo.hpp"
#include "crpower/optimizer.hpp"
#include "crpower/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericError = 3;
constexpr int kExitInsufficientSamples = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// The JSON parameter record keys that accept CRPOWER_<key> environment
// overrides.
const std::vector<std::string>& overridable_keys() {
    static const std::vector<std::string> keys = {
        "lambda", "p", "R_p", "R_I", "d", "r_I", "r_D",
        "zeta", "alpha", "P_tx", "p_tx", "tau_B", "d_factor"};
    return keys;
}

json load_config(const std::string& path) {
    json cfg = json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw crpower::DomainError("cannot open config: " + path);
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw crpower::DomainError("config parse error: " +
                                       std::string(e.what()));
        }
        if (!cfg.is_object())
            throw crpower::DomainError("config root must be an object");
    }
    for (const auto& key : overridable_keys()) {
        const std::string var = "CRPOWER_" + key;
        if (const char* v = std::getenv(var.c_str())) {
            try {
                cfg[key] = std::stod(v);
            } catch (const std::exception&) {
                throw crpower::DomainError("bad value in " + var);
            }
        }
    }
    return cfg;
}

double need(const json& cfg, const std::string& key) {
    if (!cfg.contains(key))
        throw crpower::DomainError("missing config key: " + key);
    if (!cfg[key].is_number())
        throw crpower::DomainError("config key must be numeric: " + key);
    return cfg[key].get<double>();
}

double get_or(const json& cfg, const std::string& key, double fallback) {
    return cfg.contains(key) ? need(cfg, key) : fallback;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct RunContext {
    std::string command_line;
    fs::path out_dir;
    json resolved;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    unsigned threads = 1;
    json outputs = json::array();
    json plot_hints = json::object();

    void write_file(const std::string& name, const std::string& bytes) {
        fs::create_directories(out_dir);
        const fs::path p = out_dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw crpower::DomainError("cannot write " + p.string());
        out << bytes;
        out.close();
        char digest[24];
        std::snprintf(digest, sizeof digest, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(bytes)));
        outputs.push_back({{"file", name}, {"digest_fnv1a64", digest},
                           {"bytes", bytes.size()}});
    }

    void write_manifest(const std::string& name = "manifest.json") {
        json m;
        m["command"] = command_line;
        m["parameters"] = resolved;
        m["seed"] = seed;
        m["trials"] = trials;
        m["threads"] = threads;
        m["version"] = crpower::kVersion;
        char stamp[64];
        const std::time_t now = std::time(nullptr);
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ",
                      std::gmtime(&now));
        m["timestamp"] = stamp;
        m["outputs"] = outputs;
        if (!plot_hints.empty()) m["plot_hints"] = plot_hints;
        fs::create_directories(out_dir);
        std::ofstream out(out_dir / name, std::ios::binary);
        out << m.dump(2) << "\n";
    }
};

// ---- prob-opportunity ------------------------------------------------------

int cmd_prob_opportunity(RunContext& ctx, const json& cfg) {
    const crpower::PrimaryNetwork net{need(cfg, "lambda"), need(cfg, "p"),
                                      need(cfg, "R_p"), need(cfg, "R_I")};
    const double d = need(cfg, "d");
    const json sweep = cfg.value("sweep", json::object());

    if (sweep.contains("r_I_min")) {
        const double lo = need(sweep, "r_I_min");
        const double hi = need(sweep, "r_I_max");
        const int n = static_cast<int>(get_or(sweep, "r_I_points", 200));
        if (!(hi > lo) || n < 2)
            throw crpower::DomainError("bad r_I sweep");
        std::string csv = "r_I,prob,lower,upper\n";
        for (int i = 0; i < n; ++i) {
            const double r_I = lo + (hi - lo) * i / (n - 1);
            const crpower::SecondaryLink link{d, r_I, 0.0};
            const double prob = crpower::prob_opportunity(net, link);
            const auto b = crpower::opportunity_bounds(net, link);
            csv += fmt(r_I) + "," + fmt(prob) + "," + fmt(b.lower) + "," +
                   fmt(b.upper) + "\n";
        }
        ctx.write_file("prob_vs_r_I.csv", csv);
        ctx.plot_hints["prob_vs_r_I"] = {{"y_log", true}};
    }

    if (sweep.contains("r_I_values")) {
        std::vector<double> p_values;
        if (sweep.contains("p_values")) {
            for (const auto& v : sweep["p_values"]) p_values.push_back(v);
        } else {
            const double plo = need(sweep, "p_min");
            const double phi = need(sweep, "p_max");
            const int n = static_cast<int>(get_or(sweep, "p_points", 100));
            for (int i = 0; i < n; ++i)
                p_values.push_back(plo * std::pow(phi / plo,
                                                  double(i) / (n - 1)));
        }
        for (const auto& rv : sweep["r_I_values"]) {
            const double r_I = rv.get<double>();
            std::string csv = "p,prob\n";
            for (double p : p_values) {
                const crpower::PrimaryNetwork n2{net.lambda, p, net.R_p,
                                                 net.R_I};
                const double prob =
                    crpower::prob_opportunity(n2, {d, r_I, 0.0});
                csv += fmt(p) + "," + fmt(prob) + "\n";
            }
            std::ostringstream name;
            name << "prob_vs_p_rI" << r_I << ".csv";
            ctx.write_file(name.str(), csv);
        }
        ctx.plot_hints["prob_vs_p"] = {{"y_log", true}};
    }

    if (ctx.outputs.empty())
        throw crpower::DomainError(
            "sweep must define r_I_min/r_I_max or r_I_values");
    ctx.write_manifest();
    return kExitOk;
}

// ---- roc --------------------------------------------------------------------

int cmd_roc(RunContext& ctx, const json& cfg, bool simulate,
            const std::string& scheme_name) {
    const crpower::PrimaryNetwork net{need(cfg, "lambda"), need(cfg, "p"),
                                      need(cfg, "R_p"), need(cfg, "R_I")};
    const double d_factor = get_or(cfg, "d_factor", 0.9);
    const crpower::Scheme scheme = crpower::scheme_from_string(scheme_name);
    const json sweep = cfg.value("sweep", json::object());
    if (!sweep.contains("ratios"))
        throw crpower::DomainError("sweep.ratios is required for roc");

    std::string csv = simulate
                          ? "r_I_over_R_I,r_D,P_F,P_D,source,P_F_se,P_D_se,flag\n"
                          : "r_I_over_R_I,r_D,P_F,P_D,source\n";

    for (const auto& rv : sweep["ratios"]) {
        const double ratio = rv.get<double>();
        const double r_I = ratio * net.R_I;
        const double d = d_factor * r_I;
        const int n_rd = static_cast<int>(get_or(sweep, "r_D_points", 60));
        std::vector<double> grid(n_rd);
        for (int i = 0; i < n_rd; ++i)
            grid[i] = (r_I + net.R_p) * i / (n_rd - 1);
        const auto curve =
            crpower::roc_curve(net, {d, r_I, 0.0}, grid, scheme);
        for (const auto& pt : curve) {
            csv += fmt(ratio) + "," + fmt(pt.r_D) + "," + fmt(pt.pf) + "," +
                   fmt(pt.pd) + ",analytic";
            if (simulate) csv += ",0,0,ok";
            csv += "\n";
        }

        if (simulate) {
            const double alpha = need(cfg, "alpha");
            const double P_tx = need(cfg, "P_tx");
            const double tau_B = need(cfg, "tau_B");
            const crpower::EnergyDetectorConfig det{alpha, P_tx, tau_B};
            const int n_tau = static_cast<int>(get_or(sweep, "tau_points", 64));
            // thresholds via equivalent detection radii, descending radius =
            // ascending threshold
            const double r_lo = 0.2 * net.R_I;
            const double r_hi = 1.5 * (r_I + net.R_p);
            std::vector<double> taus(n_tau);
            for (int i = 0; i < n_tau; ++i) {
                const double r = r_hi * std::pow(r_lo / r_hi,
                                                 double(i) / (n_tau - 1));
                taus[i] = P_tx * std::pow(r, -alpha);
            }
            crpower::SimConfig sim;
            sim.trials = ctx.trials;
            sim.seed = ctx.seed;
            sim.threads = ctx.threads;
            const auto roc = crpower::energy_detector_roc(
                net, {d, r_I, 0.0}, det, taus, sim);
            for (const auto& pt : roc.points) {
                const char* flag = pt.pf_degenerate || pt.pd_degenerate
                                       ? "degenerate"
                                       : "ok";
                csv += fmt(ratio) + "," + fmt(pt.equivalent_radius) + "," +
                       fmt(pt.pf.value) + "," + fmt(pt.pd.value) + ",mc," +
                       fmt(pt.pf.std_err) + "," + fmt(pt.pd.std_err) + "," +
                       flag + "\n";
            }
        }
    }
    ctx.write_file("roc.csv", csv);
    ctx.write_manifest();
    return kExitOk;
}

// ---- optimize ----------------------------------------------------------------

int cmd_optimize(RunContext& ctx, const json& cfg,
                 std::vector<std::string> schemes,
                 std::vector<std::string> modes, bool curve) {
    const double lambda = need(cfg, "lambda");
    const double R_p = need(cfg, "R_p");
    const double R_I = need(cfg, "R_I");
    const double zeta = need(cfg, "zeta");
    const double d_factor = get_or(cfg, "d_factor", 0.9);

    std::vector<double> p_grid;
    if (cfg.contains("p_grid"))
        for (const auto& v : cfg["p_grid"]) p_grid.push_back(v.get<double>());
    else if (cfg.contains("p"))
        p_grid.push_back(need(cfg, "p"));
    if (p_grid.empty()) throw crpower::DomainError("p_grid is empty");
    for (double p : p_grid)
        if (!(p > 0 && p <= 1))
            throw crpower::DomainError("p_grid values must lie in (0,1]");

    if (schemes.empty()) schemes = {"lbt", "elbt", "genie"};
    if (modes.empty()) modes = {"guaranteed", "best_effort"};
    if (curve || cfg.value("curve", false)) curve = true;

    const json sweep = cfg.value("sweep", json::object());
    const int grid_points = static_cast<int>(get_or(sweep, "r_I_points", 120));
    const double lo_f = get_or(sweep, "r_I_lo_factor", 0.05);
    const double hi_f = get_or(sweep, "r_I_hi_factor", 4.0);
    std::vector<double> r_grid(grid_points);
    for (int i = 0; i < grid_points; ++i)
        r_grid[i] = lo_f * R_I *
                    std::pow(hi_f / lo_f, double(i) / (grid_points - 1));

    std::string csv =
        "p,scheme,mode,r_I_star,r_D_star,C_star,boundary_flag,error\n";
    std::string curve_csv = "p,scheme,mode,r_I,r_D,C\n";

    for (double p : p_grid) {
        const crpower::PrimaryNetwork net{lambda, p, R_p, R_I};
        for (const auto& sname : schemes) {
            const crpower::Scheme scheme = crpower::scheme_from_string(sname);
            for (const auto& mname : modes) {
                const crpower::DeliveryMode mode =
                    crpower::mode_from_string(mname);
                crpower::SweepSpec spec;
                spec.r_I_grid = r_grid;
                spec.p_grid = {p};
                spec.d_rule = crpower::default_d_rule(d_factor);
                spec.scheme = scheme;
                spec.mode = mode;
                std::string err;
                crpower::OptimizationResult res;
                try {
                    res = crpower::optimize_interference_range(net, spec, zeta);
                } catch (const crpower::Error& e) {
                    err = e.what();
                }
                csv += fmt(p) + "," + sname + "," + mname + ",";
                if (err.empty()) {
                    csv += fmt(res.r_I_star) + "," + fmt(res.r_D_star) + "," +
                           fmt(res.C_star) + "," +
                           (res.boundary ? "1" : "0") + ",\n";
                } else {
                    std::string safe = err;
                    for (auto& ch : safe)
                        if (ch == ',' || ch == '\n') ch = ';';
                    csv += ",,,," + safe + "\n";
                }
                if (curve && err.empty()) {
                    for (double r_I : r_grid) {
                        const double d = d_factor * r_I;
                        const auto inner = crpower::best_detection_range(
                            net, d, r_I, zeta, scheme, mode);
                        curve_csv += fmt(p) + "," + sname + "," + mname + "," +
                                     fmt(r_I) + "," + fmt(inner.r_D) + "," +
                                     fmt(d * inner.p_success) + "\n";
                    }
                }
            }
        }
    }
    ctx.write_file("optimize.csv", csv);
    if (curve) ctx.write_file("curve.csv", curve_csv);
    ctx.write_manifest();
    return kExitOk;
}

// ---- validate -----------------------------------------------------------------

int cmd_validate(RunContext& ctx, const std::string& preset) {
    const crpower::ValidationReport rep = crpower::run_validation(
        ctx.seed, ctx.trials, ctx.threads, preset);

    json out;
    out["version"] = crpower::kVersion;
    out["seed"] = rep.seed;
    out["trials"] = rep.trials;
    out["preset"] = rep.preset;
    out["n_pass"] = rep.n_pass;
    out["n_fail"] = rep.n_fail;
    out["n_inconclusive"] = rep.n_inconclusive;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json jc;
        jc["name"] = c.name;
        jc["status"] = c.status;
        jc["observed"] = c.observed;
        jc["reference"] = c.reference;
        jc["tolerance"] = c.tolerance;
        if (!c.note.empty()) jc["note"] = c.note;
        checks.push_back(jc);
    }
    out["checks"] = checks;

    // The report itself carries no timestamp: identical invocations must
    // produce byte-identical reports.
    ctx.write_file("report.json", out.dump(2) + "\n");
    ctx.write_manifest();

    std::cout << (rep.passed() ? "PASS" : "FAIL") << ": " << rep.n_pass
              << " passed, " << rep.n_fail << " failed, "
              << rep.n_inconclusive << " inconclusive\n";
    return rep.passed() ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cognitive-radio power control toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--config", config_path, "JSON parameter file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--trials", trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads")
        ->check(CLI::PositiveNumber);

    auto* prob = app.add_subcommand("prob-opportunity",
                                    "opportunity probability sweeps");
    prob->fallthrough();
    auto* roc = app.add_subcommand("roc", "detector ROC curves");
    roc->fallthrough();
    std::string scheme_name = "lbt";
    bool simulate = false;
    roc->add_option("--scheme", scheme_name, "lbt or elbt");
    roc->add_flag("--simulate", simulate,
                  "add energy-detector Monte Carlo rows");
    auto* optimize =
        app.add_subcommand("optimize", "constrained throughput optimization");
    optimize->fallthrough();
    std::vector<std::string> schemes, modes;
    bool curve = false;
    optimize->add_option("--schemes", schemes, "schemes (lbt elbt genie)");
    optimize->add_option("--modes", modes, "modes (guaranteed best_effort)");
    optimize->add_flag("--curve", curve, "also emit the full C(r_I) curves");
    auto* validate = app.add_subcommand("validate", "invariant suite");
    validate->fallthrough();
    std::string preset = "default";
    validate->add_option("--preset", preset, "matrix preset (default|quick)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    RunContext ctx;
    {
        std::ostringstream cmd;
        for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
        ctx.command_line = cmd.str();
    }
    ctx.out_dir = out_dir;
    ctx.seed = seed;
    ctx.trials = trials;
    ctx.threads = threads;

    try {
        const json cfg = load_config(config_path);
        ctx.resolved = cfg;
        if (prob->parsed()) return cmd_prob_opportunity(ctx, cfg);
        if (roc->parsed()) return cmd_roc(ctx, cfg, simulate, scheme_name);
        if (optimize->parsed())
            return cmd_optimize(ctx, cfg, schemes, modes, curve);
        if (validate->parsed()) return cmd_validate(ctx, preset);
        return kExitInputError;
    } catch (const crpower::InsufficientSamplesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientSamples;
    } catch (const crpower::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const crpower::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "crpower/analytic.hpp"
#include "crpower/model.hpp"

// Constrained transport-throughput optimization: maximize C = d(r_I) * P_S
// over the interference range r_I, where for each r_I the detection range is
// the smallest one satisfying P_C <= zeta.
//
// Why smallest feasible r_D is optimal: P_C is nonincreasing in r_D for
// every scheme, and P_S is nonincreasing in r_D (LBT best-effort) or depends
// on r_D only through r_E = max(r_D, R_I) (LBT guaranteed, ELBT), which is
// also nonincreasing. A flag-gated grid scan cross-checks this argument.

namespace crpower {

struct SweepSpec {
    std::vector<double> r_I_grid;                 // strictly increasing
    std::vector<double> p_grid;                   // traffic loads
    std::function<double(double)> d_rule;         // r_I -> d
    Scheme scheme = Scheme::LBT;
    DeliveryMode mode = DeliveryMode::BEST_EFFORT;

    void validate() const {
        if (r_I_grid.empty()) throw DomainError("r_I grid is empty");
        for (size_t i = 1; i < r_I_grid.size(); ++i)
            if (r_I_grid[i] <= r_I_grid[i - 1])
                throw DomainError("r_I grid must be strictly increasing");
        if (!d_rule) throw DomainError("d_rule is not set");
    }
};

inline std::function<double(double)> default_d_rule(double factor = 0.9) {
    return [factor](double r_I) { return factor * r_I; };
}

// 120 log-spaced points spanning [0.05*R_I, 4*R_I].
inline std::vector<double> default_r_I_grid(double R_I, int points = 120) {
    std::vector<double> g(points);
    const double lo = std::log(0.05 * R_I), hi = std::log(4.0 * R_I);
    for (int i = 0; i < points; ++i)
        g[i] = std::exp(lo + (hi - lo) * i / (points - 1));
    return g;
}

inline double transport_throughput(const PrimaryNetwork& net,
                                   const SecondaryLink& link, Scheme scheme,
                                   DeliveryMode mode,
                                   const QuadratureConfig& cfg = {}) {
    return link.d * scheme_metrics(net, link, scheme, mode, cfg).ps;
}

struct InnerResult {
    double r_D = 0.0;
    double p_success = 0.0;
    bool feasible = false;
    int iterations = 0;
};

namespace opt_detail {

inline double collision_prob(const PrimaryNetwork& net,
                             const SecondaryLink& link, Scheme scheme,
                             const QuadratureConfig& cfg) {
    switch (scheme) {
        case Scheme::GENIE: return 0.0;
        case Scheme::LBT:
            return lbt_collision_success(net, link, DeliveryMode::BEST_EFFORT).pc;
        case Scheme::ELBT:
            return elbt_metrics(net, link, DeliveryMode::BEST_EFFORT, cfg).pc;
    }
    throw DomainError("unknown scheme");
}

}  // namespace opt_detail

// Smallest r_D on [0, r_I + R_p] with P_C <= zeta, found by bisection on the
// monotone feasibility indicator. P_C(r_I + R_p) = 0, so the constraint is
// always satisfiable. With check_grid set, a 200-point scan verifies no
// feasible grid point beats the returned P_S.
inline InnerResult best_detection_range(const PrimaryNetwork& net, double d,
                                        double r_I, double zeta, Scheme scheme,
                                        DeliveryMode mode,
                                        const QuadratureConfig& cfg = {},
                                        bool check_grid = false) {
    if (!(zeta > 0 && zeta < 1)) throw DomainError("zeta must be in (0,1)");
    InnerResult res;
    if (scheme == Scheme::GENIE) {
        // Perfect knowledge needs no sensing radius.
        res.r_D = 0.0;
        res.feasible = true;
        res.p_success =
            scheme_metrics(net, {d, r_I, 0.0}, scheme, mode, cfg).ps;
        return res;
    }

    const double hi_limit = r_I + net.R_p;
    auto feasible_at = [&](double r_D) {
        return opt_detail::collision_prob(net, {d, r_I, r_D}, scheme, cfg) <=
               zeta;
    };

    double lo = 0.0, hi = hi_limit;
    if (feasible_at(0.0)) {
        hi = 0.0;
    } else {
        if (!feasible_at(hi_limit))
            throw InternalConsistencyError(
                "P_C > zeta at r_D = r_I + R_p; expected exactly 0");
        const double tol = 1e-6 * hi_limit;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (feasible_at(mid))
                hi = mid;
            else
                lo = mid;
            ++res.iterations;
        }
    }
    res.r_D = hi;
    res.feasible = true;
    res.p_success = scheme_metrics(net, {d, r_I, hi}, scheme, mode, cfg).ps;

    if (check_grid) {
        for (int i = 0; i <= 200; ++i) {
            const double r_D = hi_limit * i / 200.0;
            if (!feasible_at(r_D)) continue;
            const double ps =
                scheme_metrics(net, {d, r_I, r_D}, scheme, mode, cfg).ps;
            if (ps > res.p_success + 1e-6)
                throw InternalConsistencyError(
                    "grid point r_D=" + std::to_string(r_D) +
                    " beats the bisection optimum");
        }
    }
    return res;
}

struct OptimizationResult {
    double r_I_star = 0.0;
    double r_D_star = 0.0;
    double C_star = 0.0;
    bool feasible = false;
    bool boundary = false;  // argmax at a grid end; treat r_I_star with care
    // inner-search trace
    int grid_index = -1;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    int refine_evals = 0;
};

// Exhaustive grid scan, then golden-section refinement inside the bracketing
// cell around the grid argmax (unimodality is not assumed globally). Ties
// break toward smaller r_I.
inline OptimizationResult optimize_interference_range(
    const PrimaryNetwork& net, const SweepSpec& spec, double zeta,
    const QuadratureConfig& cfg = {}) {
    spec.validate();
    if (!(zeta > 0 && zeta < 1)) throw DomainError("zeta must be in (0,1)");

    auto evaluate = [&](double r_I, double& r_D_out) {
        const double d = spec.d_rule(r_I);
        if (!(d >= 0)) throw DomainError("d_rule produced a negative distance");
        const InnerResult inner =
            best_detection_range(net, d, r_I, zeta, spec.scheme, spec.mode, cfg);
        r_D_out = inner.r_D;
        return d * inner.p_success;
    };

    OptimizationResult best;
    const size_t n = spec.r_I_grid.size();
    std::vector<double> c_vals(n);
    std::vector<double> rd_vals(n);
    size_t arg = 0;
    for (size_t i = 0; i < n; ++i) {
        c_vals[i] = evaluate(spec.r_I_grid[i], rd_vals[i]);
        if (c_vals[i] > c_vals[arg]) arg = i;
    }

    best.feasible = true;
    best.grid_index = static_cast<int>(arg);
    best.boundary = (arg == 0 || arg == n - 1) && n > 1;
    best.r_I_star = spec.r_I_grid[arg];
    best.r_D_star = rd_vals[arg];
    best.C_star = c_vals[arg];

    // Golden-section inside the bracketing cell.
    double a = spec.r_I_grid[arg == 0 ? 0 : arg - 1];
    double b = spec.r_I_grid[arg + 1 < n ? arg + 1 : arg];
    best.bracket_lo = a;
    best.bracket_hi = b;
    if (b > a) {
        const double tol = 1e-3 * net.R_I;
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double rd1, rd2;
        double f1 = evaluate(x1, rd1);
        double f2 = evaluate(x2, rd2);
        best.refine_evals = 2;
        while (b - a > tol) {
            if (f1 >= f2) {  // prefer the left: ties go to smaller r_I
                b = x2;
                x2 = x1;
                f2 = f1;
                rd2 = rd1;
                x1 = b - inv_phi * (b - a);
                f1 = evaluate(x1, rd1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                rd1 = rd2;
                x2 = a + inv_phi * (b - a);
                f2 = evaluate(x2, rd2);
            }
            ++best.refine_evals;
        }
        const double xm = f1 >= f2 ? x1 : x2;
        double rdm;
        const double fm = evaluate(xm, rdm);
        if (fm > best.C_star) {
            best.r_I_star = xm;
            best.r_D_star = rdm;
            best.C_star = fm;
        }
    }
    return best;
}

struct LoadSweepRow {
    double p = 0.0;
    Scheme scheme = Scheme::LBT;
    DeliveryMode mode = DeliveryMode::BEST_EFFORT;
    OptimizationResult result;
    std::string error;  // empty on success
};

// Sweep over traffic loads for the spec's scheme/mode, always appending the
// genie reference. Per-point failures are recorded, not fatal.
inline std::vector<LoadSweepRow> throughput_vs_load(
    const PrimaryNetwork& net_base, const SweepSpec& spec, double zeta,
    const QuadratureConfig& cfg = {}) {
    spec.validate();
    if (spec.p_grid.empty()) throw DomainError("p grid is empty");
    for (double p : spec.p_grid)
        if (!(p > 0 && p <= 1)) throw DomainError("p grid must lie in (0,1]");

    std::vector<std::pair<Scheme, DeliveryMode>> combos{{spec.scheme, spec.mode}};
    if (spec.scheme != Scheme::GENIE)
        combos.emplace_back(Scheme::GENIE, spec.mode);

    std::vector<LoadSweepRow> rows;
    for (double p : spec.p_grid) {
        const PrimaryNetwork net{net_base.lambda, p, net_base.R_p, net_base.R_I};
        for (const auto& [scheme, mode] : combos) {
            LoadSweepRow row;
            row.p = p;
            row.scheme = scheme;
            row.mode = mode;
            SweepSpec point = spec;
            point.scheme = scheme;
            point.mode = mode;
            try {
                row.result = optimize_interference_range(net, point, zeta, cfg);
            } catch (const Error& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace crpower

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "crpower/errors.hpp"

namespace crpower {

struct QuadratureConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_depth = 40;  // refinement budget: up to 256*max_depth subintervals

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0) || max_depth < 1)
            throw DomainError("invalid QuadratureConfig");
    }
};

namespace quad_detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
inline constexpr double kNodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
inline constexpr double kWeightK[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
// Gauss weights for nodes 0,2,4,6 (odd Kronrod nodes carry no Gauss weight).
inline constexpr double kWeightG[4] = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
    0.129484966168869693};

template <class F>
inline double gk15(const F& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double resk = kWeightK[0] * f0;
    double resg = kWeightG[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double x = h * kNodes[i];
        const double fs = f(c - x) + f(c + x);
        resk += kWeightK[i] * fs;
        if (i % 2 == 0) resg += kWeightG[i / 2] * fs;
    }
    resk *= h;
    resg *= h;
    err = std::abs(resk - resg);
    return resk;
}

struct Piece {
    double a, b, val, err;
};

}  // namespace quad_detail

// Integrate f over [a,b]: split at the supplied breakpoints (integrand
// kinks), then refine globally, always bisecting the piece with the largest
// error estimate. Pieces narrower than the floating-point resolution of
// their endpoints are accepted as-is, which keeps endpoint singularities
// from exhausting the budget.
template <class F>
inline double integrate(const F& f, double a, double b,
                        const std::vector<double>& breakpoints = {},
                        const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(b > a)) return 0.0;

    std::vector<double> cuts{a, b};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<quad_detail::Piece> pieces;
    pieces.reserve(cuts.size() + 64);
    double total = 0, err_total = 0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        quad_detail::Piece p{cuts[i], cuts[i + 1], 0, 0};
        p.val = quad_detail::gk15(f, p.a, p.b, p.err);
        total += p.val;
        err_total += p.err;
        pieces.push_back(p);
    }

    const size_t max_pieces =
        256 * static_cast<size_t>(cfg.max_depth) + pieces.size();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    while (true) {
        const double tol =
            std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (err_total <= tol || pieces.size() >= max_pieces) break;

        // split the refinable piece with the largest error estimate
        size_t worst = pieces.size();
        double worst_err = 0;
        for (size_t i = 0; i < pieces.size(); ++i) {
            const auto& p = pieces[i];
            const double width_floor =
                8 * eps * std::max({std::abs(p.a), std::abs(p.b), 1e-12});
            if (p.b - p.a <= width_floor) continue;
            if (p.err > worst_err) {
                worst_err = p.err;
                worst = i;
            }
        }
        if (worst == pieces.size()) break;  // nothing left to refine

        const quad_detail::Piece old = pieces[worst];
        const double mid = 0.5 * (old.a + old.b);
        quad_detail::Piece left{old.a, mid, 0, 0}, right{mid, old.b, 0, 0};
        left.val = quad_detail::gk15(f, left.a, left.b, left.err);
        right.val = quad_detail::gk15(f, right.a, right.b, right.err);
        total += left.val + right.val - old.val;
        err_total += left.err + right.err - old.err;
        pieces[worst] = left;
        pieces.push_back(right);
    }

    const double tol_final =
        std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (err_total > 100 * tol_final)
        throw ConvergenceError("quadrature did not converge", err_total);
    return total;
}

}  // namespace crpower

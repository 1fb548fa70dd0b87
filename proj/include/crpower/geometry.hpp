#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "crpower/errors.hpp"
#include "crpower/quadrature.hpp"

// Exact piecewise circle-overlap geometry. Every analytic probability in this
// library reduces to the four quantities below:
//
//   lens_area(d,r1,r2)        common area of two disks centered d apart
//   annulus_angle_outside     angular measure of a circle outside a disk
//   disk_convolution(r,Rp,rI) mass of the receiver-placement kernel over a
//                             disk of radius r around the origin
//   clear_zone_mass           same kernel mass over the zone within
//                             rI+Rp of A but outside the disk of radius R_I
//                             around B (the whole zone, closed form + single
//                             radial integral)
//   sensing_zone_mass         kernel mass over that zone truncated to a
//                             sensing radius rho around A (radial integral
//                             with an angular weight)
//
// The kernel S_I(r,Rp,rI)/(pi Rp^2) is the probability that a transmitter at
// distance r from A places its receiver (uniform in its Rp-disk) within rI
// of A.

namespace crpower {

inline constexpr double kPi = std::numbers::pi;

namespace geo_detail {

// Clamp an inverse-trig argument that should lie in [-1,1]. Excess beyond
// float drift means a formula bug upstream, not bad input.
inline double clamp_unit(double x) {
    if (x > 1.0) {
        if (x > 1.0 + 1e-9)
            throw InternalConsistencyError("inverse-trig argument " +
                                           std::to_string(x) + " > 1");
        return 1.0;
    }
    if (x < -1.0) {
        if (x < -1.0 - 1e-9)
            throw InternalConsistencyError("inverse-trig argument " +
                                           std::to_string(x) + " < -1");
        return -1.0;
    }
    return x;
}

inline void require_nonneg(double v, const char* name) {
    if (!(v >= 0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be >= 0 and finite");
}

}  // namespace geo_detail

// Common area of disks (A,r1) and (B,r2) with |AB| = d. Arguments are
// ordered internally so the symmetry in (r1, r2) is exact.
inline double lens_area(double d, double r1, double r2) {
    geo_detail::require_nonneg(d, "d");
    geo_detail::require_nonneg(r1, "r1");
    geo_detail::require_nonneg(r2, "r2");
    if (r1 > r2) std::swap(r1, r2);
    const double rmin = r1;
    if (d <= std::abs(r1 - r2)) return kPi * rmin * rmin;
    if (d >= r1 + r2) return 0.0;
    const double a1 =
        geo_detail::clamp_unit((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
    const double a2 =
        geo_detail::clamp_unit((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
    const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    const double raw = r1 * r1 * std::acos(a1) + r2 * r2 * std::acos(a2) -
                       0.5 * std::sqrt(std::max(k, 0.0));
    // The arccos terms lose ~sqrt(eps) accuracy at the tangency boundaries;
    // the exact value lies in [0, pi*rmin^2].
    return std::clamp(raw, 0.0, kPi * rmin * rmin);
}

// Total angular measure at radius r around the origin A lying outside the
// disk of radius R centered at distance d from A. 2*pi when the circle
// misses the disk, 0 when it lies inside, 2*(pi - theta0(r)) in between.
// d = 0 needs its own branch: theta0 divides by d*r.
inline double annulus_angle_outside(double r, double d, double R) {
    geo_detail::require_nonneg(r, "r");
    geo_detail::require_nonneg(d, "d");
    geo_detail::require_nonneg(R, "R");
    if (d == 0.0) return r < R ? 0.0 : 2 * kPi;
    if (r == 0.0) return d < R ? 0.0 : 2 * kPi;
    if (r >= d + R || r <= d - R) return 2 * kPi;
    if (r <= R - d) return 0.0;
    const double theta0 =
        std::acos(geo_detail::clamp_unit((d * d + r * r - R * R) / (2 * d * r)));
    return 2 * (kPi - theta0);
}

// Kernel mass over the disk of radius r around A:
//   2*pi * int_0^r t * S_I(t,Rp,rI)/(pi Rp^2) dt
// in closed form (three cases). Saturates at pi*rI^2 for r >= Rp+rI.
inline double disk_convolution(double r, double R_p, double r_I) {
    if (!(r >= 0) || !(R_p > 0) || !(r_I > 0))
        throw DomainError("disk_convolution requires r >= 0, R_p > 0, r_I > 0");
    if (r == 0.0) return 0.0;
    if (r <= std::abs(R_p - r_I))
        return kPi * r * r * std::min(1.0, (r_I * r_I) / (R_p * R_p));
    if (r >= R_p + r_I) return kPi * r_I * r_I;
    const double c1 =
        geo_detail::clamp_unit((R_p * R_p + r * r - r_I * r_I) / (2 * R_p * r));
    const double c2 =
        geo_detail::clamp_unit((r_I * r_I + r * r - R_p * R_p) / (2 * r_I * r));
    const double s1 =
        geo_detail::clamp_unit((r_I * r_I + R_p * R_p - r * r) / (2 * r_I * R_p));
    const double k =
        (r_I + R_p + r) * (r_I + R_p - r) * (r_I - R_p + r) * (R_p - r_I + r);
    return 0.5 * kPi * r_I * r_I + r * r * std::acos(c1) +
           (r_I * r_I * r * r / (R_p * R_p)) * std::acos(c2) -
           r_I * r_I * std::asin(s1) -
           (r * r + r_I * r_I + R_p * R_p) / (4 * R_p * R_p) *
               std::sqrt(std::max(k, 0.0));
}

namespace geo_detail {

// Receiver-placement kernel: probability that a transmitter at distance r
// from A has its receiver within r_I of A.
inline double kernel(double r, double R_p, double r_I) {
    return lens_area(r, R_p, r_I) / (kPi * R_p * R_p);
}

inline std::vector<double> kernel_breaks(double R_p, double r_I) {
    return {std::abs(R_p - r_I), R_p + r_I};
}

// The zone masses are consumed on the scale of the full kernel mass
// pi*r_I^2; resolving a razor-thin residual piece below that scale buys
// nothing downstream and can chase float noise at sqrt-type endpoints.
inline QuadratureConfig mass_scaled(const QuadratureConfig& cfg, double r_I) {
    QuadratureConfig out = cfg;
    out.abs_tol =
        std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * kPi * r_I * r_I);
    return out;
}

}  // namespace geo_detail

// Kernel mass over the zone within rI+Rp of A but outside disk(B,R_I),
// reduced to a single radial integral (two cases on R_I vs d, three subcases
// each on where rI+Rp falls relative to the disk around B).
inline double clear_zone_mass(double d, double r_I, double R_p, double R_I,
                              const QuadratureConfig& cfg = {}) {
    if (!(r_I > 0) || !(R_p > 0) || !(R_I > 0) || !(d >= 0))
        throw DomainError("clear_zone_mass requires positive radii, d >= 0");
    const double rho = r_I + R_p;
    const double full = kPi * r_I * r_I;  // disk_convolution(rho) exactly

    if (d == 0.0) {
        if (rho <= R_I) return 0.0;
        return full - disk_convolution(R_I, R_p, r_I);
    }

    const auto masked = [&](double r) {
        const double t0 = std::acos(geo_detail::clamp_unit(
            (d * d + r * r - R_I * R_I) / (2 * d * r)));
        return geo_detail::kernel(r, R_p, r_I) * r * t0;
    };
    const auto breaks = geo_detail::kernel_breaks(R_p, r_I);
    const QuadratureConfig qcfg = geo_detail::mass_scaled(cfg, r_I);

    if (R_I >= d) {
        if (rho <= R_I - d) return 0.0;
        const double hi = std::min(rho, R_I + d);
        const double inner = disk_convolution(R_I - d, R_p, r_I);
        return full - inner - 2 * integrate(masked, R_I - d, hi, breaks, qcfg);
    }
    if (rho <= d - R_I) return full;
    const double hi = std::min(rho, d + R_I);
    return full - 2 * integrate(masked, d - R_I, hi, breaks, qcfg);
}

// Kernel mass over the same zone truncated to radius rho around A, i.e. over
// {within min(rho, rI+Rp) of A} and {outside disk(B,R_I)}, using the angular
// weight annulus_angle_outside. Saturates to clear_zone_mass for
// rho >= rI+Rp.
inline double sensing_zone_mass(double d, double rho, double r_I, double R_p,
                                double R_I, const QuadratureConfig& cfg = {}) {
    if (!(rho >= 0))
        throw DomainError("sensing_zone_mass requires rho >= 0");
    if (!(r_I > 0) || !(R_p > 0) || !(R_I > 0) || !(d >= 0))
        throw DomainError("sensing_zone_mass requires positive radii, d >= 0");
    const double hi = std::min(rho, r_I + R_p);
    if (hi <= 0.0) return 0.0;
    const auto f = [&](double r) {
        return geo_detail::kernel(r, R_p, r_I) * r *
               annulus_angle_outside(r, d, R_I);
    };
    std::vector<double> breaks = geo_detail::kernel_breaks(R_p, r_I);
    breaks.push_back(std::abs(d - R_I));
    breaks.push_back(d + R_I);
    return integrate(f, 0.0, hi, breaks, geo_detail::mass_scaled(cfg, r_I));
}

}  // namespace crpower

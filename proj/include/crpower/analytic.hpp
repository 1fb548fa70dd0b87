#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crpower/geometry.hpp"
#include "crpower/model.hpp"

// Closed-form MAC-layer probabilities for one secondary link over a Poisson
// primary network under the disk model. A is the secondary transmitter, B
// the receiver. Events, with tx/rx ranging over *active* primaries:
//
//   opportunity (H0):  no active receiver within r_I of A,
//                      and no active transmitter within R_I of B
//   LBT transmits      iff no active transmitter within r_D of A
//   ELBT transmits     iff the RTS/CTS exchange succeeds: nothing within r_D
//                      of A, nothing within R_I of B (RTS heard), nothing
//                      within R_I of A (CTS heard)

namespace crpower {

struct MacMetrics {
    double pf;  // false alarm  P{decide busy | opportunity}
    double pmd; // miss detect  P{decide idle | no opportunity}
    double pc;  // collision    P{transmit | active rx within r_I of A}
    double ps;  // success      P{data delivered (+ACK if guaranteed)}
};

struct RocPoint {
    double r_D;
    double pf;
    double pd;  // 1 - pmd
};

using RocCurve = std::vector<RocPoint>;

namespace analytic_detail {

constexpr double kDegenerate = 1e-12;

// Clamp to [0,1] absorbing float drift; larger excursions are formula bugs.
inline double clamp01(double x, const char* what) {
    if (x < 0.0) {
        if (x < -1e-9)
            throw InternalConsistencyError(std::string(what) + " = " +
                                           std::to_string(x) + " below 0");
        return 0.0;
    }
    if (x > 1.0) {
        if (x > 1.0 + 1e-9)
            throw InternalConsistencyError(std::string(what) + " = " +
                                           std::to_string(x) + " above 1");
        return 1.0;
    }
    return x;
}

}  // namespace analytic_detail

// P{no active transmitter within radius r of a fixed point}.
inline double prob_no_tx_within(const PrimaryNetwork& net, double r) {
    return std::exp(-net.traffic_load() * kPi * r * r);
}

// P{no active tx within r_a of A and none within R_I of B} (union of the
// two disks is free of transmitters).
inline double prob_joint_clear(const PrimaryNetwork& net,
                               const SecondaryLink& link, double r_a) {
    const double pl = net.traffic_load();
    const double s = lens_area(link.d, r_a, net.R_I);
    return std::exp(-pl * (kPi * (r_a * r_a + net.R_I * net.R_I) - s));
}

// Probability of spectrum opportunity.
inline double prob_opportunity(const PrimaryNetwork& net,
                               const SecondaryLink& link,
                               const QuadratureConfig& cfg = {}) {
    const double q = clear_zone_mass(link.d, link.r_I, net.R_p, net.R_I, cfg);
    const double pl = net.traffic_load();
    return std::exp(-pl * (q + kPi * net.R_I * net.R_I));
}

struct OpportunityBounds {
    double lower;  // exp(-p lambda pi (r_I^2 + R_I^2)), strict
    double upper;  // exp(-p lambda pi r_I^2), attained iff r_I >= d+R_I+R_p
};

inline OpportunityBounds opportunity_bounds(const PrimaryNetwork& net,
                                            const SecondaryLink& link) {
    const double pl = net.traffic_load();
    return {std::exp(-pl * kPi *
                     (link.r_I * link.r_I + net.R_I * net.R_I)),
            std::exp(-pl * kPi * link.r_I * link.r_I)};
}

struct ErrorProbs {
    double pf;
    double pmd;
};

// LBT false alarm and miss detection.
inline ErrorProbs lbt_error_probs(const PrimaryNetwork& net,
                                  const SecondaryLink& link,
                                  const QuadratureConfig& cfg = {}) {
    using analytic_detail::clamp01;
    const double pl = net.traffic_load();
    const double rD = link.r_D;
    const double lens_dr = lens_area(link.d, rD, net.R_I);
    const double w = sensing_zone_mass(link.d, rD, link.r_I, net.R_p, net.R_I, cfg);
    const double q = clear_zone_mass(link.d, link.r_I, net.R_p, net.R_I, cfg);

    const double pf =
        1.0 - std::exp(-pl * (kPi * rD * rD - lens_dr - w));

    const double pr_h0 = std::exp(-pl * (q + kPi * net.R_I * net.R_I));
    const double denom = 1.0 - pr_h0;
    if (denom < analytic_detail::kDegenerate)
        throw DegenerateConditioningError(
            "P_MD undefined: opportunities almost sure");
    const double numer =
        std::exp(-pl * kPi * rD * rD) -
        std::exp(-pl * (kPi * (rD * rD + net.R_I * net.R_I) - lens_dr + (q - w)));
    return {clamp01(pf, "P_F"), clamp01(numer / denom, "P_MD")};
}

struct CollisionSuccess {
    double pc;
    double ps;
};

// LBT collision and success probabilities.
inline CollisionSuccess lbt_collision_success(const PrimaryNetwork& net,
                                              const SecondaryLink& link,
                                              DeliveryMode mode) {
    using analytic_detail::clamp01;
    const double pl = net.traffic_load();
    const double denom = 1.0 - std::exp(-pl * kPi * link.r_I * link.r_I);
    if (denom < analytic_detail::kDegenerate)
        throw DegenerateConditioningError(
            "P_C undefined: active receivers within r_I almost never occur");
    const double conv = disk_convolution(link.r_D, net.R_p, link.r_I);
    const double pc = std::exp(-pl * kPi * link.r_D * link.r_D) *
                      (1.0 - std::exp(-pl * (kPi * link.r_I * link.r_I - conv))) /
                      denom;
    const double r_a =
        mode == DeliveryMode::GUARANTEED ? link.r_E(net) : link.r_D;
    const double ps = prob_joint_clear(net, link, r_a);
    return {clamp01(pc, "P_C"), clamp01(ps, "P_S")};
}

inline MacMetrics lbt_metrics(const PrimaryNetwork& net,
                              const SecondaryLink& link, DeliveryMode mode,
                              const QuadratureConfig& cfg = {}) {
    const auto [pf, pmd] = lbt_error_probs(net, link, cfg);
    const auto [pc, ps] = lbt_collision_success(net, link, mode);
    return {pf, pmd, pc, ps};
}

// ELBT metrics. r_D enters only through r_E = max(r_D, R_I); P_S does not
// depend on the delivery mode (CTS reception already implies a clear ACK
// path).
inline MacMetrics elbt_metrics(const PrimaryNetwork& net,
                               const SecondaryLink& link, DeliveryMode /*mode*/,
                               const QuadratureConfig& cfg = {}) {
    using analytic_detail::clamp01;
    const double pl = net.traffic_load();
    const double rE = link.r_E(net);
    const double lens_er = lens_area(link.d, rE, net.R_I);
    const double w = sensing_zone_mass(link.d, rE, link.r_I, net.R_p, net.R_I, cfg);
    const double q = clear_zone_mass(link.d, link.r_I, net.R_p, net.R_I, cfg);

    const double pf = 1.0 - std::exp(-pl * (kPi * rE * rE - lens_er - w));
    const double joint = prob_joint_clear(net, link, rE);
    const double pr_h0 = std::exp(-pl * (q + kPi * net.R_I * net.R_I));

    const double h1 = 1.0 - pr_h0;
    if (h1 < analytic_detail::kDegenerate)
        throw DegenerateConditioningError(
            "P_MD undefined: opportunities almost sure");
    const double rx_any = 1.0 - std::exp(-pl * kPi * link.r_I * link.r_I);
    if (rx_any < analytic_detail::kDegenerate)
        throw DegenerateConditioningError(
            "P_C undefined: active receivers within r_I almost never occur");

    const double residual_mass = 1.0 - std::exp(-pl * (q - w));
    const double pmd = joint * residual_mass / h1;
    const double pc = joint * residual_mass / rx_any;
    return {clamp01(pf, "P_F"), clamp01(pmd, "P_MD"), clamp01(pc, "P_C"),
            clamp01(joint, "P_S")};
}

// Genie reference: every opportunity is detected, no false alarms, no
// collisions. Best-effort succeeds on every opportunity; guaranteed delivery
// still needs the ACK path clear around both endpoints.
inline MacMetrics genie_metrics(const PrimaryNetwork& net,
                                const SecondaryLink& link, DeliveryMode mode,
                                const QuadratureConfig& cfg = {}) {
    const double ps = mode == DeliveryMode::BEST_EFFORT
                          ? prob_opportunity(net, link, cfg)
                          : prob_joint_clear(net, link, net.R_I);
    return {0.0, 0.0, 0.0, ps};
}

inline MacMetrics scheme_metrics(const PrimaryNetwork& net,
                                 const SecondaryLink& link, Scheme scheme,
                                 DeliveryMode mode,
                                 const QuadratureConfig& cfg = {}) {
    switch (scheme) {
        case Scheme::LBT: return lbt_metrics(net, link, mode, cfg);
        case Scheme::ELBT: return elbt_metrics(net, link, mode, cfg);
        case Scheme::GENIE: return genie_metrics(net, link, mode, cfg);
    }
    throw DomainError("unknown scheme");
}

// ROC over a strictly increasing detection-range grid.
inline RocCurve roc_curve(const PrimaryNetwork& net,
                          const SecondaryLink& link_base,
                          const std::vector<double>& r_D_grid, Scheme scheme,
                          const QuadratureConfig& cfg = {}) {
    if (scheme == Scheme::GENIE)
        throw DomainError("ROC is not defined for the genie scheme");
    RocCurve curve;
    curve.reserve(r_D_grid.size());
    double prev = -1.0;
    for (size_t i = 0; i < r_D_grid.size(); ++i) {
        const double rd = r_D_grid[i];
        if (rd <= prev)
            throw DomainError("r_D grid must be strictly increasing (index " +
                              std::to_string(i) + ")");
        prev = rd;
        const SecondaryLink link = link_base.with_r_D(rd);
        const std::string where =
            "ROC point " + std::to_string(i) + " (r_D=" + std::to_string(rd) + "): ";
        try {
            if (scheme == Scheme::LBT) {
                const auto [pf, pmd] = lbt_error_probs(net, link, cfg);
                curve.push_back({rd, pf, 1.0 - pmd});
            } else {
                const auto m = elbt_metrics(net, link, DeliveryMode::BEST_EFFORT, cfg);
                curve.push_back({rd, m.pf, 1.0 - m.pmd});
            }
        } catch (const ConvergenceError& e) {
            throw ConvergenceError(where + e.what(), e.residual());
        } catch (const DegenerateConditioningError& e) {
            throw DegenerateConditioningError(where + e.what());
        }
    }
    return curve;
}

}  // namespace crpower

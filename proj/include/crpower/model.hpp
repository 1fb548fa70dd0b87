#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "crpower/errors.hpp"

namespace crpower {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {
inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}
inline void require_finite(double x, const std::string& name) {
    if (!std::isfinite(x)) throw DomainError(name + " must be finite");
}
}  // namespace detail

// Primary network: homogeneous Poisson field of potential transmitters with
// per-slot traffic probability p. R_p bounds the transmitter-receiver
// distance; R_I is the range within which an active primary transmitter
// disrupts secondary reception.
struct PrimaryNetwork {
    double lambda;  // node density per unit area
    double p;       // per-slot transmit probability
    double R_p;     // primary transmission range
    double R_I;     // primary interference range

    PrimaryNetwork(double lambda_, double p_, double R_p_, double R_I_)
        : lambda(lambda_), p(p_), R_p(R_p_), R_I(R_I_) {
        detail::require_finite(lambda, "lambda");
        detail::require_finite(p, "p");
        detail::require_finite(R_p, "R_p");
        detail::require_finite(R_I, "R_I");
        detail::require(lambda > 0, "lambda must be > 0");
        detail::require(p >= 0 && p <= 1, "p must be in [0,1]");
        detail::require(R_p > 0, "R_p must be > 0");
        detail::require(R_p <= R_I, "R_p must not exceed R_I");
    }

    // Density of active transmitters (and of active receivers) per slot.
    double traffic_load() const { return p * lambda; }
};

// One secondary link: transmitter A at the origin, receiver B at distance d.
// r_E is derived on demand, never stored.
struct SecondaryLink {
    double d;    // A-B distance
    double r_I;  // secondary interference range
    double r_D;  // detection range

    SecondaryLink(double d_, double r_I_, double r_D_)
        : d(d_), r_I(r_I_), r_D(r_D_) {
        detail::require_finite(d, "d");
        detail::require_finite(r_I, "r_I");
        detail::require_finite(r_D, "r_D");
        detail::require(d >= 0, "d must be >= 0");
        detail::require(r_I > 0, "r_I must be > 0");
        detail::require(r_D >= 0, "r_D must be >= 0");
    }

    SecondaryLink with_r_D(double new_r_D) const { return {d, r_I, new_r_D}; }

    // Effective range governing ACK/CTS reception events.
    double r_E(const PrimaryNetwork& net) const { return std::max(r_D, net.R_I); }
};

struct InterferenceConstraint {
    double zeta;  // maximum collision probability
    double eta;   // maximum tolerable interference power; enters only through
                  // the power<->radius mapping, kept for completeness

    explicit InterferenceConstraint(double zeta_, double eta_ = 0.0)
        : zeta(zeta_), eta(eta_) {
        detail::require_finite(zeta, "zeta");
        detail::require(zeta > 0 && zeta < 1, "zeta must be in (0,1)");
    }
};

struct PowerModel {
    double alpha;  // path-loss exponent
    double P_tx;   // primary transmit power
    double p_tx;   // secondary transmit power
    double tau_B;  // interference threshold at a receiver

    PowerModel(double alpha_, double P_tx_, double p_tx_, double tau_B_)
        : alpha(alpha_), P_tx(P_tx_), p_tx(p_tx_), tau_B(tau_B_) {
        detail::require_finite(alpha, "alpha");
        detail::require(alpha > 2, "alpha must be > 2");
        detail::require(P_tx > 0 && p_tx > 0 && tau_B > 0,
                        "powers must be > 0");
    }
};

enum class Scheme { LBT, ELBT, GENIE };
enum class DeliveryMode { GUARANTEED, BEST_EFFORT };

inline std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::LBT: return "lbt";
        case Scheme::ELBT: return "elbt";
        case Scheme::GENIE: return "genie";
    }
    return "?";
}

inline std::string to_string(DeliveryMode m) {
    return m == DeliveryMode::GUARANTEED ? "guaranteed" : "best_effort";
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "lbt") return Scheme::LBT;
    if (s == "elbt") return Scheme::ELBT;
    if (s == "genie") return Scheme::GENIE;
    throw DomainError("unknown scheme: " + s);
}

inline DeliveryMode mode_from_string(const std::string& s) {
    if (s == "guaranteed" || s == "g") return DeliveryMode::GUARANTEED;
    if (s == "best_effort" || s == "be") return DeliveryMode::BEST_EFFORT;
    throw DomainError("unknown delivery mode: " + s);
}

// Disk-model radius reached by power p_tx against threshold tau:
// r = (p_tx/tau)^(1/alpha). Strictly increasing in p_tx.
inline double power_to_radius(double p_tx, double tau, double alpha) {
    detail::require(p_tx > 0, "p_tx must be > 0");
    detail::require(tau > 0, "tau must be > 0");
    detail::require(alpha > 0, "alpha must be > 0");
    return std::pow(p_tx / tau, 1.0 / alpha);
}

// Inverse of power_to_radius: p = tau * r^alpha.
inline double radius_to_power(double r, double tau, double alpha) {
    detail::require(r > 0, "r must be > 0");
    detail::require(tau > 0, "tau must be > 0");
    detail::require(alpha > 0, "alpha must be > 0");
    return tau * std::pow(r, alpha);
}

}  // namespace crpower

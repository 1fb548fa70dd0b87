#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "crpower/analytic.hpp"
#include "crpower/model.hpp"
#include "crpower/rng.hpp"

// Brute-force oracle for the closed forms: samples primary-network
// realizations and evaluates the disk-model event predicates by direct
// distance checks. No analytic code path is reused.
//
// A sits at the origin, B at (d, 0). Each trial is one independent slot.
// Trials use counter-based RNG substreams keyed by (seed, trial index), so
// estimates are bit-identical for a given (seed, trials, parameters)
// regardless of the worker count.

namespace crpower {

struct Scene {
    struct Entry {
        double tx_x, tx_y;
        bool active;
        double rx_x, rx_y;  // paired receiver, uniform in the R_p-disk
    };
    std::vector<Entry> entries;
    double half_side;  // scene window is [-half_side, half_side]^2 around A
};

struct SimConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double guard_margin = -1.0;     // derived as d + r_I + R_p + R_I when < 0
    double sir_window_half = -1.0;  // SIR-mode half window; derived when < 0
    unsigned threads = 1;

    void validate() const {
        if (trials < 1) throw DomainError("trials must be >= 1");
        if (threads < 1) throw DomainError("threads must be >= 1");
    }
};

struct EnergyDetectorConfig {
    double alpha;  // path-loss exponent
    double P_tx;   // primary transmit power
    double tau_B;  // outage threshold at the secondary receiver

    void validate() const {
        if (!(alpha > 0) || !(P_tx > 0) || !(tau_B > 0))
            throw DomainError("EnergyDetectorConfig fields must be positive");
    }
};

namespace mc_detail {

inline void sample_receiver(CounterRng& rng, double R_p, double tx_x,
                            double tx_y, double& rx_x, double& rx_y) {
    const double ang = rng.uniform(0.0, 2 * kPi);
    const double rad = R_p * std::sqrt(rng.next_unit());  // uniform over area
    rx_x = tx_x + rad * std::cos(ang);
    rx_y = tx_y + rad * std::sin(ang);
}

inline double guard_for(const PrimaryNetwork& net, const SecondaryLink& link,
                        const SimConfig& cfg) {
    const double floor = link.d + link.r_I + net.R_p + net.R_I;
    if (cfg.guard_margin < 0) return floor;
    if (cfg.guard_margin < floor)
        throw DomainError("guard_margin below d + r_I + R_p + R_I");
    return cfg.guard_margin;
}

inline double eval_radius(const PrimaryNetwork& net, const SecondaryLink& link) {
    return std::max({link.r_I + net.R_p, link.d + net.R_I, link.r_E(net),
                     link.r_D});
}

inline double sir_floor(const PrimaryNetwork& net, const SecondaryLink& link) {
    return std::max(link.r_I + net.R_p, link.d + net.R_I);
}

// SIR-mode window: the disk events need coverage out to r_I + R_p and
// d + R_I; the aggregate power sums have unbounded support, so the window is
// sized to keep the mean truncated tail 2*pi*p*lambda*P_tx/half below 0.8%
// of tau_B (10*R_I as a floor). The validation suite checks that halving
// this window moves the ROC rates by less than one standard error.
inline double sir_window_half(const PrimaryNetwork& net,
                              const SecondaryLink& link,
                              const EnergyDetectorConfig& det) {
    const double tail_half =
        2.0 * kPi * net.traffic_load() * det.P_tx / (0.008 * det.tau_B);
    return std::max({10.0 * net.R_I, sir_floor(net, link), tail_half});
}

inline double inverse_power(double dist2, double P_tx, double alpha) {
    if (alpha == 3.0) return P_tx / (dist2 * std::sqrt(dist2));
    return P_tx * std::pow(dist2, -0.5 * alpha);
}

// One SIR trial: aggregate received powers at A and B over the active field
// plus the receiver-proximity indicator. Receivers are only sampled for
// transmitters within r_I + R_p of A; farther ones cannot place a receiver
// within r_I.
struct SirTrial {
    double power_a = 0.0, power_b = 0.0;
    bool rx_near_a = false;
};

inline SirTrial run_sir_trial(const PrimaryNetwork& net,
                              const SecondaryLink& link, double half_side,
                              double P_tx, double alpha, CounterRng& rng,
                              double restrict_half = -1.0,
                              SirTrial* restricted = nullptr) {
    SirTrial out;
    const double area = 4.0 * half_side * half_side;
    const std::uint64_t n = rng.poisson(net.traffic_load() * area);
    const double reach = link.r_I + net.R_p;
    const double reach2 = reach * reach;
    const double r_I2 = link.r_I * link.r_I;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = rng.uniform(-half_side, half_side);
        const double y = rng.uniform(-half_side, half_side);
        const double da2 = x * x + y * y;
        const double dbx = x - link.d;
        const double db2 = dbx * dbx + y * y;
        const double wa = inverse_power(da2, P_tx, alpha);
        const double wb = inverse_power(db2, P_tx, alpha);
        out.power_a += wa;
        out.power_b += wb;
        bool rx_near = false;
        if (da2 <= reach2) {
            double rx_x, rx_y;
            sample_receiver(rng, net.R_p, x, y, rx_x, rx_y);
            rx_near = rx_x * rx_x + rx_y * rx_y <= r_I2;
            out.rx_near_a = out.rx_near_a || rx_near;
        }
        if (restricted && std::max(std::abs(x), std::abs(y)) <= restrict_half) {
            restricted->power_a += wa;
            restricted->power_b += wb;
            restricted->rx_near_a = restricted->rx_near_a || rx_near;
        }
    }
    return out;
}

}  // namespace mc_detail

// Full scene: potential transmitters form a Poisson(lambda) field over the
// window, each active with probability p, each paired with a receiver
// uniform in its R_p-disk.
inline Scene sample_scene(const PrimaryNetwork& net, double half_side,
                          CounterRng& rng) {
    Scene scene;
    scene.half_side = half_side;
    const double area = 4.0 * half_side * half_side;
    const std::uint64_t n = rng.poisson(net.lambda * area);
    scene.entries.resize(n);
    for (auto& e : scene.entries) {
        e.tx_x = rng.uniform(-half_side, half_side);
        e.tx_y = rng.uniform(-half_side, half_side);
        e.active = rng.bernoulli(net.p);
        mc_detail::sample_receiver(rng, net.R_p, e.tx_x, e.tx_y, e.rx_x, e.rx_y);
    }
    return scene;
}

// Thinned scene holding only the active transmitters (a Poisson(p*lambda)
// field by the coloring theorem) with their receivers. This is the sampler
// the estimators run on; sample_scene stays the reference for scene-level
// statistics and dumps.
inline Scene sample_active_scene(const PrimaryNetwork& net, double half_side,
                                 CounterRng& rng) {
    Scene scene;
    scene.half_side = half_side;
    const double area = 4.0 * half_side * half_side;
    const std::uint64_t n = rng.poisson(net.traffic_load() * area);
    scene.entries.resize(n);
    for (auto& e : scene.entries) {
        e.tx_x = rng.uniform(-half_side, half_side);
        e.tx_y = rng.uniform(-half_side, half_side);
        e.active = true;
        mc_detail::sample_receiver(rng, net.R_p, e.tx_x, e.tx_y, e.rx_x, e.rx_y);
    }
    return scene;
}

struct EventRecord {
    bool rx_within_r_I_of_A = false;
    bool tx_within_R_I_of_B = false;
    bool tx_within_r_D_of_A = false;
    bool tx_within_R_I_of_A = false;

    bool opportunity() const {
        return !rx_within_r_I_of_A && !tx_within_R_I_of_B;
    }
};

// Direct distance checks over active pairs only.
inline EventRecord evaluate_events(const Scene& scene,
                                   const SecondaryLink& link, double R_I) {
    EventRecord ev;
    const double r_I2 = link.r_I * link.r_I;
    const double r_D2 = link.r_D * link.r_D;
    const double R_I2 = R_I * R_I;
    for (const auto& e : scene.entries) {
        if (!e.active) continue;
        const double da2 = e.tx_x * e.tx_x + e.tx_y * e.tx_y;
        const double dbx = e.tx_x - link.d;
        const double db2 = dbx * dbx + e.tx_y * e.tx_y;
        if (da2 <= r_D2) ev.tx_within_r_D_of_A = true;
        if (da2 <= R_I2) ev.tx_within_R_I_of_A = true;
        if (db2 <= R_I2) ev.tx_within_R_I_of_B = true;
        const double ra2 = e.rx_x * e.rx_x + e.rx_y * e.rx_y;
        if (ra2 <= r_I2) ev.rx_within_r_I_of_A = true;
    }
    return ev;
}

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
    std::uint64_t count = 0;       // numerator
    std::uint64_t conditioned = 0; // denominator (conditioning-event count)

    static Estimate from_counts(std::uint64_t k, std::uint64_t n) {
        Estimate e;
        e.count = k;
        e.conditioned = n;
        if (n > 0) {
            e.value = static_cast<double>(k) / static_cast<double>(n);
            e.std_err = std::sqrt(std::max(e.value * (1.0 - e.value), 0.0) /
                                  static_cast<double>(n));
        }
        return e;
    }
};

struct MacEstimate {
    Estimate pf, pmd, pc, ps;
    std::uint64_t trials = 0;
    std::uint64_t n_h0 = 0, n_h1 = 0, n_rx = 0;
};

namespace mc_detail {

struct Counters {
    std::uint64_t h0 = 0, h1 = 0, rx = 0;
    std::uint64_t false_alarm = 0, miss = 0, collide = 0, success = 0;

    void merge(const Counters& o) {
        h0 += o.h0;
        h1 += o.h1;
        rx += o.rx;
        false_alarm += o.false_alarm;
        miss += o.miss;
        collide += o.collide;
        success += o.success;
    }
};

inline void run_trial(const PrimaryNetwork& net, const SecondaryLink& link,
                      DeliveryMode mode, Scheme scheme, double half_side,
                      std::uint64_t seed, std::uint64_t trial, Counters& c) {
    CounterRng rng(seed, trial);
    const Scene scene = sample_active_scene(net, half_side, rng);
    const EventRecord ev = evaluate_events(scene, link, net.R_I);

    const bool h0 = ev.opportunity();
    const bool clear_b = !ev.tx_within_R_I_of_B;
    const bool clear_ack = !ev.tx_within_r_D_of_A && !ev.tx_within_R_I_of_A;

    bool transmits = false;
    bool succeeds = false;
    switch (scheme) {
        case Scheme::LBT:
            transmits = !ev.tx_within_r_D_of_A;
            succeeds = mode == DeliveryMode::GUARANTEED
                           ? (clear_ack && clear_b)
                           : (transmits && clear_b);
            break;
        case Scheme::ELBT:
            // RTS heard at B, CTS heard at A, nothing within r_D of A.
            transmits = clear_ack && clear_b;
            succeeds = transmits;  // CTS reception implies data delivery
            break;
        case Scheme::GENIE:
            transmits = h0;
            // Guaranteed delivery counts the joint clear event around both
            // endpoints, matching the analytic reference curve.
            succeeds = mode == DeliveryMode::GUARANTEED
                           ? (!ev.tx_within_R_I_of_A && clear_b)
                           : h0;
            break;
    }

    if (h0) {
        ++c.h0;
        if (!transmits) ++c.false_alarm;
    } else {
        ++c.h1;
        if (transmits) ++c.miss;
    }
    if (ev.rx_within_r_I_of_A) {
        ++c.rx;
        if (transmits) ++c.collide;
    }
    if (succeeds) ++c.success;
}

template <class TrialFn>
inline void run_partitioned(std::uint64_t trials, unsigned threads,
                            std::vector<Counters>& parts, const TrialFn& fn) {
    parts.assign(threads, Counters{});
    if (threads == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) fn(t, parts[0]);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t t = w; t < trials; t += threads)
                fn(t, parts[w]);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mc_detail

// Empirical MAC metrics with binomial standard errors.
inline MacEstimate estimate_metrics(const PrimaryNetwork& net,
                                    const SecondaryLink& link,
                                    DeliveryMode mode, Scheme scheme,
                                    const SimConfig& cfg) {
    cfg.validate();
    const double half_side =
        mc_detail::eval_radius(net, link) + mc_detail::guard_for(net, link, cfg);

    std::vector<mc_detail::Counters> parts;
    mc_detail::run_partitioned(
        cfg.trials, cfg.threads, parts,
        [&](std::uint64_t t, mc_detail::Counters& c) {
            mc_detail::run_trial(net, link, mode, scheme, half_side, cfg.seed,
                                 t, c);
        });
    mc_detail::Counters c;
    for (const auto& p : parts) c.merge(p);

    if (c.h0 == 0) throw InsufficientSamplesError("opportunity (H0)");
    if (c.h1 == 0) throw InsufficientSamplesError("no-opportunity (H1)");
    if (c.rx == 0)
        throw InsufficientSamplesError("active receiver within r_I of A");

    MacEstimate est;
    est.trials = cfg.trials;
    est.n_h0 = c.h0;
    est.n_h1 = c.h1;
    est.n_rx = c.rx;
    est.pf = Estimate::from_counts(c.false_alarm, c.h0);
    est.pmd = Estimate::from_counts(c.miss, c.h1);
    est.pc = Estimate::from_counts(c.collide, c.rx);
    est.ps = Estimate::from_counts(c.success, cfg.trials);
    return est;
}

// Empirical opportunity probability (the oracle for prob_opportunity).
inline Estimate estimate_opportunity(const PrimaryNetwork& net,
                                     const SecondaryLink& link,
                                     const SimConfig& cfg) {
    cfg.validate();
    const double half_side =
        mc_detail::eval_radius(net, link) + mc_detail::guard_for(net, link, cfg);
    std::vector<mc_detail::Counters> parts;
    mc_detail::run_partitioned(
        cfg.trials, cfg.threads, parts,
        [&](std::uint64_t t, mc_detail::Counters& c) {
            CounterRng rng(cfg.seed, t);
            const Scene s = sample_active_scene(net, half_side, rng);
            if (evaluate_events(s, link, net.R_I).opportunity()) ++c.h0;
        });
    std::uint64_t k = 0;
    for (const auto& p : parts) k += p.h0;
    return Estimate::from_counts(k, cfg.trials);
}

struct EmpiricalRocPoint {
    double tau_A;
    double equivalent_radius;  // (P_tx / tau_A)^(1/alpha)
    Estimate pf;
    Estimate pd;
    bool pf_degenerate = false;  // conditioning event never observed
    bool pd_degenerate = false;
};

struct EmpiricalRoc {
    std::vector<EmpiricalRocPoint> points;
    std::uint64_t n_h0 = 0, n_h1 = 0, trials = 0;
};

// SIR-based energy-detector simulation. Truth: no active receiver within
// r_I of A and aggregate interference at B below tau_B. Decision: aggregate
// power at A above tau_A declares busy. Aggregates sum over all active
// transmitters in the window; the window default follows 20*R_I but is
// widened when the disk events need more coverage.
inline EmpiricalRoc energy_detector_roc(const PrimaryNetwork& net,
                                        const SecondaryLink& link,
                                        const EnergyDetectorConfig& det,
                                        const std::vector<double>& tau_A_grid,
                                        const SimConfig& cfg) {
    cfg.validate();
    det.validate();
    if (tau_A_grid.empty()) throw DomainError("tau_A grid is empty");
    for (size_t i = 0; i < tau_A_grid.size(); ++i) {
        if (!(tau_A_grid[i] > 0))
            throw DomainError("tau_A grid values must be positive");
        if (i > 0 && tau_A_grid[i] <= tau_A_grid[i - 1])
            throw DomainError("tau_A grid must be strictly increasing");
    }

    const double half_side = cfg.sir_window_half > 0
                                 ? std::max(cfg.sir_window_half,
                                            mc_detail::sir_floor(net, link))
                                 : mc_detail::sir_window_half(net, link, det);
    const size_t m = tau_A_grid.size();

    struct SirCounters {
        std::uint64_t h0 = 0, h1 = 0;
        std::vector<std::uint64_t> false_alarm, miss;
    };
    std::vector<SirCounters> parts(cfg.threads);
    for (auto& p : parts) {
        p.false_alarm.assign(m, 0);
        p.miss.assign(m, 0);
    }

    auto trial_fn = [&](std::uint64_t t, SirCounters& c) {
        CounterRng rng(cfg.seed, t);
        const mc_detail::SirTrial s = mc_detail::run_sir_trial(
            net, link, half_side, det.P_tx, det.alpha, rng);
        const bool h0 = !s.rx_near_a && s.power_b < det.tau_B;
        if (h0)
            ++c.h0;
        else
            ++c.h1;
        for (size_t i = 0; i < m; ++i) {
            const bool busy = s.power_a > tau_A_grid[i];
            if (h0 && busy) ++c.false_alarm[i];
            if (!h0 && !busy) ++c.miss[i];
        }
    };

    if (cfg.threads == 1) {
        for (std::uint64_t t = 0; t < cfg.trials; ++t) trial_fn(t, parts[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < cfg.threads; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t t = w; t < cfg.trials; t += cfg.threads)
                    trial_fn(t, parts[w]);
            });
        for (auto& th : pool) th.join();
    }

    SirCounters total;
    total.false_alarm.assign(m, 0);
    total.miss.assign(m, 0);
    for (const auto& p : parts) {
        total.h0 += p.h0;
        total.h1 += p.h1;
        for (size_t i = 0; i < m; ++i) {
            total.false_alarm[i] += p.false_alarm[i];
            total.miss[i] += p.miss[i];
        }
    }

    EmpiricalRoc roc;
    roc.trials = cfg.trials;
    roc.n_h0 = total.h0;
    roc.n_h1 = total.h1;
    roc.points.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        EmpiricalRocPoint pt;
        pt.tau_A = tau_A_grid[i];
        pt.equivalent_radius =
            std::pow(det.P_tx / tau_A_grid[i], 1.0 / det.alpha);
        pt.pf = Estimate::from_counts(total.false_alarm[i], total.h0);
        pt.pf_degenerate = total.h0 == 0;
        const Estimate miss_est = Estimate::from_counts(total.miss[i], total.h1);
        pt.pd = miss_est;
        pt.pd.value = total.h1 == 0 ? 0.0 : 1.0 - miss_est.value;
        pt.pd.count = total.h1 - miss_est.count;
        pt.pd_degenerate = total.h1 == 0;
        roc.points.push_back(pt);
    }
    return roc;
}

// CSV dump of a scene: one record per transmitter.
inline std::string scene_to_csv(const Scene& scene) {
    std::string out = "tx_x,tx_y,active,rx_x,rx_y\n";
    char buf[160];
    for (const auto& e : scene.entries) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g,%.17g\n", e.tx_x,
                      e.tx_y, e.active ? 1 : 0, e.rx_x, e.rx_y);
        out += buf;
    }
    return out;
}

}  // namespace crpower

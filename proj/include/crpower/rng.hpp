#pragma once

#include <cmath>
#include <cstdint>

namespace crpower {

// Counter-based substream RNG: draw i of stream s under seed k is a pure
// function of (k, s, i), so per-trial substreams are reproducible no matter
// how trials are scheduled across workers. Mixing is the splitmix64
// finalizer over a golden-ratio counter sequence.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : base_(mix(seed ^ mix(stream + 0x9fb21c651e98df25ULL))) {}

    std::uint64_t next_u64() {
        return mix(base_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    bool bernoulli(double p) { return next_unit() < p; }

    // Poisson sample: chop-down inversion for small means, Hormann's PTRS
    // transformed rejection for large ones.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 10.0) {
            const double l = std::exp(-mean);
            std::uint64_t k = 0;
            double prod = next_unit();
            while (prod > l) {
                ++k;
                prod *= next_unit();
            }
            return k;
        }
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            double u = next_unit() - 0.5;
            double v = next_unit();
            const double us = 0.5 - std::abs(u);
            const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0))
                return static_cast<std::uint64_t>(k);
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace crpower

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wkd {

/// Deterministic random source: mt19937_64 (fully specified by the standard)
/// with hand-rolled uniform/Gaussian transforms, so streams are identical
/// across standard libraries, not just across runs.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe for log().
    double uniform_pos() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the paired value is cached.
    double gauss() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double angle = 2.0 * M_PI * uniform();
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer in [0, n); rejection keeps it unbiased.
    int uniform_int(int n) {
        const uint64_t bound = ~uint64_t{0} - (~uint64_t{0} % static_cast<uint64_t>(n));
        uint64_t x;
        do {
            x = engine_();
        } while (x >= bound);
        return static_cast<int>(x % static_cast<uint64_t>(n));
    }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace wkd

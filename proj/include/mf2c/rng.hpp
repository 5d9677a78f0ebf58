#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mf2c {

/// splitmix64 stream with the handful of distributions the simulator needs.
///
/// The distributions are written out here instead of using <random>'s, whose
/// algorithms differ between standard library implementations; scenarios must
/// serialize byte-identically for a given seed on any platform.
__extension__ typedef unsigned __int128 Uint128;

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    /// Independent sub-stream keyed by (seed, stream). Used per traveler so
    /// that a traveler's draws do not depend on how many others exist.
    static SplitMix64 derive(std::uint64_t seed, std::uint64_t stream) noexcept {
        SplitMix64 mixer(seed ^ (stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
        return SplitMix64(mixer.next());
    }

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept {
        // Lemire's multiply-shift with rejection for an unbiased result.
        Uint128 m = static_cast<Uint128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<Uint128>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

    /// Box-Muller; the second variate is cached.
    double normal(double mean, double sigma) noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return mean + sigma * spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return mean + sigma * r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mf2c

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace zap {

/// Seed for every stochastic generator in the library.
struct RngSeed {
    std::uint64_t value{0};

    /// Sub-stream seed: a fixed offset keeps signal, noise and channel draws independent.
    constexpr RngSeed offset(std::uint64_t k) const noexcept { return RngSeed{value + k}; }
};

/// Fixed sub-stream offsets used by the generators and the harness.
namespace stream {
inline constexpr std::uint64_t kInput = 0x1000;
inline constexpr std::uint64_t kNoise = 0x2000;
inline constexpr std::uint64_t kChannelA = 0x3000;
inline constexpr std::uint64_t kChannelB = 0x4000;
}  // namespace stream

/// Standard-normal source built on mt19937_64.
///
/// std::normal_distribution is implementation-defined, so the Gaussian
/// transform (Box-Muller on 53-bit uniforms) is done here. Output is
/// bit-identical across standard libraries for a given seed.
class NormalRng {
public:
    explicit NormalRng(RngSeed seed) : engine_(seed.value) {}

    double uniform() {
        // 53 random bits -> [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling, avoids modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r = 0;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

private:
    std::mt19937_64 engine_;
    double spare_{0.0};
    bool has_spare_{false};
};

}  // namespace zap

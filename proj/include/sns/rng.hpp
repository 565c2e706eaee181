// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_RNG_HPP
#define SNS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <utility>

#include "sns/common.hpp"

namespace sns {

// Stateless counter-based generator: every draw is a pure function of
// (seed, stream, key1, key2), so ensembles are reproducible and independent
// of evaluation order across threads.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::uint64_t word(std::uint64_t key1, std::uint64_t key2) const {
        std::uint64_t h = mix(seed_);
        h = mix(h ^ 0xA5A5A5A5A5A5A5A5ull ^ stream_);
        h = mix(h ^ key1);
        h = mix(h ^ key2);
        return h;
    }

    // uniform in (0,1)
    double uniform(std::uint64_t key1, std::uint64_t key2) const {
        return (double(word(key1, key2) >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal pair via Box-Muller
    std::pair<double, double> gaussian_pair(std::uint64_t key1, std::uint64_t key2) const {
        std::uint64_t h = word(key1, key2);
        double u1 = (double(mix(h ^ 0x243F6A8885A308D3ull) >> 11) + 0.5) * 0x1.0p-53;
        double u2 = (double(mix(h ^ 0x13198A2E03707344ull) >> 11) + 0.5) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }

    // centered complex gaussian with E|z|^2 = var, E z^2 = 0
    cplx complex_gaussian(std::uint64_t key1, std::uint64_t key2, double var) const {
        auto [g1, g2] = gaussian_pair(key1, key2);
        double s = std::sqrt(0.5 * var);
        return {s * g1, s * g2};
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

// Key-space tags so distinct uses of the same (mode, step) never collide.
enum class DrawPurpose : std::uint64_t {
    ou_step = 1,
    direct_sample = 2,
    init_field = 3,
};

inline std::uint64_t draw_key(DrawPurpose p, std::uint64_t counter) {
    return (static_cast<std::uint64_t>(p) << 56) ^ counter;
}

}  // namespace sns

#endif

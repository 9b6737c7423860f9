#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace chx {

// Counter-based random numbers: every draw is a pure function of a key
// tuple (seed, trajectory, step, mode, component).  Replay is exact no
// matter how work is split across threads, and coupled experiments can
// address the same underlying draws from different consumers.
struct CounterRng {
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t hash(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                              std::uint64_t d = 0, std::uint64_t e = 0) {
        std::uint64_t h = 0x2545f4914f6cdd1dULL;
        h = mix64(h + kGamma + a);
        h = mix64(h + kGamma + b);
        h = mix64(h + kGamma + c);
        h = mix64(h + kGamma + d);
        h = mix64(h + kGamma + e);
        return h;
    }

    // uniform in (0, 1)
    static double uniform(std::uint64_t h) {
        return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
    }

    // independent standard normal pair from one key (Box-Muller)
    static std::pair<double, double> gaussian_pair(std::uint64_t a, std::uint64_t b = 0,
                                                   std::uint64_t c = 0, std::uint64_t d = 0,
                                                   std::uint64_t e = 0) {
        const std::uint64_t h1 = hash(a, b, c, d, e);
        const std::uint64_t h2 = mix64(h1 + kGamma);
        const double u1 = uniform(h1);
        const double u2 = uniform(h2);
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double tau = 6.283185307179586476925286766559;
        return {r * std::cos(tau * u2), r * std::sin(tau * u2)};
    }
};

}  // namespace chx

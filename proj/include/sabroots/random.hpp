#pragma once

// Seed derivation and platform-independent draws. std::mt19937_64 output is
// fixed by the standard; the distributions here are spelled out instead of
// using <random>'s implementation-defined ones so a given seed yields the
// same constellation with any standard library.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace sabroots {

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for launch e of grid cell (row, col):
///   s0 = mix64(master ^ 0x243f6a8885a308d3)
///   s1 = mix64(s0 + G * (row + 1))
///   s2 = mix64(s1 + G * (col + 1))
///   seed = mix64(s2 + G * (e + 1)),   G = 0x9e3779b97f4a7c15
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t row, std::uint64_t col,
                                    std::uint64_t e) noexcept {
    constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t s = mix64(master ^ 0x243f6a8885a308d3ULL);
    s = mix64(s + golden * (row + 1));
    s = mix64(s + golden * (col + 1));
    return mix64(s + golden * (e + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

    /// Two independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() noexcept {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sabroots

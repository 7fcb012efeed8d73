#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gptc {

/// Seeded generator with platform-independent value mappings, so a fixed
/// seed reproduces runs byte for byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform integer in [0, n).
    int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

    double normal() {
        // Box-Muller; the spare is discarded to keep the call sequence simple.
        double u1 = uniform01(), u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gptc

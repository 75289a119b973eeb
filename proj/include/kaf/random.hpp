#pragma once

#include <cstdint>
#include <random>

namespace kaf {

// Seeded generator whose output is fixed by the seed on every platform:
// the engine is std::mt19937_64 and the distributions are written out here
// rather than taken from <random>, whose algorithms are unspecified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Standard normal (Marsaglia polar method).
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace kaf

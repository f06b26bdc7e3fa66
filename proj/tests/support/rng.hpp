#pragma once

// Deterministic splitmix64 generator so test values are identical on every
// platform (std:: distributions are implementation-defined).

#include <cstdint>

#include "micz/vec3.hpp"

namespace testsupport {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    micz::Vec3 box(double half) {
        return {uniform(-half, half), uniform(-half, half), uniform(-half, half)};
    }

    micz::Vec3 unit_vector() {
        while (true) {
            const micz::Vec3 v = box(1.0);
            const double n2 = v.norm2();
            if (n2 > 1e-4 && n2 <= 1.0) return v / std::sqrt(n2);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace testsupport

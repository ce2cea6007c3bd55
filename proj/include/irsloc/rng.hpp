// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace irsloc::rng {

// Stream tags keep independent consumers of one base seed apart.
enum class Tag : std::uint64_t {
    Pilots = 1,
    Rcs = 2,
    FreqNoise = 3,
    TimeNoise = 4,
    Scene = 5,
    Calibration = 6,
    Twist = 7,
    Trial = 8,
};

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x);

// Counter-based stream key: the result depends only on the base seed and the
// coordinates, never on the order in which streams are requested.
std::uint64_t stream_seed(std::uint64_t base, Tag tag, std::initializer_list<std::uint64_t> coords = {});

class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}
    Stream(std::uint64_t base, Tag tag, std::initializer_list<std::uint64_t> coords = {})
        : engine_(stream_seed(base, tag, coords)) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double normal() { return normal_(engine_); }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_normal(double variance = 1.0);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace irsloc::rng

// SPDX-License-Identifier: Apache-2.0

#include "irsloc/rng.hpp"

#include <cmath>

namespace irsloc::rng {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t base, Tag tag, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = mix(base ^ mix(static_cast<std::uint64_t>(tag)));
    for (std::uint64_t c : coords) h = mix(h ^ mix(c + 0x632be59bd9b4e019ULL));
    return h;
}

cplx Stream::complex_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

} // namespace irsloc::rng

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/channel.hpp"

#include <cstdint>

namespace irsloc {

inline constexpr double kDefaultTwist = 0.37; // rad

/// M_I x Q0 reflection patterns, identical in every coherence block. Column q
/// is w_q / G(0, m) * exp(j m twist) with w_q the q-th unnormalised DFT column.
struct IrsSchedule {
    CMatrix phi;
    double twist = kDefaultTwist;

    int num_symbols() const { return static_cast<int>(phi.cols()); }
};

IrsSchedule design_irs_schedule(const IrsBsChannel& irs_bs, int q0, double twist = kDefaultTwist);

/// Twist drawn uniformly from [0, 2 pi).
double random_twist(std::uint64_t seed);

/// All-ones patterns; the negative control for the rank condition.
IrsSchedule constant_schedule(int num_elements, int q0);

} // namespace irsloc

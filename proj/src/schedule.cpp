// SPDX-License-Identifier: Apache-2.0

#include "irsloc/schedule.hpp"

#include "irsloc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace irsloc {

IrsSchedule design_irs_schedule(const IrsBsChannel& irs_bs, int q0, double twist) {
    const Eigen::Index m_i = irs_bs.G.cols();
    if (q0 < 1) throw std::invalid_argument("design_irs_schedule: Q0 must be >= 1");
    if (q0 > m_i) throw std::invalid_argument("design_irs_schedule: Q0 exceeds the number of IRS elements");
    IrsSchedule s;
    s.twist = twist;
    s.phi.resize(m_i, q0);
    for (Eigen::Index m = 0; m < m_i; ++m) {
        const cplx g = irs_bs.G(0, m);
        if (std::abs(std::abs(g) - 1.0) > 1e-9)
            throw std::invalid_argument("design_irs_schedule: G entries must be unit modulus");
        const cplx tw = std::polar(1.0, static_cast<double>(m) * twist);
        for (int q = 0; q < q0; ++q) {
            const long long k = (static_cast<long long>(m) * q) % m_i;
            const cplx w = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(m_i));
            s.phi(m, q) = w / g * tw;
        }
    }
    return s;
}

double random_twist(std::uint64_t seed) {
    rng::Stream s(seed, rng::Tag::Twist);
    return s.uniform(0.0, 2.0 * kPi);
}

IrsSchedule constant_schedule(int num_elements, int q0) {
    if (num_elements < 1 || q0 < 1) throw std::invalid_argument("constant_schedule: sizes must be >= 1");
    IrsSchedule s;
    s.twist = 0.0;
    s.phi = CMatrix::Ones(num_elements, q0);
    return s;
}

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/types.hpp"

#include <cstdint>
#include <vector>

namespace irsloc {

struct OfdmConfig {
    int num_subcarriers = 256;        // N
    double subcarrier_spacing = 1e8 / 256; // Hz
    int cp_length = 88;               // J
    int num_taps = 88;                // L
    int symbols_per_block = 4;        // Q
    int virtual_symbols = 4;          // Q0
    int num_blocks = 32;              // V
    double power = 1.0;               // p, per subcarrier
    double noise_var = 1e-2;          // sigma^2, per received entry

    double bandwidth() const { return num_subcarriers * subcarrier_spacing; }
    // Range spanned by one delay tap.
    double tap_width() const { return kSpeedOfLight / bandwidth(); }

    void validate() const;
};

// 1-based tap index of a total propagation range: floor(range * B / c0) + 1.
int tap_of_range(double total_range, double bandwidth);

// Half-open range window [(l-1) c0/B, l c0/B) of tap l.
struct RangeWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double r) const { return r >= lo && r < hi; }
};
RangeWindow tap_window(int tap, double bandwidth);

// Pilot symbols s_{n,t}^{(q)} stored per (q, t) as length-N vectors.
struct PilotGrid {
    int num_subcarriers = 0;
    int num_symbols = 0;
    int num_blocks = 0;
    std::vector<CVector> symbols;

    const CVector& at(int q, int t) const;
};

/// E with E(n, l) = exp(-j 2 pi n l / N), n < N, l < L (0-based).
CMatrix delay_manifold(int num_subcarriers, int num_taps);

/// Unit-modulus QPSK pilots, deterministic in the seed.
PilotGrid generate_pilots(const OfdmConfig& config, std::uint64_t seed);

/// Frequency-domain observations sqrt(p) diag(s) E H + Z for every (q, t).
/// `cirs` holds L x M_B tap matrices. Noise is CN(0, sigma^2) per entry and is
/// skipped entirely when sigma^2 == 0.
SymbolBlockArray simulate_freq_rx(const OfdmConfig& config, const PilotGrid& pilots, const SymbolBlockArray& cirs,
                                  std::uint64_t seed);

/// Time-domain CP-prefixed samples after the L-tap channel, (N + J) x M_B per (q, t).
SymbolBlockArray simulate_time_rx(const OfdmConfig& config, const PilotGrid& pilots, const SymbolBlockArray& cirs,
                                  std::uint64_t seed);

/// Drops the CP and applies the unitary N-point DFT to every antenna column.
CMatrix remove_cp_and_dft(const OfdmConfig& config, const CMatrix& time_samples);

} // namespace irsloc

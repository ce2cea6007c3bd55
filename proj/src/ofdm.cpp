// SPDX-License-Identifier: Apache-2.0

#include "irsloc/ofdm.hpp"

#include "irsloc/rng.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsloc {

void OfdmConfig::validate() const {
    auto positive = [](int v, const char* name) {
        if (v <= 0) throw std::invalid_argument(std::string("ofdm: ") + name + " must be positive");
    };
    positive(num_subcarriers, "num_subcarriers");
    positive(cp_length, "cp_length");
    positive(num_taps, "num_taps");
    positive(symbols_per_block, "symbols_per_block");
    positive(virtual_symbols, "virtual_symbols");
    positive(num_blocks, "num_blocks");
    if (!(subcarrier_spacing > 0.0)) throw std::invalid_argument("ofdm: subcarrier_spacing must be > 0");
    if (cp_length < num_taps) throw std::invalid_argument("ofdm: cp_length must be >= num_taps");
    if (virtual_symbols > symbols_per_block)
        throw std::invalid_argument("ofdm: virtual_symbols must not exceed symbols_per_block");
    if (num_subcarriers < num_taps) throw std::invalid_argument("ofdm: num_subcarriers must be >= num_taps");
    if (!(power > 0.0)) throw std::invalid_argument("ofdm: power must be > 0");
    if (!(noise_var >= 0.0)) throw std::invalid_argument("ofdm: noise_var must be >= 0");
}

int tap_of_range(double total_range, double bandwidth) {
    return static_cast<int>(std::floor(total_range * bandwidth / kSpeedOfLight)) + 1;
}

RangeWindow tap_window(int tap, double bandwidth) {
    return {(tap - 1) * kSpeedOfLight / bandwidth, tap * kSpeedOfLight / bandwidth};
}

const CVector& PilotGrid::at(int q, int t) const {
    if (q < 0 || q >= num_symbols || t < 0 || t >= num_blocks)
        throw std::out_of_range("pilot index out of range");
    return symbols[static_cast<std::size_t>(t) * num_symbols + q];
}

CMatrix delay_manifold(int num_subcarriers, int num_taps) {
    CMatrix e(num_subcarriers, num_taps);
    for (int n = 0; n < num_subcarriers; ++n) {
        for (int l = 0; l < num_taps; ++l) {
            // Reduce n*l mod N first so the phase argument stays small.
            const long long k = (static_cast<long long>(n) * l) % num_subcarriers;
            e(n, l) = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / num_subcarriers);
        }
    }
    return e;
}

PilotGrid generate_pilots(const OfdmConfig& config, std::uint64_t seed) {
    PilotGrid grid;
    grid.num_subcarriers = config.num_subcarriers;
    grid.num_symbols = config.symbols_per_block;
    grid.num_blocks = config.num_blocks;
    grid.symbols.reserve(static_cast<std::size_t>(grid.num_symbols) * grid.num_blocks);
    for (int t = 0; t < grid.num_blocks; ++t) {
        for (int q = 0; q < grid.num_symbols; ++q) {
            rng::Stream stream(seed, rng::Tag::Pilots,
                               {static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(t)});
            CVector s(config.num_subcarriers);
            for (int n = 0; n < config.num_subcarriers; ++n) {
                const int k = stream.uniform_int(0, 3);
                s[n] = std::polar(1.0, kPi / 4.0 + k * kPi / 2.0);
            }
            grid.symbols.push_back(std::move(s));
        }
    }
    return grid;
}

namespace {

void check_shapes(const OfdmConfig& config, const PilotGrid& pilots, const SymbolBlockArray& cirs) {
    if (cirs.num_symbols() != config.symbols_per_block || cirs.num_blocks() != config.num_blocks)
        throw std::invalid_argument("CIR array does not cover Q x V symbols");
    if (cirs.rows() != config.num_taps) throw std::invalid_argument("CIR tap count does not match L");
    if (pilots.num_subcarriers != config.num_subcarriers || pilots.num_symbols != config.symbols_per_block ||
        pilots.num_blocks != config.num_blocks)
        throw std::invalid_argument("pilot grid dimensions do not match the OFDM configuration");
}

} // namespace

SymbolBlockArray simulate_freq_rx(const OfdmConfig& config, const PilotGrid& pilots, const SymbolBlockArray& cirs,
                                  std::uint64_t seed) {
    check_shapes(config, pilots, cirs);
    const CMatrix e = delay_manifold(config.num_subcarriers, config.num_taps);
    const double amp = std::sqrt(config.power);
    const Eigen::Index m_b = cirs.cols();
    SymbolBlockArray out(config.symbols_per_block, config.num_blocks, config.num_subcarriers, m_b);
    for (int t = 0; t < config.num_blocks; ++t) {
        for (int q = 0; q < config.symbols_per_block; ++q) {
            CMatrix y = e * cirs.at(q, t);
            y = (amp * pilots.at(q, t)).asDiagonal() * y;
            if (config.noise_var > 0.0) {
                rng::Stream noise(seed, rng::Tag::FreqNoise,
                                  {static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(t)});
                for (Eigen::Index c = 0; c < m_b; ++c)
                    for (Eigen::Index n = 0; n < y.rows(); ++n) y(n, c) += noise.complex_normal(config.noise_var);
            }
            out.at(q, t) = std::move(y);
        }
    }
    return out;
}

SymbolBlockArray simulate_time_rx(const OfdmConfig& config, const PilotGrid& pilots, const SymbolBlockArray& cirs,
                                  std::uint64_t seed) {
    config.validate();
    check_shapes(config, pilots, cirs);
    const int n_sc = config.num_subcarriers;
    const int cp = config.cp_length;
    const int taps = config.num_taps;
    const Eigen::Index m_b = cirs.cols();
    const double amp = std::sqrt(config.power);
    const double unitary = std::sqrt(static_cast<double>(n_sc));

    Eigen::FFT<double> fft;
    SymbolBlockArray out(config.symbols_per_block, config.num_blocks, n_sc + cp, m_b);
    for (int t = 0; t < config.num_blocks; ++t) {
        for (int q = 0; q < config.symbols_per_block; ++q) {
            // chi = W^H sqrt(p) s with the unitary DFT W.
            std::vector<cplx> freq(n_sc);
            for (int n = 0; n < n_sc; ++n) freq[n] = amp * pilots.at(q, t)[n];
            std::vector<cplx> chi;
            fft.inv(chi, freq);
            for (auto& v : chi) v *= unitary;

            // CP-prefixed stream: [chi_{N-J}, ..., chi_{N-1}, chi_0, ..., chi_{N-1}].
            std::vector<cplx> tx(n_sc + cp);
            for (int i = 0; i < cp; ++i) tx[i] = chi[n_sc - cp + i];
            for (int i = 0; i < n_sc; ++i) tx[cp + i] = chi[i];

            const CMatrix& h = cirs.at(q, t);
            CMatrix& rx = out.at(q, t);
            for (int i = 0; i < n_sc + cp; ++i) {
                for (int l = 0; l < taps && l <= i; ++l) {
                    if (h.row(l).isZero(0.0)) continue;
                    rx.row(i) += tx[i - l] * h.row(l);
                }
            }
            if (config.noise_var > 0.0) {
                rng::Stream noise(seed, rng::Tag::TimeNoise,
                                  {static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(t)});
                for (Eigen::Index c = 0; c < m_b; ++c)
                    for (Eigen::Index i = 0; i < rx.rows(); ++i) rx(i, c) += noise.complex_normal(config.noise_var);
            }
        }
    }
    return out;
}

CMatrix remove_cp_and_dft(const OfdmConfig& config, const CMatrix& time_samples) {
    const int n_sc = config.num_subcarriers;
    const int cp = config.cp_length;
    if (time_samples.rows() != n_sc + cp) throw std::invalid_argument("time-domain block has the wrong length");
    Eigen::FFT<double> fft;
    const double unitary = 1.0 / std::sqrt(static_cast<double>(n_sc));
    CMatrix out(n_sc, time_samples.cols());
    for (Eigen::Index c = 0; c < time_samples.cols(); ++c) {
        std::vector<cplx> x(n_sc);
        for (int i = 0; i < n_sc; ++i) x[i] = time_samples(cp + i, c);
        std::vector<cplx> y;
        fft.fwd(y, x);
        for (int n = 0; n < n_sc; ++n) out(n, c) = y[n] * unitary;
    }
    return out;
}

} // namespace irsloc

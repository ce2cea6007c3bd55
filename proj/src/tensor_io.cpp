// SPDX-License-Identifier: Apache-2.0

#include "irsloc/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace irsloc {

namespace {

constexpr const char* kMagic = "irsloc-tensor 1";

std::uint32_t to_le(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

void put_float(std::ostream& out, float f) {
    const std::uint32_t le = to_le(std::bit_cast<std::uint32_t>(f));
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

float get_float(const char* p) {
    std::uint32_t raw;
    std::memcpy(&raw, p, sizeof raw);
    return std::bit_cast<float>(to_le(raw));
}

} // namespace

TensorDims dims_of(const SymbolBlockArray& data) {
    return {static_cast<long>(data.rows()), static_cast<long>(data.cols()), data.num_symbols(), data.num_blocks()};
}

void write_tensor(const std::string& path, const SymbolBlockArray& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write tensor file '" + path + "'");
    const TensorDims d = dims_of(data);
    out << kMagic << "\ndtype complex64\ndims " << d.rows << ' ' << d.cols << ' ' << d.symbols << ' ' << d.blocks
        << "\nend\n";
    for (int t = 0; t < d.blocks; ++t)
        for (int q = 0; q < d.symbols; ++q) {
            const CMatrix& m = data.at(q, t);
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                for (Eigen::Index r = 0; r < m.rows(); ++r) {
                    put_float(out, static_cast<float>(m(r, c).real()));
                    put_float(out, static_cast<float>(m(r, c).imag()));
                }
        }
    if (!out) throw std::runtime_error("write failed for tensor file '" + path + "'");
}

SymbolBlockArray read_tensor(const std::string& path, const std::optional<TensorDims>& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open tensor file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kMagic) throw TensorFormatError(path + ": not an irsloc tensor file");
    TensorDims d;
    bool have_dims = false;
    for (;;) {
        if (!std::getline(in, line)) throw TensorFormatError(path + ": header is not terminated by 'end'");
        if (line == "end") break;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dtype") {
            std::string dtype;
            ls >> dtype;
            if (dtype != "complex64") throw TensorFormatError(path + ": unsupported dtype '" + dtype + "'");
        } else if (key == "dims") {
            if (!(ls >> d.rows >> d.cols >> d.symbols >> d.blocks) || d.rows < 0 || d.cols < 0 || d.symbols < 0 ||
                d.blocks < 0)
                throw TensorFormatError(path + ": malformed dims line '" + line + "'");
            have_dims = true;
        } else {
            throw TensorFormatError(path + ": unknown header line '" + line + "'");
        }
    }
    if (!have_dims) throw TensorFormatError(path + ": header has no dims line");
    if (expected && !(*expected == d)) {
        std::ostringstream msg;
        msg << path << ": header dims " << d.rows << 'x' << d.cols << 'x' << d.symbols << 'x' << d.blocks
            << " do not match the expected " << expected->rows << 'x' << expected->cols << 'x' << expected->symbols
            << 'x' << expected->blocks;
        throw TensorFormatError(msg.str());
    }

    const std::size_t count = static_cast<std::size_t>(d.rows) * static_cast<std::size_t>(d.cols) *
                              static_cast<std::size_t>(d.symbols) * static_cast<std::size_t>(d.blocks);
    std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (payload.size() != count * 8) {
        throw TensorFormatError(path + ": payload holds " + std::to_string(payload.size()) + " bytes, header needs " +
                                std::to_string(count * 8));
    }
    SymbolBlockArray out(d.symbols, d.blocks, d.rows, d.cols);
    const char* p = payload.data();
    for (int t = 0; t < d.blocks; ++t)
        for (int q = 0; q < d.symbols; ++q) {
            CMatrix& m = out.at(q, t);
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                for (Eigen::Index r = 0; r < m.rows(); ++r, p += 8)
                    m(r, c) = cplx(get_float(p), get_float(p + 4));
        }
    return out;
}

} // namespace irsloc

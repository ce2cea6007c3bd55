// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace irsloc {

// Binary layout: a text header terminated by the line "end", then
// little-endian complex64 (re, im float32 pairs). Matrices are column-major
// and are stored for t = 0..V-1, q = 0..Q-1 with q varying fastest.
//
//   irsloc-tensor 1
//   dtype complex64
//   dims <rows> <cols> <symbols> <blocks>
//   end
struct TensorFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TensorDims {
    long rows = 0;
    long cols = 0;
    int symbols = 0;
    int blocks = 0;

    friend bool operator==(const TensorDims&, const TensorDims&) = default;
};

void write_tensor(const std::string& path, const SymbolBlockArray& data);

/// Throws TensorFormatError on a malformed header, a payload whose size does
/// not match the header, or header dims that differ from `expected`.
SymbolBlockArray read_tensor(const std::string& path, const std::optional<TensorDims>& expected = std::nullopt);

TensorDims dims_of(const SymbolBlockArray& data);

} // namespace irsloc

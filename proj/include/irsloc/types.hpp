// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsloc {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
// Propagation speed used for every delay <-> range conversion. The tap width
// at 100 MHz is exactly 3 m with this value.
inline constexpr double kSpeedOfLight = 3.0e8;
inline constexpr double kInfiniteRange = std::numeric_limits<double>::infinity();

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class FieldType { Near, Far };

inline const char* to_string(FieldType f) { return f == FieldType::Near ? "near" : "far"; }

// Complex matrices indexed by (OFDM symbol q, coherence block t). Used for the
// per-symbol CIRs (L x M_B), received signals (N x M_B) and time-domain
// streams ((N + J) x M_B).
class SymbolBlockArray {
public:
    SymbolBlockArray() = default;
    SymbolBlockArray(int num_symbols, int num_blocks, Eigen::Index rows, Eigen::Index cols)
        : num_symbols_(num_symbols), num_blocks_(num_blocks),
          data_(static_cast<std::size_t>(num_symbols) * static_cast<std::size_t>(num_blocks),
                CMatrix::Zero(rows, cols)) {}

    int num_symbols() const { return num_symbols_; }
    int num_blocks() const { return num_blocks_; }
    bool empty() const { return data_.empty(); }
    Eigen::Index rows() const { return data_.empty() ? 0 : data_.front().rows(); }
    Eigen::Index cols() const { return data_.empty() ? 0 : data_.front().cols(); }

    CMatrix& at(int q, int t) { return data_.at(index(q, t)); }
    const CMatrix& at(int q, int t) const { return data_.at(index(q, t)); }

    std::vector<CMatrix>& raw() { return data_; }
    const std::vector<CMatrix>& raw() const { return data_; }

private:
    std::size_t index(int q, int t) const {
        if (q < 0 || q >= num_symbols_ || t < 0 || t >= num_blocks_)
            throw std::out_of_range("symbol/block index out of range");
        return static_cast<std::size_t>(t) * static_cast<std::size_t>(num_symbols_) +
               static_cast<std::size_t>(q);
    }

    int num_symbols_ = 0;
    int num_blocks_ = 0;
    std::vector<CMatrix> data_;
};

} // namespace irsloc

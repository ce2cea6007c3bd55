// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/channel.hpp"
#include "irsloc/schedule.hpp"

#include <vector>

namespace irsloc {

// Stacks Q0 symbols of one cluster into a Q0 M_B "virtual array". Row block q
// (symbol-major) is G diag(phi_q), so psi(d, theta) = P a_I(d, theta).
class VirtualSteering {
public:
    VirtualSteering(const IrsBsChannel& irs_bs, const IrsSchedule& schedule, const UlaGeometry& irs_array,
                    double wavelength);

    const CMatrix& P() const { return p_; }
    Eigen::Index dimension() const { return p_.rows(); }
    int num_symbols() const { return q0_; }
    const UlaGeometry& irs_array() const { return irs_array_; }
    double wavelength() const { return wavelength_; }

    /// Infinite range selects the far-field IRS response.
    CVector operator()(double effective_range, double theta, SteeringModel model = SteeringModel::Fresnel) const;

    /// Columns psi(d_k, theta_k).
    CMatrix matrix(const std::vector<std::pair<double, double>>& points) const;

private:
    CMatrix p_;
    int q0_ = 0;
    UlaGeometry irs_array_;
    double wavelength_ = 0.0;
};

/// Q0 M_B x V snapshot matrix for tap l: column t stacks row l of the first Q0
/// symbols' estimates.
CMatrix build_virtual(int tap, const SymbolBlockArray& cir, int q0);

/// (1/V) X X^H.
CMatrix sample_covariance(const CMatrix& snapshots);

/// Psi C Psi^H + sigma^2 I, the infinite-snapshot covariance.
CMatrix analytic_covariance(const CMatrix& psi, const RVector& source_powers, double noise_var);

struct Eigenpairs {
    RVector values;   // descending
    CMatrix vectors;  // matching columns
};

Eigenpairs hermitian_eig(const CMatrix& r);

enum class AicForm {
    WaxKailath, // V (p - k) log(g / a) - k (2p - k), p = Q0 M_B
    Printed,    // (p - k) log of the ratio with 1/(M_B - k) exponents, minus 2k(p - k)
};

/// Score of every candidate k = 0..p-1 (NaN-free; -inf where undefined).
std::vector<double> aic_scores(const RVector& eigenvalues_desc, int q0, int m_b, int snapshots,
                               AicForm form = AicForm::WaxKailath);

int estimate_target_count(const RVector& eigenvalues_desc, int q0, int m_b, int snapshots,
                          AicForm form = AicForm::WaxKailath);

/// Columns spanning the noise subspace (the p - k smallest eigenvalues).
CMatrix noise_subspace(const Eigenpairs& eig, int k);

struct RankReport {
    int rank = 0;
    double condition = 0.0; // sigma_min / sigma_max over min(rows, cols) values
};

/// Numerical rank of P A_I(Theta) with the given relative threshold.
RankReport verify_rank(const VirtualSteering& steering, const std::vector<std::pair<double, double>>& points,
                       double rel_threshold = 1e-10);

} // namespace irsloc

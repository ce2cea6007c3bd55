// SPDX-License-Identifier: Apache-2.0

#include "irsloc/covariance.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace irsloc {

VirtualSteering::VirtualSteering(const IrsBsChannel& irs_bs, const IrsSchedule& schedule,
                                 const UlaGeometry& irs_array, double wavelength)
    : q0_(schedule.num_symbols()), irs_array_(irs_array), wavelength_(wavelength) {
    const Eigen::Index m_b = irs_bs.G.rows();
    const Eigen::Index m_i = irs_bs.G.cols();
    if (schedule.phi.rows() != m_i || irs_array.num_elements != m_i)
        throw std::invalid_argument("VirtualSteering: schedule / IRS size mismatch");
    p_.resize(q0_ * m_b, m_i);
    for (int q = 0; q < q0_; ++q) p_.middleRows(q * m_b, m_b) = irs_bs.G * schedule.phi.col(q).asDiagonal();
}

CVector VirtualSteering::operator()(double effective_range, double theta, SteeringModel model) const {
    return p_ * steering(irs_array_, wavelength_, effective_range, theta, model);
}

CMatrix VirtualSteering::matrix(const std::vector<std::pair<double, double>>& points) const {
    CMatrix a(p_.cols(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k)
        a.col(static_cast<Eigen::Index>(k)) = steering(irs_array_, wavelength_, points[k].first, points[k].second);
    return p_ * a;
}

CMatrix build_virtual(int tap, const SymbolBlockArray& cir, int q0) {
    if (cir.empty()) throw std::invalid_argument("build_virtual: missing CIR estimates");
    if (tap < 1 || tap > cir.rows()) throw std::out_of_range("build_virtual: tap out of range");
    if (q0 < 1 || q0 > cir.num_symbols())
        throw std::invalid_argument("build_virtual: Q0 exceeds the estimated symbols");
    const Eigen::Index m_b = cir.cols();
    CMatrix x(q0 * m_b, cir.num_blocks());
    for (int t = 0; t < cir.num_blocks(); ++t)
        for (int q = 0; q < q0; ++q) x.col(t).segment(q * m_b, m_b) = cir.at(q, t).row(tap - 1).transpose();
    return x;
}

CMatrix sample_covariance(const CMatrix& snapshots) {
    if (snapshots.cols() < 1) throw std::invalid_argument("sample_covariance: need at least one snapshot");
    CMatrix r = snapshots * snapshots.adjoint() / static_cast<double>(snapshots.cols());
    // Exact Hermitian symmetry regardless of GEMM rounding.
    return 0.5 * (r + r.adjoint());
}

CMatrix analytic_covariance(const CMatrix& psi, const RVector& source_powers, double noise_var) {
    if (source_powers.size() != psi.cols()) throw std::invalid_argument("analytic_covariance: size mismatch");
    CMatrix r = psi * source_powers.cast<cplx>().asDiagonal() * psi.adjoint();
    r.diagonal().array() += noise_var;
    return 0.5 * (r + r.adjoint());
}

Eigenpairs hermitian_eig(const CMatrix& r) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: decomposition failed");
    Eigenpairs out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

std::vector<double> aic_scores(const RVector& ev, int q0, int m_b, int snapshots, AicForm form) {
    const int p = q0 * m_b;
    if (ev.size() != p) throw std::invalid_argument("aic_scores: expected Q0 M_B eigenvalues");
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> scores(static_cast<std::size_t>(p), neg_inf);
    const double top = ev.maxCoeff();
    if (!(top > 0.0)) {
        scores[0] = 0.0;
        return scores;
    }
    const double floor = top * 1e-15;
    for (int k = 0; k < p; ++k) {
        const int rest = p - k;
        double log_sum = 0.0;
        double sum = 0.0;
        for (int i = k; i < p; ++i) {
            const double v = std::max(ev[i], floor);
            log_sum += std::log(v);
            sum += v;
        }
        if (form == AicForm::WaxKailath) {
            const double log_ratio = log_sum / rest - std::log(sum / rest);
            scores[static_cast<std::size_t>(k)] =
                static_cast<double>(snapshots) * rest * log_ratio - static_cast<double>(k) * (2.0 * p - k);
        } else {
            const int denom = m_b - k;
            if (denom <= 0) continue;
            const double log_ratio = log_sum / denom - std::log(sum / denom);
            scores[static_cast<std::size_t>(k)] = rest * log_ratio - 2.0 * k * rest;
        }
    }
    return scores;
}

int estimate_target_count(const RVector& ev, int q0, int m_b, int snapshots, AicForm form) {
    const auto scores = aic_scores(ev, q0, m_b, snapshots, form);
    int best = 0;
    for (std::size_t k = 1; k < scores.size(); ++k)
        if (scores[k] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
    return best;
}

CMatrix noise_subspace(const Eigenpairs& eig, int k) {
    const Eigen::Index p = eig.values.size();
    if (k < 0 || k >= p) throw std::invalid_argument("noise_subspace: empty noise subspace (K >= Q0 M_B)");
    return eig.vectors.rightCols(p - k);
}

RankReport verify_rank(const VirtualSteering& steering, const std::vector<std::pair<double, double>>& points,
                       double rel_threshold) {
    if (static_cast<Eigen::Index>(points.size()) > steering.dimension())
        throw std::invalid_argument("verify_rank: more points than virtual antennas");
    RankReport r;
    if (points.empty()) return r;
    const CMatrix psi = steering.matrix(points);
    Eigen::JacobiSVD<CMatrix> svd(psi);
    const RVector& s = svd.singularValues();
    if (s[0] == 0.0) return r;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > rel_threshold * s[0]) ++r.rank;
    r.condition = s[s.size() - 1] / s[0];
    return r;
}

} // namespace irsloc

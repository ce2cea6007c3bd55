// SPDX-License-Identifier: Apache-2.0

#include "irsloc/somp.hpp"

#include <stdexcept>

namespace irsloc {

std::vector<SompAtom> somp(const CMatrix& snapshots, const CMatrix& near_dict, const CMatrix& far_dict,
                           const SpectrumGrid& grid, int k) {
    std::vector<SompAtom> chosen;
    const Eigen::Index n_near = near_dict.cols();
    const Eigen::Index n_far = far_dict.cols();
    if (k <= 0 || n_near + n_far == 0) return chosen;
    if ((n_near > 0 && near_dict.rows() != snapshots.rows()) || (n_far > 0 && far_dict.rows() != snapshots.rows()))
        throw std::invalid_argument("somp: dictionary dimension mismatch");
    if (static_cast<std::size_t>(n_near) != grid.near_size || static_cast<std::size_t>(n_far) != grid.far.size())
        throw std::invalid_argument("somp: dictionaries do not match the grid");

    const RVector near_norm = n_near > 0 ? RVector(near_dict.colwise().norm().transpose()) : RVector();
    const RVector far_norm = n_far > 0 ? RVector(far_dict.colwise().norm().transpose()) : RVector();
    const auto near_pts = grid.near_points();
    const auto far_ang = grid.far_angles();

    CMatrix residual = snapshots;
    CMatrix basis(snapshots.rows(), 0);
    std::vector<bool> used_near(static_cast<std::size_t>(n_near), false), used_far(static_cast<std::size_t>(n_far), false);

    for (int step = 0; step < k; ++step) {
        SompAtom best;
        best.score = -1.0;
        auto scan = [&](const CMatrix& dict, const RVector& norms, std::vector<bool>& used, FieldType field) {
            if (dict.cols() == 0) return;
            const RVector score = (dict.adjoint() * residual).cwiseAbs().rowwise().sum();
            for (Eigen::Index j = 0; j < dict.cols(); ++j) {
                if (used[static_cast<std::size_t>(j)] || norms[j] == 0.0) continue;
                const double s = score[j] / norms[j];
                if (s > best.score) {
                    best.score = s;
                    best.field = field;
                    best.index = static_cast<std::size_t>(j);
                }
            }
        };
        scan(near_dict, near_norm, used_near, FieldType::Near);
        scan(far_dict, far_norm, used_far, FieldType::Far);
        if (best.score < 0.0) break;

        const auto j = static_cast<Eigen::Index>(best.index);
        if (best.field == FieldType::Near) {
            used_near[best.index] = true;
            best.d = near_pts[best.index].first;
            best.theta = near_pts[best.index].second;
        } else {
            used_far[best.index] = true;
            best.theta = far_ang[best.index];
        }
        chosen.push_back(best);

        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = best.field == FieldType::Near ? near_dict.col(j) : far_dict.col(j);
        // LS re-fit of all selected atoms.
        const CMatrix coef = basis.colPivHouseholderQr().solve(snapshots);
        residual = snapshots - basis * coef;
    }
    return chosen;
}

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#include "irsloc/estimation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsloc {

void GroupLassoConfig::validate() const {
    if (!(omega >= 0.0)) throw std::invalid_argument("group_lasso: omega must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("group_lasso: max_iters must be >= 1");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("group_lasso: rel_tol must be > 0");
}

namespace {

void check_inputs(const SymbolBlockArray& y, const PilotGrid& pilots, const CMatrix& e) {
    if (y.empty()) throw std::invalid_argument("group_lasso: no observations");
    if (y.rows() != e.rows()) throw std::invalid_argument("group_lasso: observation rows do not match E");
    if (pilots.num_symbols != y.num_symbols() || pilots.num_blocks != y.num_blocks() ||
        pilots.num_subcarriers != e.rows())
        throw std::invalid_argument("group_lasso: pilot grid does not cover the observations");
}

// The whole problem in stacked form. Every (q, t) shares the Gram matrix
// A^H A = p E^H E because diag(s) is unitary, so with X = [H_1 ... H_QV]
// (L x QV M_B) the smooth term is c0 - 2 Re<B, X> + <X, G X>.
struct Stacked {
    CMatrix gram;   // p E^H E
    CMatrix b;      // [A_1^H Y_1 ... A_QV^H Y_QV]
    double y_energy = 0.0;
    Eigen::Index m_b = 0;
    int q = 0;
    int v = 0;
};

Stacked stack_problem(const SymbolBlockArray& y, const PilotGrid& pilots, const CMatrix& e, double power) {
    Stacked s;
    s.m_b = y.cols();
    s.q = y.num_symbols();
    s.v = y.num_blocks();
    s.gram = power * (e.adjoint() * e);
    s.b.resize(e.cols(), static_cast<Eigen::Index>(s.q) * s.v * s.m_b);
    const double amp = std::sqrt(power);
    const CMatrix eh = e.adjoint();
    for (int t = 0; t < s.v; ++t) {
        for (int q = 0; q < s.q; ++q) {
            const CMatrix& yq = y.at(q, t);
            const CMatrix demod = pilots.at(q, t).conjugate().asDiagonal() * yq;
            const Eigen::Index col = (static_cast<Eigen::Index>(t) * s.q + q) * s.m_b;
            s.b.middleCols(col, s.m_b) = amp * (eh * demod);
            s.y_energy += yq.squaredNorm();
        }
    }
    return s;
}

double smooth_value(const Stacked& s, const CMatrix& x) {
    const double cross = (s.b.conjugate().cwiseProduct(x)).sum().real();
    const double quad = (x.conjugate().cwiseProduct(s.gram * x)).sum().real();
    return std::max(0.0, s.y_energy - 2.0 * cross + quad);
}

double penalty(const CMatrix& x, double omega) {
    if (omega == 0.0) return 0.0;
    return omega * x.rowwise().norm().sum();
}

// Gradient of the smooth term: 2 (G X - B).
CMatrix gradient(const Stacked& s, const CMatrix& x) { return 2.0 * (s.gram * x - s.b); }

CMatrix prox(const CMatrix& z, double tau) {
    if (tau == 0.0) return z;
    CMatrix out = z;
    for (Eigen::Index l = 0; l < z.rows(); ++l) {
        const double n = z.row(l).norm();
        out.row(l) *= n > tau ? 1.0 - tau / n : 0.0;
    }
    return out;
}

SymbolBlockArray unstack(const CMatrix& x, int q_count, int v_count, Eigen::Index m_b) {
    SymbolBlockArray out(q_count, v_count, x.rows(), m_b);
    for (int t = 0; t < v_count; ++t)
        for (int q = 0; q < q_count; ++q)
            out.at(q, t) = x.middleCols((static_cast<Eigen::Index>(t) * q_count + q) * m_b, m_b);
    return out;
}

CMatrix restack(const SymbolBlockArray& h) {
    const Eigen::Index m_b = h.cols();
    CMatrix x(h.rows(), static_cast<Eigen::Index>(h.num_symbols()) * h.num_blocks() * m_b);
    for (int t = 0; t < h.num_blocks(); ++t)
        for (int q = 0; q < h.num_symbols(); ++q)
            x.middleCols((static_cast<Eigen::Index>(t) * h.num_symbols() + q) * m_b, m_b) = h.at(q, t);
    return x;
}

double largest_eigenvalue(const CMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

} // namespace

double group_lasso_objective(const SymbolBlockArray& observations, const PilotGrid& pilots, const CMatrix& e,
                             double power, const SymbolBlockArray& h, double omega) {
    check_inputs(observations, pilots, e);
    const double amp = std::sqrt(power);
    double fit = 0.0;
    for (int t = 0; t < observations.num_blocks(); ++t)
        for (int q = 0; q < observations.num_symbols(); ++q) {
            const CMatrix model = (amp * pilots.at(q, t)).asDiagonal() * (e * h.at(q, t));
            fit += (observations.at(q, t) - model).squaredNorm();
        }
    return fit + penalty(restack(h), omega);
}

CirEstimate group_lasso(const SymbolBlockArray& observations, const PilotGrid& pilots, const CMatrix& e,
                        double power, const GroupLassoConfig& config) {
    config.validate();
    check_inputs(observations, pilots, e);
    if (!(power > 0.0)) throw std::invalid_argument("group_lasso: power must be > 0");
    const Stacked s = stack_problem(observations, pilots, e, power);

    // The smooth term has no 1/2 factor, hence Lip = 2 p sigma_max(E)^2.
    const double lip_exact = 2.0 * largest_eigenvalue(s.gram);
    double lip = config.step_rule == StepRule::Fixed ? lip_exact : 0.125 * lip_exact;
    const double omega = config.omega;

    auto composite = [&](const CMatrix& x) { return smooth_value(s, x) + penalty(x, omega); };

    CMatrix x = CMatrix::Zero(s.b.rows(), s.b.cols());
    CMatrix y = x;
    double fx = composite(x);
    double tk = 1.0;

    CirEstimate est;
    for (int it = 1; it <= config.max_iters; ++it) {
        const CMatrix g = gradient(s, y);
        CMatrix z;
        if (config.step_rule == StepRule::Fixed) {
            z = prox(y - g / lip, omega / lip);
        } else {
            const double fy = smooth_value(s, y);
            for (;;) {
                z = prox(y - g / lip, omega / lip);
                const CMatrix d = z - y;
                const double model = fy + (g.conjugate().cwiseProduct(d)).sum().real() + 0.5 * lip * d.squaredNorm();
                if (smooth_value(s, z) <= model * (1.0 + 1e-14) + 1e-300 || lip >= lip_exact) break;
                lip = std::min(2.0 * lip, lip_exact);
            }
        }
        const double fz = composite(z);
        est.iterations = it;

        if (fz > fx) {
            // Function-value restart: drop the momentum and retry from x.
            if (tk == 1.0) {
                // Plain proximal step from x did not decrease: x is optimal to
                // working precision.
                est.converged = true;
                if (config.keep_history) est.history.push_back(fx);
                break;
            }
            tk = 1.0;
            y = x;
            if (config.keep_history) est.history.push_back(fx);
            continue;
        }

        const double step = (z - x).norm();
        const double scale = std::max(z.norm(), 1e-300);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        y = z + ((tk - 1.0) / t_next) * (z - x);
        x = std::move(z);
        tk = t_next;
        fx = fz;
        if (config.keep_history) est.history.push_back(fx);
        if (step <= config.rel_tol * scale) {
            est.converged = true;
            break;
        }
    }

    est.objective = fx;
    est.group_energy = x.rowwise().squaredNorm();
    est.taps = unstack(x, s.q, s.v, s.m_b);
    return est;
}

SymbolBlockArray least_squares_cir(const SymbolBlockArray& observations, const PilotGrid& pilots, const CMatrix& e,
                                   double power) {
    check_inputs(observations, pilots, e);
    const Stacked s = stack_problem(observations, pilots, e, power);
    const CMatrix x = s.gram.ldlt().solve(s.b);
    return unstack(x, s.q, s.v, s.m_b);
}

OptimalityReport optimality_certificate(const SymbolBlockArray& observations, const PilotGrid& pilots,
                                        const CMatrix& e, double power, const SymbolBlockArray& h, double omega) {
    check_inputs(observations, pilots, e);
    const Stacked s = stack_problem(observations, pilots, e, power);
    const CMatrix x = restack(h);
    const CMatrix g = gradient(s, x);
    OptimalityReport r;
    for (Eigen::Index l = 0; l < x.rows(); ++l) {
        const double n = x.row(l).norm();
        if (n == 0.0) {
            ++r.zero_groups;
            const double ratio = omega > 0.0 ? g.row(l).norm() / omega : g.row(l).norm();
            r.worst_zero_group = std::max(r.worst_zero_group, ratio);
        } else {
            ++r.active_groups;
            r.worst_active_group = std::max(r.worst_active_group, (g.row(l) + (omega / n) * x.row(l)).norm());
        }
    }
    return r;
}

double default_omega(const OfdmConfig& config, int num_antennas, double c) {
    const CMatrix e = delay_manifold(config.num_subcarriers, config.num_taps);
    const double e_norm = std::sqrt(largest_eigenvalue(e.adjoint() * e));
    return c * std::sqrt(config.noise_var) *
           std::sqrt(static_cast<double>(config.symbols_per_block) * config.num_blocks * num_antennas) *
           std::sqrt(config.power) * e_norm;
}

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/ofdm.hpp"
#include "irsloc/types.hpp"

#include <vector>

namespace irsloc {

enum class StepRule { Fixed, Backtracking };

struct GroupLassoConfig {
    double omega = 0.0;
    int max_iters = 2000;
    double rel_tol = 1e-8;
    StepRule step_rule = StepRule::Fixed;
    // Record the objective after every iteration (property tests).
    bool keep_history = false;

    void validate() const;
};

struct CirEstimate {
    SymbolBlockArray taps;         // L x M_B per (q, t)
    RVector group_energy;          // g_l = sum_{q,t} |row l|^2, index l - 1
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;   // objective per iteration when requested
};

/// sum_{q,t} |Y - sqrt(p) diag(s) E H|_F^2 + omega sum_l sqrt(g_l).
double group_lasso_objective(const SymbolBlockArray& observations, const PilotGrid& pilots, const CMatrix& e,
                             double power, const SymbolBlockArray& h, double omega);

/// Accelerated proximal gradient with function-value restart. Observations are
/// N x M_B per (q, t) and the result holds L = e.cols() taps.
CirEstimate group_lasso(const SymbolBlockArray& observations, const PilotGrid& pilots, const CMatrix& e,
                        double power, const GroupLassoConfig& config);

/// Per-(q, t) least squares, (A^H A)^{-1} A^H Y with A = sqrt(p) diag(s) E.
SymbolBlockArray least_squares_cir(const SymbolBlockArray& observations, const PilotGrid& pilots, const CMatrix& e,
                                   double power);

// Optimality check of a group-LASSO solution.
struct OptimalityReport {
    double worst_zero_group = 0.0;    // max over zero groups of |grad_l| / omega
    double worst_active_group = 0.0;  // max over active groups of |grad_l + omega h_l/|h_l||
    int zero_groups = 0;
    int active_groups = 0;
};

OptimalityReport optimality_certificate(const SymbolBlockArray& observations, const PilotGrid& pilots,
                                        const CMatrix& e, double power, const SymbolBlockArray& h, double omega);

/// omega = c sigma sqrt(Q V M_B) sqrt(p) |E|_2.
double default_omega(const OfdmConfig& config, int num_antennas, double c = 3.0);

} // namespace irsloc

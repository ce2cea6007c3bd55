// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/geometry.hpp"

namespace irsloc {

struct FarSolveConfig {
    double weight = 0.5;          // on the angle residual; 1 - weight on the range residual
    double fallback_tol = 1e-6;   // |cos theta| below this uses the ray search

    void validate() const;
};

struct NearSolveConfig {
    double weight_angle = 1.0 / 3.0;
    double weight_ellipse = 1.0 / 3.0; // the range term gets 1 - both
    int max_iters = 50;
    double grad_tol = 1e-9;            // scaled by (1 + |objective|)
    double initial_damping = 1e-3;
    double min_irs_distance = 1e-3;    // iterates are kept this far from the IRS

    void validate() const;
    double weight_range() const { return 1.0 - weight_angle - weight_ellipse; }
};

struct TargetEstimate {
    FieldType field = FieldType::Far;
    int tap = 0;
    double theta = 0.0;
    double d = kInfiniteRange; // target-IRS range, near targets only
    Point2 pos;
    double objective = 0.0;
    int iterations = 0;
    bool converged = true;
    bool used_fallback = false;
};

/// (1 - w) (d_UT + d_TI + d_IB - total)^2 + w wrap(bearing - theta)^2.
double far_objective(const Anchors& anchors, Point2 p, double total_range, double theta, double weight);

/// Closed-form intersection of the AOA ray with the range ellipse. Throws when
/// the ellipse is empty (total - d_IB <= |IRS - user|).
TargetEstimate localize_far(const Anchors& anchors, double total_range, double theta, const FarSolveConfig& config = {});

struct NearResiduals {
    Eigen::Vector3d r;            // weighted residuals
    Eigen::Matrix<double, 3, 2> J; // their Jacobian in (x, y)
};

NearResiduals near_residuals(const Anchors& anchors, Point2 p, double total_range, double theta, double d_hat,
                             const NearSolveConfig& config);

double near_objective(const Anchors& anchors, Point2 p, double total_range, double theta, double d_hat,
                      const NearSolveConfig& config);

/// Levenberg-damped Gauss-Newton from the polar point (d_hat, theta).
TargetEstimate localize_near(const Anchors& anchors, double total_range, double theta, double d_hat,
                             const NearSolveConfig& config = {});

/// Angle difference wrapped into (-pi, pi].
double wrap_angle(double a);

} // namespace irsloc

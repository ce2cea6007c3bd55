// SPDX-License-Identifier: Apache-2.0

#include "irsloc/localize.hpp"

#include <cmath>
#include <stdexcept>

namespace irsloc {

void FarSolveConfig::validate() const {
    if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("localize_far: weight must be in [0, 1]");
    if (!(fallback_tol >= 0.0)) throw std::invalid_argument("localize_far: fallback_tol must be >= 0");
}

void NearSolveConfig::validate() const {
    if (!(weight_angle >= 0.0 && weight_ellipse >= 0.0 && weight_angle + weight_ellipse <= 1.0 + 1e-12))
        throw std::invalid_argument("localize_near: weights must be >= 0 with sum <= 1");
    if (max_iters < 1) throw std::invalid_argument("localize_near: max_iters must be >= 1");
    if (!(grad_tol > 0.0) || !(initial_damping > 0.0) || !(min_irs_distance > 0.0))
        throw std::invalid_argument("localize_near: tolerances must be > 0");
}

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

namespace {

double raw_bearing(Point2 irs, Point2 p) { return std::atan2(irs.y - p.y, irs.x - p.x); }

} // namespace

double far_objective(const Anchors& anchors, Point2 p, double total_range, double theta, double weight) {
    const double range_res = path_ranges(anchors, p).total() - total_range;
    const double angle_res = wrap_angle(raw_bearing(anchors.irs, p) - theta);
    return (1.0 - weight) * range_res * range_res + weight * angle_res * angle_res;
}

TargetEstimate localize_far(const Anchors& anchors, double total_range, double theta, const FarSolveConfig& config) {
    config.validate();
    const double d_ib = anchors.irs_bs_distance();
    if (!(total_range > d_ib)) throw std::invalid_argument("localize_far: total range must exceed d_IB");
    const double ax = anchors.irs.x - anchors.user.x;
    const double ay = anchors.irs.y - anchors.user.y;
    const double a2 = ax * ax + ay * ay;
    const double big_d = total_range - d_ib; // d_UT + d_TI
    if (!(big_d * big_d > a2))
        throw std::invalid_argument("localize_far: range ellipse is empty (total range too short for the IRS-user baseline)");

    TargetEstimate est;
    est.field = FieldType::Far;
    est.theta = theta;
    const double c = std::cos(theta);
    if (std::abs(c) > config.fallback_tol) {
        const double t = std::tan(theta);
        const double x = (big_d * big_d - a2) / (2.0 * (ax + ay * t - big_d / c));
        est.pos = {x + anchors.irs.x, x * t + anchors.irs.y};
    } else {
        // Ray T(r) = I - r (cos, sin); r -> |T - U| + r is increasing from
        // |a| < D, so bisection brackets the single root.
        est.used_fallback = true;
        auto f = [&](double r) {
            return distance(point_from_polar(anchors.irs, r, theta), anchors.user) + r - big_d;
        };
        double lo = 0.0, hi = big_d;
        for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + hi); ++i) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        est.pos = point_from_polar(anchors.irs, 0.5 * (lo + hi), theta);
    }
    est.objective = far_objective(anchors, est.pos, total_range, theta, config.weight);
    return est;
}

NearResiduals near_residuals(const Anchors& anchors, Point2 p, double total_range, double theta, double d_hat,
                             const NearSolveConfig& config) {
    const double w1 = std::sqrt(config.weight_angle);
    const double w2 = std::sqrt(config.weight_ellipse);
    const double w3 = std::sqrt(std::max(0.0, config.weight_range()));
    const double dx = anchors.irs.x - p.x;
    const double dy = anchors.irs.y - p.y;
    const double d_ti = std::hypot(dx, dy);
    const double ux = p.x - anchors.user.x;
    const double uy = p.y - anchors.user.y;
    const double d_ut = std::hypot(ux, uy);

    NearResiduals out;
    out.r << w1 * wrap_angle(std::atan2(dy, dx) - theta),
        w2 * (d_ut + d_ti + anchors.irs_bs_distance() - total_range), w3 * (d_ti - d_hat);

    const double r2 = d_ti * d_ti;
    // Unit vectors from the IRS and from the user toward p.
    const double gx_ti = d_ti > 0.0 ? -dx / d_ti : 0.0;
    const double gy_ti = d_ti > 0.0 ? -dy / d_ti : 0.0;
    const double gx_ut = d_ut > 0.0 ? ux / d_ut : 0.0;
    const double gy_ut = d_ut > 0.0 ? uy / d_ut : 0.0;
    out.J << w1 * dy / r2, -w1 * dx / r2,
        w2 * (gx_ut + gx_ti), w2 * (gy_ut + gy_ti),
        w3 * gx_ti, w3 * gy_ti;
    return out;
}

double near_objective(const Anchors& anchors, Point2 p, double total_range, double theta, double d_hat,
                      const NearSolveConfig& config) {
    return near_residuals(anchors, p, total_range, theta, d_hat, config).r.squaredNorm();
}

TargetEstimate localize_near(const Anchors& anchors, double total_range, double theta, double d_hat,
                             const NearSolveConfig& config) {
    config.validate();
    if (!(d_hat > 0.0)) throw std::invalid_argument("localize_near: d_hat must be > 0");

    auto clamp = [&](Point2 p) {
        const double dx = p.x - anchors.irs.x;
        const double dy = p.y - anchors.irs.y;
        const double r = std::hypot(dx, dy);
        if (r >= config.min_irs_distance) return p;
        if (r == 0.0) return point_from_polar(anchors.irs, config.min_irs_distance, theta);
        const double s = config.min_irs_distance / r;
        return Point2{anchors.irs.x + dx * s, anchors.irs.y + dy * s};
    };

    TargetEstimate est;
    est.field = FieldType::Near;
    est.theta = theta;
    est.d = d_hat;
    Point2 p = clamp(point_from_polar(anchors.irs, d_hat, theta));
    NearResiduals res = near_residuals(anchors, p, total_range, theta, d_hat, config);
    double f = res.r.squaredNorm();
    double lambda = config.initial_damping;
    est.converged = false;

    for (int it = 0; it < config.max_iters; ++it) {
        const Eigen::Vector2d grad = 2.0 * res.J.transpose() * res.r;
        if (f == 0.0 || grad.norm() < config.grad_tol * (1.0 + std::abs(f))) {
            est.converged = true;
            break;
        }
        const Eigen::Matrix2d jtj = res.J.transpose() * res.J;
        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::Matrix2d a = jtj;
            a.diagonal().array() += lambda * (1.0 + jtj.diagonal().maxCoeff());
            const Eigen::Vector2d step = a.ldlt().solve(-res.J.transpose() * res.r);
            const Point2 cand = clamp({p.x + step[0], p.y + step[1]});
            const NearResiduals cres = near_residuals(anchors, cand, total_range, theta, d_hat, config);
            const double fc = cres.r.squaredNorm();
            if (fc < f) {
                p = cand;
                res = cres;
                f = fc;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        est.iterations = it + 1;
        if (!accepted) {
            // No damped step decreases the objective: stationary to precision.
            est.converged = true;
            break;
        }
    }
    est.pos = p;
    est.objective = f;
    return est;
}

} // namespace irsloc

// SPDX-License-Identifier: Apache-2.0

#include "irsloc/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsloc {

void UlaGeometry::validate(const char* what) const {
    if (num_elements < 1) throw std::invalid_argument(std::string(what) + ": num_elements must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument(std::string(what) + ": element spacing must be > 0");
}

FieldType Scene::field_of(Point2 p) const {
    return distance(p, irs) <= near_field_radius ? FieldType::Near : FieldType::Far;
}

void Scene::add_target(Point2 pos, double pathloss) {
    targets.push_back({pos, pathloss, field_of(pos)});
}

void Scene::validate() const {
    if (!(wavelength > 0.0)) throw std::invalid_argument("scene: wavelength must be > 0");
    if (!(near_field_radius > 0.0)) throw std::invalid_argument("scene: near-field radius must be > 0");
    irs_array.validate("scene.irs_array");
    bs_array.validate("scene.bs_array");
    if (user == bs || user == irs || bs == irs)
        throw std::invalid_argument("scene: user, BS and IRS positions must be pairwise distinct");
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const auto& t = targets[k];
        if (!(t.pathloss >= 0.0))
            throw std::invalid_argument("scene: target " + std::to_string(k) + " has negative pathloss");
        if (!(t.pos.y < irs.y))
            throw std::invalid_argument("scene: target " + std::to_string(k) +
                                        " is not on the y < y_irs side of the IRS");
        if (t.field != field_of(t.pos))
            throw std::invalid_argument("scene: target " + std::to_string(k) +
                                        " field tag disagrees with the near-field radius");
    }
}

namespace {

const TargetTruth& target_at(const Scene& scene, std::size_t k) {
    if (k >= scene.targets.size())
        throw std::out_of_range("target index " + std::to_string(k) + " out of range");
    return scene.targets[k];
}

} // namespace

double distance_to_irs(const Scene& scene, std::size_t target_index) {
    return distance(target_at(scene, target_index).pos, scene.irs);
}

double bearing_at(Point2 irs, Point2 p) {
    const double dx = irs.x - p.x;
    const double dy = irs.y - p.y;
    if (dx == 0.0 && dy == 0.0) throw std::invalid_argument("bearing undefined for a point at the IRS");
    double theta = std::atan2(dy, dx);
    if (theta < 0.0) theta += kPi;
    if (theta >= kPi) theta -= kPi;
    return theta;
}

double aoa_to_irs(const Scene& scene, std::size_t target_index) {
    return bearing_at(scene.irs, target_at(scene, target_index).pos);
}

Point2 point_from_polar(Point2 irs, double d, double theta) {
    return {irs.x - d * std::cos(theta), irs.y - d * std::sin(theta)};
}

CVector steering_near(const UlaGeometry& geom, double wavelength, double d, double eta, SteeringModel model) {
    if (!(d > 0.0)) throw std::invalid_argument("steering_near: range must be > 0");
    const double k0 = 2.0 * kPi / wavelength;
    const double c = std::cos(eta);
    const double s = std::sin(eta);
    CVector a(geom.num_elements);
    for (int m = 0; m < geom.num_elements; ++m) {
        const double x = m * geom.spacing;
        double path;
        if (model == SteeringModel::Fresnel) {
            path = x * c + (x * s) * (x * s) / (2.0 * d);
        } else {
            // Distance from the point to element m minus the reference distance d,
            // written to avoid cancellation for d >> x.
            const double q = x * x + 2.0 * x * d * c;
            path = q / (std::sqrt(d * d + q) + d);
        }
        a[m] = std::polar(1.0, -k0 * path);
    }
    return a;
}

CVector steering_far(const UlaGeometry& geom, double wavelength, double eta) {
    const double k0 = 2.0 * kPi / wavelength;
    const double c = std::cos(eta);
    CVector a(geom.num_elements);
    for (int m = 0; m < geom.num_elements; ++m) a[m] = std::polar(1.0, -k0 * m * geom.spacing * c);
    return a;
}

CVector steering(const UlaGeometry& geom, double wavelength, double effective_range, double eta,
                 SteeringModel model) {
    if (std::isinf(effective_range)) return steering_far(geom, wavelength, eta);
    return steering_near(geom, wavelength, effective_range, eta, model);
}

PathRanges path_ranges(const Anchors& anchors, Point2 target) {
    return {distance(anchors.user, target), distance(target, anchors.irs), anchors.irs_bs_distance()};
}

PathRanges path_ranges(const Scene& scene, std::size_t target_index) {
    return path_ranges(scene.anchors(), target_at(scene, target_index).pos);
}

} // namespace irsloc

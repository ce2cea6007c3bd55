// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/types.hpp"

#include <cstddef>
#include <vector>

namespace irsloc {

// Uniform linear array laid out along +x from its reference element.
struct UlaGeometry {
    int num_elements = 1;
    double spacing = 0.0; // m

    void validate(const char* what) const;
};

struct TargetTruth {
    Point2 pos;
    double pathloss = 1.0;
    FieldType field = FieldType::Far;
};

// Anchor positions; enough for everything in Phase III.
struct Anchors {
    Point2 user;
    Point2 bs;
    Point2 irs;

    double irs_bs_distance() const { return distance(irs, bs); }
};

// 2D deployment. Targets live on the side y < y_irs of the IRS, so the AOA of
// every admissible target lies in (0, pi).
struct Scene {
    Point2 user;
    Point2 bs;
    Point2 irs;
    std::vector<TargetTruth> targets;
    double wavelength = 0.1;        // m
    double near_field_radius = 30;  // m
    UlaGeometry irs_array{64, 0.05};
    UlaGeometry bs_array{4, 0.05};

    Anchors anchors() const { return {user, bs, irs}; }

    FieldType field_of(Point2 p) const;

    // Appends a target with its field tag derived from the near-field radius.
    void add_target(Point2 pos, double pathloss = 1.0);

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

/// Euclidean distance from target k to the IRS reference element.
double distance_to_irs(const Scene& scene, std::size_t target_index);

/// AOA of target k at the IRS, atan((y_I - y_k) / (x_I - x_k)) folded into [0, pi).
double aoa_to_irs(const Scene& scene, std::size_t target_index);

/// Bearing of an arbitrary point at `irs`, same convention as aoa_to_irs.
double bearing_at(Point2 irs, Point2 p);

/// Inverse of (distance, bearing): the point at range d and AOA theta from the IRS.
Point2 point_from_polar(Point2 irs, double d, double theta);

enum class SteeringModel {
    Fresnel, // second-order phase expansion, the manifold the estimator searches
    Exact,   // exact spherical wavefront, for mismatch experiments
};

/// Near-field ULA response toward range d (> 0) and angle eta; element 0 is the
/// phase reference.
CVector steering_near(const UlaGeometry& geom, double wavelength, double d, double eta,
                      SteeringModel model = SteeringModel::Fresnel);

/// Far-field ULA response toward angle eta.
CVector steering_far(const UlaGeometry& geom, double wavelength, double eta);

/// Dispatches on the effective range: infinity selects the far-field response.
CVector steering(const UlaGeometry& geom, double wavelength, double effective_range, double eta,
                 SteeringModel model = SteeringModel::Fresnel);

struct PathRanges {
    double user_target = 0.0;
    double target_irs = 0.0;
    double irs_bs = 0.0;

    double total() const { return user_target + target_irs + irs_bs; }
};

PathRanges path_ranges(const Anchors& anchors, Point2 target);
PathRanges path_ranges(const Scene& scene, std::size_t target_index);

} // namespace irsloc

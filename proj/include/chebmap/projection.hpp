#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "chebmap/geo.hpp"

namespace chebmap {

enum class ProjectionKind {
    mercator,
    equal_area_cylindrical,
    stereographic,
    conformal_conic,
    lagrange_circle,
    delisle_conic,
};

struct ProjectionParams {
    GeoPoint center{0.0, 0.0};       // stereographic projection point
    double cone_n = 0.6;             // conformal conic cone constant, (0, 1]
    double exponent = 1.0;           // lagrange_circle exponent, > 0
    double central_meridian = 0.0;   // conic / lagrange / delisle
    double ref_lat = std::numeric_limits<double>::quiet_NaN();  // conic scale parallel
    double std_parallel_1 = deg2rad(40.0);  // delisle
    double std_parallel_2 = deg2rad(60.0);
    double scale = 1.0;              // global output scale
};

// A named sphere -> plane map. Conformal kinds carry holo_derivative: the
// complex derivative dw/dz of the image w = x + i*y with respect to the
// Mercator coordinate of the sphere point, so the local magnification is
// |holo_derivative| * cosh(u).
struct ProjectionMap {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    std::function<PlanePoint(const GeoPoint&)> forward;
    std::function<GeoPoint(const PlanePoint&)> inverse;  // empty if unavailable
    std::function<std::complex<double>(const PlanePoint&)> holo_derivative;
    std::string singular_desc;
    std::function<bool(const GeoPoint&)> is_singular;
};

ProjectionMap make_projection(ProjectionKind kind, const ProjectionParams& p = {});

ProjectionKind projection_kind_from_name(const std::string& name);

// Evaluates the map, rejecting singular input. Throws SingularPoint.
PlanePoint project(const ProjectionMap& map, const GeoPoint& p);

// Same map with all output lengths multiplied by s.
ProjectionMap scaled(const ProjectionMap& map, double s);

// True iff the images of n_samples points of the great circle with the given
// axis fit a straight line or a circle with max residual < tol. Samples on
// the singular set are skipped (isolated points). Throws InsufficientSamples
// when fewer than 8 usable samples remain.
bool great_circle_image_check(const ProjectionMap& map, const Vec3& axis,
                              int n_samples, double tol);

}  // namespace chebmap

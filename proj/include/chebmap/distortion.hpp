#pragma once

#include <set>
#include <string>

#include "chebmap/grid.hpp"
#include "chebmap/projection.hpp"

namespace chebmap {

// Local distortion data at one point: principal scales (Tissot semi-axes)
// of the map differential relative to the sphere metric.
struct DistortionSample {
    GeoPoint point;
    double k_meridian{};      // scale along the meridian
    double k_parallel{};      // scale along the parallel
    double tissot_a{};        // larger semi-axis
    double tissot_b{};        // smaller semi-axis
    double angle_distortion{};  // max angular deviation, 2 asin((a-b)/(a+b))
    double m{};               // magnification ratio; NaN unless a ~= b
};

// Euler's three map hypotheses.
enum class EulerHypothesis { H1, H2, H3 };

struct DistortionReport {
    std::string region_name;
    int resolution{};
    double m_min{};  // min of tissot_b over the region
    double m_max{};  // max of tissot_a over the region
    double ratio{};  // m_max / m_min, >= 1, invariant under uniform rescaling
    ScalarField log_m;  // log sqrt(a*b) on interior + boundary cells
    std::set<EulerHypothesis> classification;
};

// Central-difference Jacobian relative to the sphere metric; singular values
// give the Tissot axes. Throws SingularPoint, StepUnderflow.
DistortionSample local_scales(const ProjectionMap& map, const GeoPoint& p,
                              double h = 1e-5);

// Lagrange's magnification ratio |f'(z)| cosh(u) for conformal maps.
// Throws NotConformal when the map carries no analytic derivative.
double magnification_conformal(const ProjectionMap& map, const GeoPoint& p);

// Classifies the map over the region into the subset of Euler's hypotheses
// it satisfies within tol: H1 axis-aligned graticule (up to one global
// rotation), H2 conformal, H3 constant area scale.
std::set<EulerHypothesis> classify_euler(const ProjectionMap& map,
                                         const Region& region, int grid = 24,
                                         double tol = 1e-4);

// Distortion over the region sampled on a Mercator-plane grid; boundary
// cells are evaluated at the nearest point of the boundary curve so the
// extremes include the boundary itself.
DistortionReport distortion_report(const ProjectionMap& map, const Region& region,
                                   int resolution = 96);

std::string classification_to_string(const std::set<EulerHypothesis>& cls);

}  // namespace chebmap

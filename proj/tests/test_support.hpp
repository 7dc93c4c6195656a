#pragma once

#include <random>

#include "chebmap/geo.hpp"
#include "chebmap/projection.hpp"

namespace chebmap::test {

// deterministic generators shared across suites
inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed1234);
    return gen;
}

inline GeoPoint random_point(std::mt19937& gen, double max_abs_lat = deg2rad(60.0),
                             double max_abs_lon = deg2rad(150.0)) {
    std::uniform_real_distribution<double> lon(-max_abs_lon, max_abs_lon);
    std::uniform_real_distribution<double> lat(-max_abs_lat, max_abs_lat);
    return {lon(gen), lat(gen)};
}

inline Vec3 random_unit(std::mt19937& gen) {
    std::normal_distribution<double> n(0.0, 1.0);
    return normalized(Vec3{n(gen), n(gen), n(gen)});
}

// finite-difference local scale of the plane map w(zeta) in Mercator
// coordinates; independent cross-check for analytic derivatives
inline double fd_mercator_scale(const ProjectionMap& map, const GeoPoint& p,
                                double h = 1e-6) {
    PlanePoint z = mercator_forward(p);
    auto at = [&](double x, double y) { return map.forward(mercator_inverse({x, y})); };
    PlanePoint pe = at(z.x + h, z.y), pw = at(z.x - h, z.y);
    PlanePoint pn = at(z.x, z.y + h), ps = at(z.x, z.y - h);
    double sx = std::hypot(pe.x - pw.x, pe.y - pw.y) / (2 * h);
    double sy = std::hypot(pn.x - ps.x, pn.y - ps.y) / (2 * h);
    return 0.5 * (sx + sy);
}

}  // namespace chebmap::test

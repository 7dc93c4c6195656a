#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "chebmap/errors.hpp"

namespace chebmap {

constexpr double kPi = 3.14159265358979323846;

// Regions must stay clear of the poles: the isometric latitude diverges
// there, so everything routed through the Mercator plane stops at this cap.
constexpr double kLatCap = 85.0 * kPi / 180.0;

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

// Position on the unit sphere. lon in (-pi, pi], lat in (-pi/2, pi/2).
struct GeoPoint {
    double lon{};
    double lat{};
};

// Point in a projection plane (or in Mercator coordinates (t, u)).
struct PlanePoint {
    double x{};
    double y{};
};

struct Vec3 {
    double x{}, y{}, z{};

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

Vec3 to_unit_vector(const GeoPoint& p);
GeoPoint to_geo_point(const Vec3& v);

// Angle between two unit vectors, in [0, pi]. Accurate near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);

// (lon, lat) -> (t, u) with u the isometric latitude ln tan(pi/4 + lat/2).
// sech(u) = cos(lat). Throws PoleError when |lat| >= kLatCap.
PlanePoint mercator_forward(const GeoPoint& p);
GeoPoint mercator_inverse(const PlanePoint& q);

// Great-circle distance on the unit sphere, in [0, pi].
double geodesic_distance(const GeoPoint& a, const GeoPoint& b);

// Unit-speed geodesic interpolation between unit vectors.
Vec3 slerp(const Vec3& a, const Vec3& b, double t);

// Intersection of two small circles {p : angle(p, c) = r}. Returns 0, 1 or 2
// unit vectors; in the two-point case the point on the positive side of
// c1 x c2 comes first. Throws DegenerateCenters when c1 = +-c2 and
// NoIntersection when the circles are disjoint.
std::vector<Vec3> sphere_circle_intersect(const Vec3& c1, double r1,
                                          const Vec3& c2, double r2);

namespace detail {
// Non-throwing core used by the net builder; returns the point count, or 0
// when the circles miss (including degenerate centers).
int circle_intersect_raw(const Vec3& c1, double r1, const Vec3& c2, double r2,
                         Vec3 out[2]);
}  // namespace detail

// Simply connected region bounded by a closed counterclockwise polyline of
// sphere points (consecutive points joined by geodesics).
struct Region {
    std::vector<GeoPoint> boundary;
    std::string name;
};

// Checks vertex count, latitude cap, orientation and simplicity (in the
// Mercator plane). Throws BadRegion / NotSimple.
void validate_region(const Region& region);

// Redistributes n >= 8 points at equal arclength along the boundary.
Region resample_boundary(const Region& region, int n);

GeoPoint region_centroid(const Region& region);

// Even-odd test against the Mercator image of the boundary.
bool region_contains(const Region& region, const GeoPoint& p);

// Mercator image of the boundary (same vertex order, not closed).
std::vector<PlanePoint> region_mercator_outline(const Region& region);

// Geodesic cap of the given angular radius; boundary is an n-gon, CCW.
Region make_cap(const GeoPoint& center, double radius, int n_vertices,
                std::string name = "cap");

// Lon/lat quadrangle with each side densified to per_side points.
Region make_lonlat_quad(double lon0, double lon1, double lat0, double lat1,
                        int per_side, std::string name = "quad");

}  // namespace chebmap

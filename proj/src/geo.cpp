#include "chebmap/geo.hpp"

#include <algorithm>
#include <cmath>

namespace chebmap {

Vec3 to_unit_vector(const GeoPoint& p) {
    double cl = std::cos(p.lat);
    return {cl * std::cos(p.lon), cl * std::sin(p.lon), std::sin(p.lat)};
}

GeoPoint to_geo_point(const Vec3& v) {
    Vec3 u = normalized(v);
    return {std::atan2(u.y, u.x), std::asin(std::clamp(u.z, -1.0, 1.0))};
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

PlanePoint mercator_forward(const GeoPoint& p) {
    if (std::abs(p.lat) >= kLatCap)
        throw PoleError("latitude " + std::to_string(rad2deg(p.lat)) +
                        " deg at or beyond the 85 deg Mercator cap");
    // asinh(tan(lat)) == ln tan(pi/4 + lat/2), stable for all valid lat
    return {p.lon, std::asinh(std::tan(p.lat))};
}

GeoPoint mercator_inverse(const PlanePoint& q) {
    return {q.x, std::atan(std::sinh(q.y))};
}

double geodesic_distance(const GeoPoint& a, const GeoPoint& b) {
    return angle_between(to_unit_vector(a), to_unit_vector(b));
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
    double ang = angle_between(a, b);
    if (ang < 1e-15) return a;
    double s = std::sin(ang);
    double wa = std::sin((1.0 - t) * ang) / s;
    double wb = std::sin(t * ang) / s;
    return normalized(a * wa + b * wb);
}

namespace detail {

int circle_intersect_raw(const Vec3& c1, double r1, const Vec3& c2, double r2,
                         Vec3 out[2]) {
    const Vec3 n = cross(c1, c2);
    const double n2 = dot(n, n);
    if (n2 < 1e-24) return 0;

    // p = alpha*c1 + beta*c2 + gamma*n with dot(p,c1)=cos r1, dot(p,c2)=cos r2
    const double d = dot(c1, c2);
    const double det = 1.0 - d * d;  // == n2 for unit centers
    const double k1 = std::cos(r1);
    const double k2 = std::cos(r2);
    const double alpha = (k1 - d * k2) / det;
    const double beta = (k2 - d * k1) / det;
    const double planar2 = alpha * alpha + beta * beta + 2.0 * alpha * beta * d;
    const double g2 = (1.0 - planar2) / n2;

    const Vec3 base = c1 * alpha + c2 * beta;
    if (g2 > 1e-14) {
        double g = std::sqrt(g2);
        out[0] = normalized(base + n * g);
        out[1] = normalized(base - n * g);
        return 2;
    }
    if (g2 > -1e-14) {
        out[0] = normalized(base);
        return 1;
    }
    return 0;
}

}  // namespace detail

std::vector<Vec3> sphere_circle_intersect(const Vec3& c1, double r1,
                                          const Vec3& c2, double r2) {
    if (!(r1 > 0.0 && r1 < kPi && r2 > 0.0 && r2 < kPi))
        throw BadParam("circle radii must lie in (0, pi)");
    if (norm(cross(c1, c2)) < 1e-12)
        throw DegenerateCenters("circle centers are identical or antipodal");
    Vec3 pts[2];
    int count = detail::circle_intersect_raw(normalized(c1), r1, normalized(c2), r2, pts);
    if (count == 0) throw NoIntersection("circles do not intersect");
    return std::vector<Vec3>(pts, pts + count);
}

// --- regions -----------------------------------------------------------

namespace {

bool segments_cross(const PlanePoint& a, const PlanePoint& b,
                    const PlanePoint& c, const PlanePoint& d) {
    auto orient = [](const PlanePoint& p, const PlanePoint& q, const PlanePoint& r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    };
    double o1 = orient(a, b, c), o2 = orient(a, b, d);
    double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

double signed_area(const std::vector<PlanePoint>& poly) {
    double s = 0.0;
    for (size_t i = 0, n = poly.size(); i < n; ++i) {
        const PlanePoint& p = poly[i];
        const PlanePoint& q = poly[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

}  // namespace

std::vector<PlanePoint> region_mercator_outline(const Region& region) {
    std::vector<PlanePoint> out;
    out.reserve(region.boundary.size());
    for (const GeoPoint& p : region.boundary) out.push_back(mercator_forward(p));
    return out;
}

void validate_region(const Region& region) {
    const auto& b = region.boundary;
    if (b.size() < 3) throw BadRegion("region boundary needs at least 3 points");
    for (const GeoPoint& p : b) {
        if (std::abs(p.lat) > kLatCap)
            throw BadRegion("region crosses the 85 deg latitude cap");
        if (!std::isfinite(p.lat) || !std::isfinite(p.lon))
            throw BadRegion("non-finite boundary coordinate");
    }
    std::vector<PlanePoint> poly = region_mercator_outline(region);
    const size_t n = poly.size();
    if (n <= 4096) {
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
                if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                    throw NotSimple("boundary is self-intersecting");
            }
        }
    }
    if (signed_area(poly) <= 0.0)
        throw BadRegion("boundary must be counterclockwise");
}

Region resample_boundary(const Region& region, int n) {
    if (n < 8) throw BadParam("resample_boundary needs n >= 8");
    if (region.boundary.size() < 3)
        throw BadRegion("region boundary needs at least 3 points");

    std::vector<Vec3> verts;
    verts.reserve(region.boundary.size());
    for (const GeoPoint& p : region.boundary) verts.push_back(to_unit_vector(p));

    const size_t m = verts.size();
    std::vector<double> cum(m + 1, 0.0);
    for (size_t i = 0; i < m; ++i)
        cum[i + 1] = cum[i] + angle_between(verts[i], verts[(i + 1) % m]);
    const double total = cum[m];
    if (total <= 0.0) throw BadRegion("degenerate (zero-length) boundary");

    Region out;
    out.name = region.name;
    out.boundary.reserve(n);
    size_t seg = 0;
    for (int k = 0; k < n; ++k) {
        double s = total * k / n;
        while (seg + 1 < m && cum[seg + 1] < s) ++seg;
        double len = cum[seg + 1] - cum[seg];
        double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
        out.boundary.push_back(to_geo_point(slerp(verts[seg], verts[(seg + 1) % m], t)));
    }
    return out;
}

GeoPoint region_centroid(const Region& region) {
    Vec3 acc{};
    for (const GeoPoint& p : region.boundary) acc = acc + to_unit_vector(p);
    if (norm(acc) < 1e-12) throw BadRegion("boundary has no well-defined centroid");
    return to_geo_point(acc);
}

bool region_contains(const Region& region, const GeoPoint& p) {
    if (std::abs(p.lat) >= kLatCap) return false;
    std::vector<PlanePoint> poly = region_mercator_outline(region);
    PlanePoint q = mercator_forward(p);
    bool inside = false;
    for (size_t i = 0, n = poly.size(), j = n - 1; i < n; j = i++) {
        if ((poly[i].y > q.y) != (poly[j].y > q.y)) {
            double xcross = poly[j].x + (poly[i].x - poly[j].x) *
                                            (q.y - poly[j].y) / (poly[i].y - poly[j].y);
            if (q.x < xcross) inside = !inside;
        }
    }
    return inside;
}

Region make_cap(const GeoPoint& center, double radius, int n_vertices,
                std::string name) {
    if (!(radius > 0.0 && radius < kPi / 2))
        throw BadParam("cap radius must lie in (0, pi/2)");
    if (n_vertices < 3) throw BadParam("cap needs at least 3 vertices");
    const Vec3 c = to_unit_vector(center);
    // right-handed frame at c so theta runs counterclockwise seen from outside
    Vec3 ref = std::abs(c.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 e1 = normalized(cross(ref, c));
    const Vec3 e2 = cross(c, e1);
    Region r;
    r.name = std::move(name);
    r.boundary.reserve(n_vertices);
    const double cr = std::cos(radius), sr = std::sin(radius);
    for (int k = 0; k < n_vertices; ++k) {
        double th = 2.0 * kPi * k / n_vertices;
        Vec3 p = c * cr + (e1 * std::cos(th) + e2 * std::sin(th)) * sr;
        r.boundary.push_back(to_geo_point(p));
    }
    validate_region(r);
    return r;
}

Region make_lonlat_quad(double lon0, double lon1, double lat0, double lat1,
                        int per_side, std::string name) {
    if (!(lon1 > lon0 && lat1 > lat0)) throw BadParam("quad bounds must be ordered");
    if (per_side < 2) throw BadParam("quad needs at least 2 points per side");
    Region r;
    r.name = std::move(name);
    auto edge = [&](double la0, double lo0, double la1, double lo1) {
        for (int k = 0; k < per_side; ++k) {
            double t = static_cast<double>(k) / per_side;
            r.boundary.push_back({lo0 + t * (lo1 - lo0), la0 + t * (la1 - la0)});
        }
    };
    edge(lat0, lon0, lat0, lon1);  // south side, west to east
    edge(lat0, lon1, lat1, lon1);  // east side, going north
    edge(lat1, lon1, lat1, lon0);  // north side, east to west
    edge(lat1, lon0, lat0, lon0);  // west side, going south
    validate_region(r);
    return r;
}

}  // namespace chebmap

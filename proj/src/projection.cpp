#include "chebmap/projection.hpp"

#include <algorithm>
#include <cmath>

namespace chebmap {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

double isometric_lat(double lat) { return std::asinh(std::tan(lat)); }

// Unit quaternion (w, x, y, z) rotating `from` onto `to`.
struct Quat {
    double w, x, y, z;
};

Quat rotation_between(const Vec3& from, const Vec3& to) {
    Vec3 axis = cross(from, to);
    double n = norm(axis);
    double ang = std::atan2(n, dot(from, to));
    if (n < 1e-15) {
        if (dot(from, to) > 0.0) return {1, 0, 0, 0};
        // antipodal: half-turn about any perpendicular axis
        Vec3 perp = std::abs(from.x) < 0.9 ? cross(from, Vec3{1, 0, 0})
                                           : cross(from, Vec3{0, 1, 0});
        perp = normalized(perp);
        return {0, perp.x, perp.y, perp.z};
    }
    axis = axis * (1.0 / n);
    double s = std::sin(0.5 * ang);
    return {std::cos(0.5 * ang), axis.x * s, axis.y * s, axis.z * s};
}

Vec3 rotate(const Quat& q, const Vec3& v) {
    const Vec3 qv{q.x, q.y, q.z};
    const Vec3 t = cross(qv, v) * 2.0;
    return v + t * q.w + cross(qv, t);
}

Quat conjugate(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }

std::string kind_name(ProjectionKind k) {
    switch (k) {
        case ProjectionKind::mercator: return "mercator";
        case ProjectionKind::equal_area_cylindrical: return "equal_area_cylindrical";
        case ProjectionKind::stereographic: return "stereographic";
        case ProjectionKind::conformal_conic: return "conformal_conic";
        case ProjectionKind::lagrange_circle: return "lagrange_circle";
        case ProjectionKind::delisle_conic: return "delisle_conic";
    }
    return "?";
}

ProjectionMap make_mercator(double s) {
    ProjectionMap m;
    m.name = "mercator";
    m.params = {{"scale", s}};
    m.forward = [s](const GeoPoint& p) {
        PlanePoint q = mercator_forward(p);
        return PlanePoint{s * q.x, s * q.y};
    };
    m.inverse = [s](const PlanePoint& q) {
        return mercator_inverse({q.x / s, q.y / s});
    };
    m.holo_derivative = [s](const PlanePoint&) { return cplx{s, 0.0}; };
    m.singular_desc = "poles (isometric latitude diverges beyond the 85 deg cap)";
    m.is_singular = [](const GeoPoint& p) { return std::abs(p.lat) >= kLatCap; };
    return m;
}

ProjectionMap make_equal_area_cylindrical(double s) {
    ProjectionMap m;
    m.name = "equal_area_cylindrical";
    m.params = {{"scale", s}};
    m.forward = [s](const GeoPoint& p) {
        return PlanePoint{s * p.lon, s * std::sin(p.lat)};
    };
    m.inverse = [s](const PlanePoint& q) {
        return GeoPoint{q.x / s, std::asin(std::clamp(q.y / s, -1.0, 1.0))};
    };
    m.singular_desc = "none";
    m.is_singular = [](const GeoPoint&) { return false; };
    return m;
}

ProjectionMap make_stereographic(const GeoPoint& center, double s) {
    ProjectionMap m;
    m.name = "stereographic";
    m.params = {{"center_lon", center.lon}, {"center_lat", center.lat}, {"scale", s}};

    const Vec3 c = to_unit_vector(center);
    const Quat q = rotation_between(c, Vec3{0, 0, 1});
    const Quat qinv = conjugate(q);
    // Mobius action of the rotation on sigma = e^{i zeta}
    const cplx a{q.w, q.z};
    const cplx b{-q.y, q.x};

    // base derivative (before the north-up rotation): 2 i sigma / (conj(b) sigma + conj(a))^2
    auto dbase = [a, b](cplx zeta) {
        cplx sigma = std::exp(kI * zeta);
        cplx den = std::conj(b) * sigma + std::conj(a);
        return 2.0 * kI * sigma / (den * den);
    };

    // rotate the image so north at the center points up
    cplx spin{1.0, 0.0};
    if (std::abs(center.lat) < kLatCap) {
        cplx d0 = dbase(cplx{center.lon, isometric_lat(center.lat)});
        if (std::abs(d0) > 0.0) spin = std::conj(d0) / std::abs(d0);
    }

    m.forward = [q, s, spin](const GeoPoint& p) {
        Vec3 v = rotate(q, to_unit_vector(p));
        double den = 1.0 + v.z;
        if (den < 1e-14) throw SingularPoint("stereographic: antipode of the center");
        cplx w = s * spin * 2.0 * cplx{v.x, v.y} / den;
        return PlanePoint{w.real(), w.imag()};
    };
    m.inverse = [qinv, s, spin](const PlanePoint& pt) {
        cplx w = cplx{pt.x, pt.y} / (s * spin) * 0.5;
        double r2 = std::norm(w);
        double z = (1.0 - r2) / (1.0 + r2);
        cplx xy = w * (1.0 + z);
        return to_geo_point(rotate(qinv, Vec3{xy.real(), xy.imag(), z}));
    };
    m.holo_derivative = [dbase, s, spin](const PlanePoint& zeta) {
        return s * spin * dbase(cplx{zeta.x, zeta.y});
    };
    m.singular_desc = "antipode of the projection center";
    const GeoPoint anti = to_geo_point(c * -1.0);
    m.is_singular = [anti](const GeoPoint& p) {
        return geodesic_distance(p, anti) < 1e-8;
    };
    return m;
}

ProjectionMap make_conformal_conic(double n, double lam0, double ref_lat, double s) {
    if (!(n > 0.0 && n <= 1.0))
        throw BadParam("conformal_conic: cone constant must lie in (0, 1]");
    if (std::isnan(ref_lat)) {
        // tangent parallel of the cone: tanh(u0) = n, i.e. sin(lat0) = n
        ref_lat = std::asin(n);
    }
    if (std::abs(ref_lat) >= kLatCap)
        throw BadParam("conformal_conic: reference parallel beyond the 85 deg cap");
    const double u_ref = isometric_lat(ref_lat);
    const double big_f = std::exp(n * u_ref) * std::cos(ref_lat) / n;  // true scale there
    const double off = std::exp(-n * u_ref);

    ProjectionMap m;
    m.name = "conformal_conic";
    m.params = {{"cone_n", n}, {"central_meridian", lam0}, {"ref_lat", ref_lat}, {"scale", s}};
    auto image = [n, lam0, big_f, off, s](const GeoPoint& p) {
        cplx zeta{wrap_angle(p.lon - lam0), isometric_lat(p.lat)};
        return -kI * s * big_f * (std::exp(kI * n * zeta) - off);
    };
    m.forward = [image](const GeoPoint& p) {
        cplx w = image(p);
        return PlanePoint{w.real(), w.imag()};
    };
    m.inverse = [n, lam0, big_f, off, s](const PlanePoint& pt) {
        cplx v = kI * cplx{pt.x, pt.y} / (s * big_f) + off;
        double dl = std::arg(v) / n;
        double u = -std::log(std::abs(v)) / n;
        return GeoPoint{wrap_angle(lam0 + dl), std::atan(std::sinh(u))};
    };
    m.holo_derivative = [n, lam0, big_f, s](const PlanePoint& zeta) {
        cplx z{wrap_angle(zeta.x - lam0), zeta.y};
        return s * n * big_f * std::exp(kI * n * z);
    };
    m.singular_desc = "poles (cone apex / infinite south)";
    m.is_singular = [](const GeoPoint& p) { return std::abs(p.lat) >= kLatCap; };
    return m;
}

ProjectionMap make_lagrange_circle(double n, double lam0, double s) {
    if (!(n > 0.0)) throw BadParam("lagrange_circle: exponent must be > 0");

    ProjectionMap m;
    m.name = "lagrange_circle";
    m.params = {{"exponent", n}, {"central_meridian", lam0}, {"scale", s}};
    // w = (2/n) tan(n zeta / 2): meridians and parallels map to the coaxal
    // circle families through the two pole images +-(2/n)i
    m.forward = [n, lam0, s](const GeoPoint& p) {
        cplx zeta{wrap_angle(p.lon - lam0), isometric_lat(p.lat)};
        cplx w = s * (2.0 / n) * std::tan(0.5 * n * zeta);
        return PlanePoint{w.real(), w.imag()};
    };
    m.inverse = [n, lam0, s](const PlanePoint& pt) {
        cplx zeta = 2.0 / n * std::atan(cplx{pt.x, pt.y} * n / (2.0 * s));
        return GeoPoint{wrap_angle(lam0 + zeta.real()),
                        std::atan(std::sinh(zeta.imag()))};
    };
    m.holo_derivative = [n, lam0, s](const PlanePoint& zeta) {
        cplx z{wrap_angle(zeta.x - lam0), zeta.y};
        cplx c = std::cos(0.5 * n * z);
        return s / (c * c);
    };
    m.singular_desc = "equator points at longitude central_meridian +- pi/n "
                      "(for n >= 1) and the antimeridian cut";
    m.is_singular = [n, lam0](const GeoPoint& p) {
        if (std::abs(p.lat) >= kLatCap) return true;
        double dl = wrap_angle(p.lon - lam0);
        double u = std::asinh(std::tan(p.lat));
        cplx c = std::cos(0.5 * n * cplx{dl, u});
        return std::abs(c) < 1e-9;
    };
    return m;
}

ProjectionMap make_delisle_conic(double lat1, double lat2, double lam0, double s) {
    if (lat1 > lat2) std::swap(lat1, lat2);
    if (std::abs(lat1 - lat2) < 1e-12)
        throw BadParam("delisle_conic: standard parallels must differ");
    if (std::max(std::abs(lat1), std::abs(lat2)) > kLatCap)
        throw BadParam("delisle_conic: standard parallel beyond the 85 deg cap");
    const double n = (std::cos(lat1) - std::cos(lat2)) / (lat2 - lat1);
    if (!(n > 0.0 && n < 1.0))
        throw BadParam("delisle_conic: parallels give no northern cone (n not in (0,1))");
    const double r0 = lat1 + std::cos(lat1) / n;       // apex at latitude-like r0
    const double r_mid = r0 - 0.5 * (lat1 + lat2);     // reference radius -> origin

    ProjectionMap m;
    m.name = "delisle_conic";
    m.params = {{"std_parallel_1", lat1}, {"std_parallel_2", lat2},
                {"central_meridian", lam0}, {"cone_n", n}, {"scale", s}};
    m.forward = [n, lam0, r0, r_mid, s](const GeoPoint& p) {
        double r = r0 - p.lat;
        double th = n * wrap_angle(p.lon - lam0);
        return PlanePoint{s * r * std::sin(th), s * (r_mid - r * std::cos(th))};
    };
    m.inverse = [n, lam0, r0, r_mid, s](const PlanePoint& pt) {
        double x = pt.x / s, y = r_mid - pt.y / s;
        double r = std::hypot(x, y);
        return GeoPoint{wrap_angle(lam0 + std::atan2(x, y) / n), r0 - r};
    };
    m.singular_desc = "latitudes at or beyond the cone apex";
    m.is_singular = [r0](const GeoPoint& p) { return r0 - p.lat < 1e-9; };
    return m;
}

}  // namespace

ProjectionKind projection_kind_from_name(const std::string& name) {
    if (name == "mercator") return ProjectionKind::mercator;
    if (name == "equal_area_cylindrical" || name == "equal-area")
        return ProjectionKind::equal_area_cylindrical;
    if (name == "stereographic") return ProjectionKind::stereographic;
    if (name == "conformal_conic" || name == "conic")
        return ProjectionKind::conformal_conic;
    if (name == "lagrange_circle" || name == "lagrange")
        return ProjectionKind::lagrange_circle;
    if (name == "delisle_conic" || name == "delisle")
        return ProjectionKind::delisle_conic;
    throw BadParam("unknown projection kind: " + name);
}

ProjectionMap make_projection(ProjectionKind kind, const ProjectionParams& p) {
    if (!(p.scale > 0.0)) throw BadParam("projection scale must be > 0");
    switch (kind) {
        case ProjectionKind::mercator:
            return make_mercator(p.scale);
        case ProjectionKind::equal_area_cylindrical:
            return make_equal_area_cylindrical(p.scale);
        case ProjectionKind::stereographic:
            return make_stereographic(p.center, p.scale);
        case ProjectionKind::conformal_conic:
            return make_conformal_conic(p.cone_n, p.central_meridian, p.ref_lat, p.scale);
        case ProjectionKind::lagrange_circle:
            return make_lagrange_circle(p.exponent, p.central_meridian, p.scale);
        case ProjectionKind::delisle_conic:
            return make_delisle_conic(p.std_parallel_1, p.std_parallel_2,
                                      p.central_meridian, p.scale);
    }
    throw BadParam("unknown projection kind");
}

PlanePoint project(const ProjectionMap& map, const GeoPoint& p) {
    if (map.is_singular && map.is_singular(p))
        throw SingularPoint(map.name + ": point lies on the singular set (" +
                            map.singular_desc + ")");
    PlanePoint q = map.forward(p);
    if (!std::isfinite(q.x) || !std::isfinite(q.y))
        throw SingularPoint(map.name + ": image is not finite");
    return q;
}

ProjectionMap scaled(const ProjectionMap& map, double s) {
    if (!(s > 0.0)) throw BadParam("scale must be > 0");
    ProjectionMap out = map;
    out.params.emplace_back("extra_scale", s);
    auto fwd = map.forward;
    out.forward = [fwd, s](const GeoPoint& p) {
        PlanePoint q = fwd(p);
        return PlanePoint{s * q.x, s * q.y};
    };
    if (map.inverse) {
        auto inv = map.inverse;
        out.inverse = [inv, s](const PlanePoint& q) {
            return inv({q.x / s, q.y / s});
        };
    }
    if (map.holo_derivative) {
        auto hd = map.holo_derivative;
        out.holo_derivative = [hd, s](const PlanePoint& q) { return s * hd(q); };
    }
    return out;
}

bool great_circle_image_check(const ProjectionMap& map, const Vec3& axis,
                              int n_samples, double tol) {
    if (n_samples < 8) throw InsufficientSamples("need at least 8 samples");

    const Vec3 a = normalized(axis);
    Vec3 ref = std::abs(a.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 e1 = normalized(cross(a, ref));
    const Vec3 e2 = cross(a, e1);

    std::vector<PlanePoint> pts;
    pts.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        double th = 2.0 * kPi * k / n_samples;
        GeoPoint p = to_geo_point(e1 * std::cos(th) + e2 * std::sin(th));
        if (std::abs(p.lat) >= kLatCap) continue;
        if (map.is_singular && map.is_singular(p)) continue;
        PlanePoint q = map.forward(p);
        if (std::isfinite(q.x) && std::isfinite(q.y)) pts.push_back(q);
    }
    if (pts.size() < 8)
        throw InsufficientSamples("fewer than 8 samples off the singular set");

    // line fit (total least squares); a line is the infinite-radius circle
    double mx = 0, my = 0;
    for (const PlanePoint& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (const PlanePoint& p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
        syy += (p.y - my) * (p.y - my);
    }
    double half = 0.5 * (sxx + syy);
    double det = sxx * syy - sxy * sxy;
    double lam_small = half - std::sqrt(std::max(half * half - det, 0.0));
    // normal of the best line = eigenvector of the smaller eigenvalue
    double nx_ = sxy, ny_ = lam_small - sxx;
    double nn = std::hypot(nx_, ny_);
    if (nn < 1e-30) {
        nx_ = 1.0;
        ny_ = 0.0;
        nn = 1.0;
    }
    nx_ /= nn;
    ny_ /= nn;
    double line_res = 0.0;
    for (const PlanePoint& p : pts)
        line_res = std::max(line_res, std::abs((p.x - mx) * nx_ + (p.y - my) * ny_));
    if (line_res < tol) return true;

    // Kasa circle fit: x^2 + y^2 + D x + E y + F = 0
    double m_[3][3] = {};
    double rhs[3] = {};
    for (const PlanePoint& p : pts) {
        double z = p.x * p.x + p.y * p.y;
        double row[3] = {p.x, p.y, 1.0};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m_[r][c] += row[r] * row[c];
            rhs[r] -= row[r] * z;
        }
    }
    // Gaussian elimination with partial pivoting
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m_[piv[r]][col]) > std::abs(m_[piv[best]][col])) best = r;
        std::swap(piv[col], piv[best]);
        double p0 = m_[piv[col]][col];
        if (std::abs(p0) < 1e-30) return false;  // degenerate and no line fit
        for (int r = col + 1; r < 3; ++r) {
            double f = m_[piv[r]][col] / p0;
            for (int c = col; c < 3; ++c) m_[piv[r]][c] -= f * m_[piv[col]][c];
            rhs[piv[r]] -= f * rhs[piv[col]];
        }
    }
    double sol[3];
    for (int r = 2; r >= 0; --r) {
        double s = rhs[piv[r]];
        for (int c = r + 1; c < 3; ++c) s -= m_[piv[r]][c] * sol[c];
        sol[r] = s / m_[piv[r]][r];
    }
    double cx = -0.5 * sol[0], cy = -0.5 * sol[1];
    double r2 = cx * cx + cy * cy - sol[2];
    if (!(r2 > 0.0)) return false;
    double radius = std::sqrt(r2);
    double circ_res = 0.0;
    for (const PlanePoint& p : pts)
        circ_res = std::max(circ_res, std::abs(std::hypot(p.x - cx, p.y - cy) - radius));
    return circ_res < tol;
}

}  // namespace chebmap

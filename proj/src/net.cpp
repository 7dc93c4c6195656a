#include "chebmap/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace chebmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec3 geodesic_step(SurfaceKind surface, double radius, const Vec3& p,
                   const Vec3& tangent, double arclen) {
    if (surface == SurfaceKind::plane) return p + tangent * arclen;
    double ang = arclen / radius;
    return normalized(p * std::cos(ang) + tangent * std::sin(ang));
}

double cross2(const Vec3& a, const Vec3& b) { return a.x * b.y - a.y * b.x; }

// angle at p between the chords toward q1 and q2
double corner_angle(SurfaceKind surface, const Vec3& p, const Vec3& q1,
                    const Vec3& q2) {
    Vec3 t1, t2;
    if (surface == SurfaceKind::plane) {
        t1 = q1 - p;
        t2 = q2 - p;
    } else {
        t1 = q1 - p * dot(p, q1);
        t2 = q2 - p * dot(p, q2);
    }
    return std::atan2(norm(cross(t1, t2)), dot(t1, t2));
}

}  // namespace

double ChebNet::radius() const {
    return surface == SurfaceKind::sphere ? 1.0 / std::sqrt(curvature) : 0.0;
}

double ChebNet::vertex_distance(int i0, int j0, int i1, int j1) const {
    const Vec3& p = pos[vidx(i0, j0)];
    const Vec3& q = pos[vidx(i1, j1)];
    if (surface == SurfaceKind::plane) return norm(q - p);
    return radius() * angle_between(p, q);
}

bool NetAngles::has(int i, int j) const {
    return i >= -extent && i <= extent && j >= -extent && j <= extent &&
           std::isfinite(at(i, j));
}

ChebNet darboux_net(SurfaceKind surface, double phi0, double a_len, double c_len,
                    int N, double curvature) {
    if (!(phi0 > 0.0 && phi0 < kPi))
        throw BadSeedAngle("seed angle must lie in (0, pi)");
    if (!(a_len > 0.0 && c_len > 0.0)) throw BadParam("edge lengths must be > 0");
    if (N < 1) throw BadParam("net extent must be >= 1");
    if (surface == SurfaceKind::sphere && !(curvature > 0.0))
        throw BadParam("sphere curvature must be > 0");

    const double radius = surface == SurfaceKind::sphere ? 1.0 / std::sqrt(curvature) : 0.0;
    if (surface == SurfaceKind::sphere) {
        const double inj = kPi * radius;
        if (std::max(a_len, c_len) > 0.2 * inj)
            throw StepTooLarge("edge length exceeds 0.2 x injectivity scale");
        if (N * std::max(a_len, c_len) > 0.95 * inj)
            throw StepTooLarge("net extent leaves the spherical chart");
    }

    ChebNet net;
    net.surface = surface;
    net.curvature = surface == SurfaceKind::sphere ? curvature : 0.0;
    net.a_len = a_len;
    net.c_len = c_len;
    net.phi0 = phi0;
    net.extent = N;
    net.pos.assign(static_cast<size_t>(net.side()) * net.side(), Vec3{kNaN, kNaN, kNaN});
    net.status.assign(net.pos.size(), VertexStatus::torn);

    const Vec3 base = surface == SurfaceKind::sphere ? Vec3{0, 0, 1} : Vec3{0, 0, 0};
    const Vec3 t1{1, 0, 0};
    const Vec3 t2{std::cos(phi0), std::sin(phi0), 0};

    auto put = [&](int i, int j, const Vec3& p, VertexStatus st) {
        net.pos[net.vidx(i, j)] = p;
        net.status[net.vidx(i, j)] = st;
    };

    for (int i = -N; i <= N; ++i)
        put(i, 0, geodesic_step(surface, radius, base, t1, i * a_len), VertexStatus::ok);
    for (int j = -N; j <= N; ++j)
        put(0, j, geodesic_step(surface, radius, base, t2, j * c_len), VertexStatus::ok);

    const double chart_limit = 0.98 * kPi;  // angular distance from the base
    const double a_ang = a_len / (radius > 0 ? radius : 1.0);
    const double c_ang = c_len / (radius > 0 ? radius : 1.0);

    for (int sx : {1, -1})
        for (int sy : {1, -1})
            for (int jl = 1; jl <= N; ++jl)
                for (int il = 1; il <= N; ++il) {
                    const int i = sx * il, j = sy * jl;
                    if (!net.is_ok(i - sx, j) || !net.is_ok(i, j - sy) ||
                        !net.is_ok(i - sx, j - sy))
                        continue;  // stays torn past a break
                    const Vec3& A = net.pos[net.vidx(i - sx, j)];
                    const Vec3& B = net.pos[net.vidx(i, j - sy)];
                    const Vec3& C = net.pos[net.vidx(i - sx, j - sy)];

                    if (surface == SurfaceKind::plane) {
                        // the parallelogram point solves both circles exactly
                        Vec3 D = A + B - C;
                        const Vec3 v = B - A;
                        const double sC = cross2(v, C - A);
                        const double sD = cross2(v, D - A);
                        if (sD * sC > 0.0) {
                            // folded cell: take the mirror root across AB
                            const double vv = dot(v, v);
                            if (vv > 0.0) {
                                const Vec3 w = D - A;
                                D = A + v * (2.0 * dot(w, v) / vv) - w;
                            }
                        }
                        put(i, j, D, VertexStatus::ok);
                        continue;
                    }

                    Vec3 roots[2];
                    const int cnt = detail::circle_intersect_raw(A, a_ang, B, c_ang, roots);
                    if (cnt == 0) {
                        net.status[net.vidx(i, j)] = VertexStatus::torn;
                        continue;
                    }
                    Vec3 chosen = roots[0];
                    if (cnt == 2 &&
                        angle_between(roots[1], C) > angle_between(roots[0], C))
                        chosen = roots[1];
                    const VertexStatus st = angle_between(chosen, base) > chart_limit
                                                ? VertexStatus::out_of_range
                                                : VertexStatus::ok;
                    put(i, j, chosen, st);
                }
    return net;
}

ChebNet build_net(SurfaceKind surface, double phi0, double h, int N,
                  double curvature) {
    return darboux_net(surface, phi0, h, h, N, curvature);
}

NetAngles net_angles(const ChebNet& net) {
    NetAngles out;
    out.extent = net.extent;
    out.phi.assign(net.pos.size(), kNaN);
    const int N = net.extent;
    for (int j = -N; j <= N; ++j)
        for (int i = -N; i <= N; ++i) {
            if (!net.is_ok(i, j) || !net.is_ok(i + 1, j) || !net.is_ok(i, j + 1))
                continue;
            out.phi[net.vidx(i, j)] =
                corner_angle(net.surface, net.pos[net.vidx(i, j)],
                             net.pos[net.vidx(i + 1, j)], net.pos[net.vidx(i, j + 1)]);
        }
    return out;
}

double net_angle_at(const ChebNet& net, int i, int j) {
    if (!net.is_ok(i, j) || !net.is_ok(i + 1, j) || !net.is_ok(i, j + 1))
        throw MissingNeighbor("net angle needs ok vertices at (i,j), (i+1,j), (i,j+1)");
    return corner_angle(net.surface, net.pos[net.vidx(i, j)],
                        net.pos[net.vidx(i + 1, j)], net.pos[net.vidx(i, j + 1)]);
}

SineGordonResult sine_gordon_residual(const ChebNet& net) {
    const NetAngles ang = net_angles(net);
    const int N = net.extent;
    SineGordonResult res{0.0, 0, 0, 0};
    for (int j = -N; j < N; ++j)
        for (int i = -N; i < N; ++i) {
            if (!ang.has(i, j) || !ang.has(i + 1, j) || !ang.has(i, j + 1) ||
                !ang.has(i + 1, j + 1))
                continue;
            const double d_uv = (ang.at(i + 1, j + 1) - ang.at(i + 1, j) -
                                 ang.at(i, j + 1) + ang.at(i, j)) /
                                (net.a_len * net.c_len);
            const double mean = 0.25 * (ang.at(i, j) + ang.at(i + 1, j) +
                                        ang.at(i, j + 1) + ang.at(i + 1, j + 1));
            const double r = d_uv + net.curvature * std::sin(mean);
            ++res.cells;
            if (std::abs(r) > res.max_residual) {
                res.max_residual = std::abs(r);
                res.i = i;
                res.j = j;
            }
        }
    if (res.cells == 0)
        throw NetTooSmall("sine_gordon_residual needs a 3x3 window of ok vertices");
    return res;
}

double edge_length_check(const ChebNet& net) {
    const int N = net.extent;
    double worst = 0.0;
    for (int j = -N; j <= N; ++j)
        for (int i = -N; i <= N; ++i) {
            if (!net.is_ok(i, j)) continue;
            if (net.is_ok(i + 1, j))
                worst = std::max(worst,
                                 std::abs(net.vertex_distance(i, j, i + 1, j) - net.a_len));
            if (net.is_ok(i, j + 1))
                worst = std::max(worst,
                                 std::abs(net.vertex_distance(i, j, i, j + 1) - net.c_len));
        }
    return worst;
}

void write_net_csv(const ChebNet& net, std::ostream& os) {
    const bool sphere = net.surface == SurfaceKind::sphere;
    const double r = sphere ? net.radius() : 1.0;
    const NetAngles ang = net_angles(net);
    os << (sphere ? "i,j,x,y,z,phi,status\n" : "i,j,x,y,phi,status\n");
    char buf[256];
    const int N = net.extent;
    for (int j = -N; j <= N; ++j)
        for (int i = -N; i <= N; ++i) {
            const Vec3& p = net.pos[net.vidx(i, j)];
            const double phi = ang.phi[net.vidx(i, j)];
            const char* st =
                net.status[net.vidx(i, j)] == VertexStatus::ok
                    ? "ok"
                    : net.status[net.vidx(i, j)] == VertexStatus::torn ? "torn"
                                                                       : "out_of_range";
            if (sphere)
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%s\n", i,
                              j, r * p.x, r * p.y, r * p.z, phi, st);
            else
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%s\n", i, j,
                              p.x, p.y, phi, st);
            os << buf;
        }
}

}  // namespace chebmap

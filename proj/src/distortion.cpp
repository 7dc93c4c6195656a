#include "chebmap/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "chebmap/parallel.hpp"

namespace chebmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Jacobian {
    // columns: image of the unit east and unit north tangent vectors
    double ex, ey, nx, ny;
};

Jacobian sphere_jacobian(const ProjectionMap& map, const GeoPoint& p, double h) {
    auto fwd = [&](double lon, double lat) {
        GeoPoint q{lon, lat};
        if (map.is_singular && map.is_singular(q))
            throw SingularPoint(map.name + ": singular point in difference stencil");
        return map.forward(q);
    };
    const double cl = std::cos(p.lat);
    PlanePoint pe = fwd(p.lon + h, p.lat);
    PlanePoint pw = fwd(p.lon - h, p.lat);
    PlanePoint pn = fwd(p.lon, p.lat + h);
    PlanePoint ps = fwd(p.lon, p.lat - h);
    return {(pe.x - pw.x) / (2 * h * cl), (pe.y - pw.y) / (2 * h * cl),
            (pn.x - ps.x) / (2 * h), (pn.y - ps.y) / (2 * h)};
}

// singular values of [[ex nx],[ey ny]]
void singular_values(const Jacobian& J, double& a, double& b) {
    const double e = 0.5 * (J.ex + J.ny), f = 0.5 * (J.ex - J.ny);
    const double g = 0.5 * (J.ey + J.nx), h = 0.5 * (J.ey - J.nx);
    const double q = std::hypot(e, h), r = std::hypot(f, g);
    a = q + r;
    b = std::abs(q - r);
}

double jac_diff(const Jacobian& p, const Jacobian& q) {
    return std::max({std::abs(p.ex - q.ex), std::abs(p.ey - q.ey),
                     std::abs(p.nx - q.nx), std::abs(p.ny - q.ny)});
}

}  // namespace

DistortionSample local_scales(const ProjectionMap& map, const GeoPoint& p,
                              double h) {
    if (!(h > 1e-8 && h < 1e-3))
        throw StepUnderflow("finite-difference step must lie in (1e-8, 1e-3)");
    if (map.is_singular && map.is_singular(p))
        throw SingularPoint(map.name + ": singular point");

    Jacobian J = sphere_jacobian(map, p, h);
    const Jacobian J2 = sphere_jacobian(map, p, 2.0 * h);
    const double scale = std::max(
        {std::abs(J.ex), std::abs(J.ey), std::abs(J.nx), std::abs(J.ny), 1e-30});
    if (jac_diff(J, J2) > 1e-4 * scale) {
        // poor conditioning: Richardson-extrapolate the two steps
        J = {(4 * J.ex - J2.ex) / 3, (4 * J.ey - J2.ey) / 3,
             (4 * J.nx - J2.nx) / 3, (4 * J.ny - J2.ny) / 3};
    }

    DistortionSample s;
    s.point = p;
    s.k_parallel = std::hypot(J.ex, J.ey);
    s.k_meridian = std::hypot(J.nx, J.ny);
    singular_values(J, s.tissot_a, s.tissot_b);
    if (!(s.tissot_b > 0.0) || !std::isfinite(s.tissot_a))
        throw SingularPoint(map.name + ": degenerate differential");
    s.angle_distortion =
        2.0 * std::asin(std::clamp((s.tissot_a - s.tissot_b) /
                                       (s.tissot_a + s.tissot_b), 0.0, 1.0));
    s.m = (s.tissot_a - s.tissot_b) <= 1e-6 * s.tissot_a ? s.tissot_a : kNaN;
    return s;
}

double magnification_conformal(const ProjectionMap& map, const GeoPoint& p) {
    if (!map.holo_derivative)
        throw NotConformal(map.name + " carries no analytic derivative");
    PlanePoint z = mercator_forward(p);
    return std::abs(map.holo_derivative(z)) * std::cosh(z.y);
}

namespace {

// Direction (mod pi) of the best-fit line through a point set.
double principal_direction(const std::vector<PlanePoint>& pts) {
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
    return 0.5 * std::atan2(2.0 * sxy, sxx - syy);
}

}  // namespace

std::set<EulerHypothesis> classify_euler(const ProjectionMap& map,
                                         const Region& region, int grid,
                                         double tol) {
    if (grid < 16) throw BadParam("classify_euler needs grid >= 16");
    validate_region(region);

    double lon0 = region.boundary[0].lon, lon1 = lon0;
    double lat0 = region.boundary[0].lat, lat1 = lat0;
    for (const GeoPoint& p : region.boundary) {
        lon0 = std::min(lon0, p.lon);
        lon1 = std::max(lon1, p.lon);
        lat0 = std::min(lat0, p.lat);
        lat1 = std::max(lat1, p.lat);
    }

    // graticule samples restricted to the region interior
    std::vector<std::vector<PlanePoint>> meridians, parallels;
    std::vector<DistortionSample> samples;
    double diam = 0.0;
    PlanePoint lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (int i = 0; i < grid; ++i) {
        std::vector<PlanePoint> mline, pline;
        for (int j = 0; j < grid; ++j) {
            GeoPoint on_meridian{lon0 + (lon1 - lon0) * (i + 0.5) / grid,
                                 lat0 + (lat1 - lat0) * (j + 0.5) / grid};
            if (region_contains(region, on_meridian) &&
                !(map.is_singular && map.is_singular(on_meridian))) {
                mline.push_back(map.forward(on_meridian));
                samples.push_back(local_scales(map, on_meridian));
                lo.x = std::min(lo.x, mline.back().x);
                lo.y = std::min(lo.y, mline.back().y);
                hi.x = std::max(hi.x, mline.back().x);
                hi.y = std::max(hi.y, mline.back().y);
            }
            GeoPoint on_parallel{lon0 + (lon1 - lon0) * (j + 0.5) / grid,
                                 lat0 + (lat1 - lat0) * (i + 0.5) / grid};
            if (region_contains(region, on_parallel) &&
                !(map.is_singular && map.is_singular(on_parallel)))
                pline.push_back(map.forward(on_parallel));
        }
        if (mline.size() >= 4) meridians.push_back(std::move(mline));
        if (pline.size() >= 4) parallels.push_back(std::move(pline));
    }
    diam = std::hypot(hi.x - lo.x, hi.y - lo.y);

    std::set<EulerHypothesis> cls;
    if (samples.empty()) return cls;

    // H1: after one global rotation all meridian images are vertical lines
    // and all parallel images horizontal lines
    if (!meridians.empty() && !parallels.empty() && diam > 0.0) {
        const double theta = principal_direction(meridians.front());
        const double rot = kPi / 2 - theta;  // make that meridian vertical
        const double cr = std::cos(rot), sr = std::sin(rot);
        double worst = 0.0;
        for (const auto& line : meridians) {
            double mean = 0.0;
            std::vector<double> xs;
            xs.reserve(line.size());
            for (const PlanePoint& p : line) {
                xs.push_back(cr * p.x - sr * p.y);
                mean += xs.back();
            }
            mean /= xs.size();
            for (double x : xs) worst = std::max(worst, std::abs(x - mean));
        }
        for (const auto& line : parallels) {
            double mean = 0.0;
            std::vector<double> ys;
            ys.reserve(line.size());
            for (const PlanePoint& p : line) {
                ys.push_back(sr * p.x + cr * p.y);
                mean += ys.back();
            }
            mean /= ys.size();
            for (double y : ys) worst = std::max(worst, std::abs(y - mean));
        }
        if (worst < tol * diam) cls.insert(EulerHypothesis::H1);
    }

    // H2: conformal, H3: constant area scale (best-fit constant)
    double h2_worst = 0.0;
    double area_mean = 0.0;
    for (const DistortionSample& s : samples) {
        h2_worst = std::max(h2_worst, (s.tissot_a - s.tissot_b) / s.tissot_a);
        area_mean += s.tissot_a * s.tissot_b;
    }
    area_mean /= samples.size();
    double h3_worst = 0.0;
    for (const DistortionSample& s : samples)
        h3_worst = std::max(h3_worst,
                            std::abs(s.tissot_a * s.tissot_b - area_mean) / area_mean);
    if (h2_worst < tol) cls.insert(EulerHypothesis::H2);
    if (h3_worst < tol) cls.insert(EulerHypothesis::H3);
    return cls;
}

DistortionReport distortion_report(const ProjectionMap& map, const Region& region,
                                   int resolution) {
    if (resolution < 32) throw BadParam("distortion_report needs resolution >= 32");
    validate_region(region);

    const int nb = std::clamp(4 * resolution, 256, 4096);
    Region dense = resample_boundary(region, nb);
    auto grid = build_grid(region_mercator_outline(dense), resolution);
    const GridDomain& g = *grid;

    DistortionReport rep;
    rep.region_name = region.name;
    rep.resolution = resolution;
    rep.log_m = make_scalar_field(grid);

    // evaluate cells in parallel, reduce in fixed index order
    std::vector<double> amax(g.mask.size(), kNaN), bmin(g.mask.size(), kNaN);
    const int threads = thread_budget();
    parallel_chunks(0, g.ny, threads, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int k = g.idx(i, j);
                PlanePoint at;
                if (g.mask[k] == CellKind::interior)
                    at = g.center(i, j);
                else if (g.mask[k] == CellKind::boundary)
                    at = g.nearest_pt[k];
                else
                    continue;
                DistortionSample s = local_scales(map, mercator_inverse(at));
                amax[k] = s.tissot_a;
                bmin[k] = s.tissot_b;
                rep.log_m.values[k] = 0.5 * std::log(s.tissot_a * s.tissot_b);
            }
    });

    rep.m_max = -std::numeric_limits<double>::infinity();
    rep.m_min = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < g.mask.size(); ++k) {
        if (std::isnan(amax[k])) continue;
        rep.m_max = std::max(rep.m_max, amax[k]);
        rep.m_min = std::min(rep.m_min, bmin[k]);
    }
    if (!(rep.m_min > 0.0) || !std::isfinite(rep.m_max))
        throw SingularPoint("distortion_report: degenerate scales in region");
    rep.ratio = rep.m_max / rep.m_min;
    rep.classification = classify_euler(map, region, std::max(16, resolution / 4));
    return rep;
}

std::string classification_to_string(const std::set<EulerHypothesis>& cls) {
    std::string out = "{";
    for (EulerHypothesis h : cls) {
        if (out.size() > 1) out += ", ";
        out += h == EulerHypothesis::H1 ? "H1" : h == EulerHypothesis::H2 ? "H2" : "H3";
    }
    return out + "}";
}

}  // namespace chebmap

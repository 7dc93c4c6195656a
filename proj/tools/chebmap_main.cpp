// chebmap: classical and Chebyshev-optimal map projections, distortion
// reports, and discrete Chebyshev nets from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "chebmap/distortion.hpp"
#include "chebmap/map_file.hpp"
#include "chebmap/net.hpp"
#include "chebmap/optimize.hpp"
#include "chebmap/svg.hpp"

using namespace chebmap;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitSingular = 3;
constexpr int kExitNoConvergence = 4;

// --- region file I/O -----------------------------------------------------

Region load_region(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open region file " + path);
    Region r;
    r.name = path;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double lon, lat;
        if (!(ss >> lon)) continue;  // blank or comment-only line
        if (!(ss >> lat))
            throw BadParam(path + ":" + std::to_string(lineno) +
                           ": expected 'lon lat' in degrees");
        r.boundary.push_back({deg2rad(lon), deg2rad(lat)});
    }
    if (r.boundary.size() < 3)
        throw BadRegion(path + ": fewer than 3 boundary points");
    // accept clockwise input; orientation is normalized here
    std::vector<PlanePoint> outline = region_mercator_outline(r);
    double area = 0.0;
    for (size_t i = 0, n = outline.size(); i < n; ++i) {
        const PlanePoint& p = outline[i];
        const PlanePoint& q = outline[(i + 1) % n];
        area += p.x * q.y - q.x * p.y;
    }
    if (area < 0.0) {
        std::cerr << "warning: " << path << " is clockwise, reversing\n";
        std::reverse(r.boundary.begin(), r.boundary.end());
    }
    validate_region(r);
    return r;
}

void save_region(const Region& r, std::ostream& os) {
    char buf[80];
    for (const GeoPoint& p : r.boundary) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", rad2deg(p.lon), rad2deg(p.lat));
        os << buf;
    }
}

// --- shared rendering ----------------------------------------------------

struct GeoBounds {
    double lon0, lon1, lat0, lat1;
};

GeoBounds region_bounds(const Region& r) {
    GeoBounds b{r.boundary[0].lon, r.boundary[0].lon, r.boundary[0].lat,
                r.boundary[0].lat};
    for (const GeoPoint& p : r.boundary) {
        b.lon0 = std::min(b.lon0, p.lon);
        b.lon1 = std::max(b.lon1, p.lon);
        b.lat0 = std::min(b.lat0, p.lat);
        b.lat1 = std::max(b.lat1, p.lat);
    }
    return b;
}

std::vector<std::vector<PlanePoint>> trace_line(
    const ProjectionMap& map, const std::vector<GeoPoint>& samples) {
    std::vector<std::vector<PlanePoint>> subpaths(1);
    for (const GeoPoint& p : samples) {
        bool good = std::abs(p.lat) < kLatCap && !(map.is_singular && map.is_singular(p));
        PlanePoint q{};
        if (good) {
            try {
                q = map.forward(p);
                good = std::isfinite(q.x) && std::isfinite(q.y);
            } catch (const Error&) {
                good = false;
            }
        }
        if (good)
            subpaths.back().push_back(q);
        else if (!subpaths.back().empty())
            subpaths.emplace_back();
    }
    return subpaths;
}

void add_graticule(SvgWriter& svg, const ProjectionMap& map, const Region& region,
                   double step_deg) {
    const GeoBounds b = region_bounds(region);
    const double pad = deg2rad(step_deg);
    const double lon0 = b.lon0 - pad, lon1 = b.lon1 + pad;
    const double lat0 = std::max(b.lat0 - pad, -kLatCap + 1e-6);
    const double lat1 = std::min(b.lat1 + pad, kLatCap - 1e-6);
    const double fine = deg2rad(step_deg) / 16.0;

    const double mstart = std::ceil(rad2deg(lon0) / step_deg) * step_deg;
    for (double md = mstart; md <= rad2deg(lon1) + 1e-9; md += step_deg) {
        std::vector<GeoPoint> pts;
        for (double lat = lat0; lat <= lat1 + 1e-12; lat += fine)
            pts.push_back({deg2rad(md), lat});
        char id[48];
        std::snprintf(id, sizeof id, "grat-m-%g", md);
        svg.add_path(trace_line(map, pts), "#8899aa", 0.6, false, id);
    }
    const double pstart = std::ceil(rad2deg(lat0) / step_deg) * step_deg;
    for (double pd = pstart; pd <= rad2deg(lat1) + 1e-9; pd += step_deg) {
        std::vector<GeoPoint> pts;
        for (double lon = lon0; lon <= lon1 + 1e-12; lon += fine)
            pts.push_back({lon, deg2rad(pd)});
        char id[48];
        std::snprintf(id, sizeof id, "grat-p-%g", pd);
        svg.add_path(trace_line(map, pts), "#8899aa", 0.6, false, id);
    }
}

void render_map_svg(const std::string& path, const ProjectionMap& map,
                    const Region& region, double graticule_deg,
                    const DistortionReport* report) {
    SvgWriter svg;
    add_graticule(svg, map, region, graticule_deg);
    Region dense = resample_boundary(region, 512);
    std::vector<PlanePoint> outline;
    for (const GeoPoint& p : dense.boundary) outline.push_back(project(map, p));
    svg.add_polyline(outline, "#203050", 1.6, true, "boundary");
    if (report)
        svg.add_legend(report->m_min, report->m_max, "length scale");
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    svg.write(os);
}

// --- subcommand: project ---------------------------------------------------

struct ProjectArgs {
    std::string region_file, proj = "mercator", out_svg, out_csv;
    std::vector<double> center;
    double cone_n = 0.6, exponent = 1.0, central_meridian = 1e9;
    std::vector<double> std_parallels;
    double scale = 1.0, graticule = 10.0;
    int grid = 32;
};

ProjectionMap build_projection(const std::string& name, const ProjectArgs& a,
                               const Region& region) {
    ProjectionParams pp;
    const GeoPoint centroid = region_centroid(region);
    pp.center = a.center.size() == 2
                    ? GeoPoint{deg2rad(a.center[0]), deg2rad(a.center[1])}
                    : centroid;
    pp.cone_n = a.cone_n;
    pp.exponent = a.exponent;
    pp.central_meridian =
        a.central_meridian < 1e8 ? deg2rad(a.central_meridian) : centroid.lon;
    if (a.std_parallels.size() == 2) {
        pp.std_parallel_1 = deg2rad(a.std_parallels[0]);
        pp.std_parallel_2 = deg2rad(a.std_parallels[1]);
    }
    pp.scale = a.scale;
    return make_projection(projection_kind_from_name(name), pp);
}

int cmd_project(const ProjectArgs& a) {
    Region region = load_region(a.region_file);
    ProjectionMap map = build_projection(a.proj, a, region);

    DistortionReport report = distortion_report(map, region, std::max(a.grid, 32));
    std::printf("projection=%s ratio=%.12g m_min=%.12g m_max=%.12g class=%s\n",
                map.name.c_str(), report.ratio, report.m_min, report.m_max,
                classification_to_string(report.classification).c_str());

    if (!a.out_svg.empty())
        render_map_svg(a.out_svg, map, region, a.graticule, &report);

    if (!a.out_csv.empty()) {
        std::ofstream os(a.out_csv);
        if (!os) throw IoError("cannot open " + a.out_csv);
        os << "lon_deg,lat_deg,k_meridian,k_parallel,tissot_a,tissot_b,"
              "angle_distortion,m\n";
        const GeoBounds b = region_bounds(region);
        char buf[256];
        for (int j = 0; j < a.grid; ++j)
            for (int i = 0; i < a.grid; ++i) {
                GeoPoint p{b.lon0 + (b.lon1 - b.lon0) * (i + 0.5) / a.grid,
                           b.lat0 + (b.lat1 - b.lat0) * (j + 0.5) / a.grid};
                if (!region_contains(region, p)) continue;
                if (map.is_singular && map.is_singular(p)) continue;
                DistortionSample s = local_scales(map, p);
                std::snprintf(buf, sizeof buf,
                              "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                              rad2deg(p.lon), rad2deg(p.lat), s.k_meridian,
                              s.k_parallel, s.tissot_a, s.tissot_b,
                              s.angle_distortion, s.m);
                os << buf;
            }
    }
    return 0;
}

// --- subcommand: optimize --------------------------------------------------

int cmd_optimize(const std::string& region_file, int grid, const std::string& out,
                 const std::string& out_svg) {
    if (grid < 64) throw BadParam("optimize needs --grid >= 64");
    Region region = load_region(region_file);
    OptimizedProjection opt = optimize_projection(region, grid);
    if (!out.empty()) write_map_file(out, opt);
    std::printf("ratio=%.12g boundary_dev=%.12g\n", opt.ratio, opt.boundary_constancy);
    if (!out_svg.empty()) {
        ProjectionMap pm = opt.as_projection_map();
        SvgWriter svg;
        add_graticule(svg, pm, region, 5.0);
        Region dense = resample_boundary(region, 512);
        std::vector<std::vector<PlanePoint>> outline =
            trace_line(pm, dense.boundary);
        svg.add_path(outline, "#203050", 1.6, false, "boundary");
        double mmin = 1e300, mmax = -1e300;
        for (double v : opt.m_field.values)
            if (std::isfinite(v)) {
                mmin = std::min(mmin, v);
                mmax = std::max(mmax, v);
            }
        svg.add_legend(mmin, mmax, "magnification");
        std::ofstream os(out_svg);
        if (!os) throw IoError("cannot open " + out_svg);
        svg.write(os);
    }
    return 0;
}

// --- subcommand: net ---------------------------------------------------

int cmd_net(const std::string& surface, double phi0_deg, double step, double extent,
            const std::vector<double>& rect, double curvature,
            const std::string& out_csv, const std::string& out_svg) {
    if (surface != "plane" && surface != "sphere")
        throw BadParam("--surface must be plane or sphere");
    if (!(step > 0.0)) throw BadParam("--step must be > 0");
    if (!(extent > 0.0)) throw BadParam("--extent must be > 0");
    const SurfaceKind kind =
        surface == "sphere" ? SurfaceKind::sphere : SurfaceKind::plane;
    const double phi0 = deg2rad(phi0_deg);
    double a_len = step, c_len = step;
    if (!rect.empty()) {
        if (rect.size() != 2) throw BadParam("--rect expects a,c");
        a_len = rect[0];
        c_len = rect[1];
    }
    const int N = std::max(1, static_cast<int>(std::floor(
                                  extent / std::max(a_len, c_len) + 1e-9)));

    ChebNet net = darboux_net(kind, phi0, a_len, c_len, N, curvature);
    if (!out_csv.empty()) {
        std::ofstream os(out_csv);
        if (!os) throw IoError("cannot open " + out_csv);
        write_net_csv(net, os);
    }
    SineGordonResult sg{};
    bool have_sg = true;
    try {
        sg = sine_gordon_residual(net);
    } catch (const NetTooSmall&) {
        have_sg = false;
    }
    int n_ok = 0, n_torn = 0;
    for (VertexStatus s : net.status) {
        n_ok += s == VertexStatus::ok;
        n_torn += s == VertexStatus::torn;
    }
    std::printf("vertices_ok=%d torn=%d max_edge_dev=%.12g", n_ok, n_torn,
                edge_length_check(net));
    if (have_sg)
        std::printf(" sine_gordon_residual=%.12g", sg.max_residual);
    std::printf("\n");

    if (!out_svg.empty()) {
        SvgWriter svg;
        // orthographic view from the base-point side for the sphere
        auto view = [&](const Vec3& p) {
            return kind == SurfaceKind::sphere ? PlanePoint{p.x, p.y}
                                               : PlanePoint{p.x, p.y};
        };
        const int M = net.extent;
        std::vector<std::vector<PlanePoint>> rows, cols;
        for (int j = -M; j <= M; ++j) {
            std::vector<std::vector<PlanePoint>> line(1);
            for (int i = -M; i <= M; ++i) {
                bool good = net.is_ok(i, j) &&
                            (kind == SurfaceKind::plane || net.pos[net.vidx(i, j)].z > -1e-9);
                if (good)
                    line.back().push_back(view(net.pos[net.vidx(i, j)]));
                else if (!line.back().empty())
                    line.emplace_back();
            }
            for (auto& sp : line)
                if (sp.size() >= 2) rows.push_back(std::move(sp));
        }
        for (int i = -M; i <= M; ++i) {
            std::vector<std::vector<PlanePoint>> line(1);
            for (int j = -M; j <= M; ++j) {
                bool good = net.is_ok(i, j) &&
                            (kind == SurfaceKind::plane || net.pos[net.vidx(i, j)].z > -1e-9);
                if (good)
                    line.back().push_back(view(net.pos[net.vidx(i, j)]));
                else if (!line.back().empty())
                    line.emplace_back();
            }
            for (auto& sp : line)
                if (sp.size() >= 2) cols.push_back(std::move(sp));
        }
        svg.add_path(rows, "#aa3030", 0.8, false, "warp");
        svg.add_path(cols, "#3030aa", 0.8, false, "weft");
        std::ofstream os(out_svg);
        if (!os) throw IoError("cannot open " + out_svg);
        svg.write(os);
    }
    return 0;
}

// --- subcommand: compare ---------------------------------------------------

struct CompareRow {
    std::string label;
    double ratio;
};

int cmd_compare(const std::string& region_file, std::vector<std::string> tokens,
                int grid, const std::string& out_csv) {
    Region region = load_region(region_file);

    std::vector<std::string> unique;
    for (const std::string& t : tokens) {
        if (std::find(unique.begin(), unique.end(), t) != unique.end()) {
            std::cerr << "warning: duplicate projection '" << t << "' ignored\n";
            continue;
        }
        unique.push_back(t);
    }
    const bool has_optimized =
        std::find(unique.begin(), unique.end(), "optimized") != unique.end();
    if (unique.size() < 2 && !has_optimized)
        throw BadParam("compare needs at least two projections or 'optimized'");

    const GeoPoint centroid = region_centroid(region);
    std::vector<CompareRow> rows;
    for (const std::string& tok : unique) {
        std::string name = tok, arg1, arg2;
        if (size_t c = tok.find(':'); c != std::string::npos) {
            name = tok.substr(0, c);
            arg1 = tok.substr(c + 1);
            if (size_t c2 = arg1.find(':'); c2 != std::string::npos) {
                arg2 = arg1.substr(c2 + 1);
                arg1 = arg1.substr(0, c2);
            }
        }
        if (name == "optimized") {
            OptimizedProjection opt = optimize_projection(region, std::max(grid, 64));
            rows.push_back({"optimized", opt.ratio});
        } else if (name == "conic-fit") {
            ConicFit fit = fit_conic_exponent(region);
            ProjectionParams pp;
            pp.cone_n = fit.cone_n;
            pp.central_meridian = fit.central_meridian;
            ProjectionMap conic = make_projection(ProjectionKind::conformal_conic, pp);
            char label[96];
            std::snprintf(label, sizeof label, "conformal_conic(fit n=%.4f)",
                          fit.cone_n);
            rows.push_back({label, distortion_report(conic, region, grid).ratio});
        } else {
            ProjectionParams pp;
            pp.center = centroid;
            pp.central_meridian = centroid.lon;
            if (!arg1.empty()) {
                double v = std::stod(arg1);
                if (name == "conic" || name == "conformal_conic") pp.cone_n = v;
                if (name == "lagrange" || name == "lagrange_circle") pp.exponent = v;
                if (name == "delisle" || name == "delisle_conic")
                    pp.std_parallel_1 = deg2rad(v);
            }
            if (!arg2.empty() && (name == "delisle" || name == "delisle_conic"))
                pp.std_parallel_2 = deg2rad(std::stod(arg2));
            ProjectionMap map = make_projection(projection_kind_from_name(name), pp);
            rows.push_back({tok, distortion_report(map, region, grid).ratio});
        }
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const CompareRow& a, const CompareRow& b) {
                         return a.ratio < b.ratio;
                     });
    std::printf("%-34s %s\n", "projection", "ratio");
    for (const CompareRow& r : rows) std::printf("%-34s %.6f\n", r.label.c_str(), r.ratio);

    if (!out_csv.empty()) {
        std::ofstream os(out_csv);
        if (!os) throw IoError("cannot open " + out_csv);
        os << "projection,ratio\n";
        char buf[160];
        for (const CompareRow& r : rows) {
            std::snprintf(buf, sizeof buf, "%s,%.12g\n", r.label.c_str(), r.ratio);
            os << buf;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical and Chebyshev-optimal map projections, distortion "
                 "analysis, and discrete Chebyshev nets"};
    app.require_subcommand(1);

    // project
    auto* sp = app.add_subcommand("project", "project a region and report distortion");
    ProjectArgs pa;
    sp->add_option("region", pa.region_file, "region file, 'lon lat' degrees per line")
        ->required();
    sp->add_option("--proj", pa.proj,
                   "mercator|equal-area|stereographic|conic|lagrange|delisle");
    sp->add_option("--center", pa.center, "stereographic center lon,lat (deg)")
        ->expected(2)
        ->delimiter(',');
    sp->add_option("--cone-n", pa.cone_n, "conformal conic cone constant");
    sp->add_option("--exponent", pa.exponent, "lagrange exponent");
    sp->add_option("--central-meridian", pa.central_meridian, "degrees");
    sp->add_option("--std-parallels", pa.std_parallels, "delisle parallels (deg)")
        ->expected(2)
        ->delimiter(',');
    sp->add_option("--scale", pa.scale, "global output scale");
    sp->add_option("--graticule", pa.graticule, "graticule step in degrees");
    sp->add_option("--grid", pa.grid, "sampling grid for reports/CSV");
    sp->add_option("--out", pa.out_svg, "output SVG path");
    sp->add_option("--csv", pa.out_csv, "distortion sample CSV path");

    // optimize
    auto* so = app.add_subcommand("optimize", "Chebyshev-optimal conformal map");
    std::string region_file, out_map, out_svg;
    int grid = 128;
    so->add_option("region", region_file)->required();
    so->add_option("--grid", grid, "grid resolution (>= 64)");
    so->add_option("--out", out_map, "output CHEBMAP1 file");
    so->add_option("--svg", out_svg, "optional SVG rendering");

    // net
    auto* sn = app.add_subcommand("net", "discrete Chebyshev net");
    std::string surface = "plane";
    double phi0 = 90.0, step = 0.1, extent = 1.0, curvature = 1.0;
    std::vector<double> rect;
    std::string net_csv, net_svg;
    sn->add_option("--surface", surface, "plane|sphere");
    sn->add_option("--phi0", phi0, "seed angle in degrees");
    sn->add_option("--step", step, "edge length");
    sn->add_option("--extent", extent, "seed arclength per quadrant");
    sn->add_option("--rect", rect, "Darboux edge lengths a,c")
        ->expected(2)
        ->delimiter(',');
    sn->add_option("--curvature", curvature, "sphere Gaussian curvature K");
    sn->add_option("--out", net_csv, "output CSV path");
    sn->add_option("--svg", net_svg, "optional SVG rendering");

    // compare
    auto* sc = app.add_subcommand("compare", "rank projections by distortion ratio");
    std::string cmp_region, cmp_csv;
    std::vector<std::string> cmp_projs;
    int cmp_grid = 96;
    sc->add_option("region", cmp_region)->required();
    sc->add_option("--projections", cmp_projs,
                   "comma list: mercator,stereographic,conic:0.6,conic-fit,"
                   "lagrange:1,delisle:40:60,equal-area,optimized")
        ->required()
        ->delimiter(',');
    sc->add_option("--grid", cmp_grid, "report grid resolution");
    sc->add_option("--csv", cmp_csv, "table CSV path");

    try {
        app.parse(argc, argv);
        if (sp->parsed()) return cmd_project(pa);
        if (so->parsed()) return cmd_optimize(region_file, grid, out_map, out_svg);
        if (sn->parsed())
            return cmd_net(surface, phi0, step, extent, rect, curvature, net_csv,
                           net_svg);
        if (sc->parsed()) return cmd_compare(cmp_region, cmp_projs, cmp_grid, cmp_csv);
        return kExitBadInput;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitBadInput;
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const SingularPoint& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const PoleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

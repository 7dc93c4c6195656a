#include "chebmap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chebmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_cosh(double u) { return std::log(std::cosh(u)); }

bool cell_valued(const GridDomain& g, int i, int j) {
    return g.in_range(i, j) && g.kind(i, j) != CellKind::exterior;
}

}  // namespace

PlanePoint OptimizedProjection::image_at(const PlanePoint& q) const {
    const GridDomain& g = *grid;
    const double fi = (q.x - g.t_min) / g.h - 0.5;
    const double fj = (q.y - g.u_min) / g.h - 0.5;
    const int i0 = static_cast<int>(std::floor(fi));
    const int j0 = static_cast<int>(std::floor(fj));
    if (!cell_valued(g, i0, j0) || !cell_valued(g, i0 + 1, j0) ||
        !cell_valued(g, i0, j0 + 1) || !cell_valued(g, i0 + 1, j0 + 1))
        throw SingularPoint("optimized map: point outside the gridded region");
    const double wx = fi - i0, wy = fj - j0;
    const std::complex<double> w =
        image.at(i0, j0) * ((1 - wx) * (1 - wy)) +
        image.at(i0 + 1, j0) * (wx * (1 - wy)) +
        image.at(i0, j0 + 1) * ((1 - wx) * wy) +
        image.at(i0 + 1, j0 + 1) * (wx * wy);
    return {w.real(), w.imag()};
}

ProjectionMap OptimizedProjection::as_projection_map() const {
    ProjectionMap m;
    m.name = "optimized";
    m.params = {{"grid_h", grid->h}};
    auto self = *this;  // value copy shares the grid and field storage
    m.forward = [self](const GeoPoint& p) {
        return self.image_at(mercator_forward(p));
    };
    m.singular_desc = "outside the optimized region grid";
    auto probe = *this;
    m.is_singular = [probe](const GeoPoint& p) {
        if (std::abs(p.lat) >= kLatCap) return true;
        try {
            probe.image_at(mercator_forward(p));
            return false;
        } catch (const SingularPoint&) {
            return true;
        }
    };
    return m;
}

OptimizedProjection optimize_projection(const Region& region, int resolution,
                                        const SolverConfig& solver) {
    if (resolution < 64) throw BadParam("optimize_projection needs resolution >= 64");
    validate_region(region);

    const int nb = std::clamp(4 * resolution, 512, 8192);
    Region dense = resample_boundary(region, nb);
    auto grid = build_grid(region_mercator_outline(dense), resolution);
    GridDomain& g = *grid;

    // target log m = 0 on the boundary: Dirichlet data for h = log|f'|
    set_boundary_values(g, [](const PlanePoint& p) { return -log_cosh(p.y); });

    std::shared_ptr<const GridDomain> cgrid = grid;
    ScalarField pot = solve_dirichlet(cgrid, solver);

    // anchor at the interior cell nearest the region centroid
    const PlanePoint c0 = mercator_forward(region_centroid(region));
    int ai = -1, aj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) != CellKind::interior) continue;
            PlanePoint cc = g.center(i, j);
            double d2 = (cc.x - c0.x) * (cc.x - c0.x) + (cc.y - c0.y) * (cc.y - c0.y);
            if (d2 < best) {
                best = d2;
                ai = i;
                aj = j;
            }
        }
    if (ai < 0) throw RegionTooThin("optimize_projection: no interior cells");

    ScalarField conj = harmonic_conjugate(pot, ai, aj, solver.tol_res);

    ComplexField fprime = make_complex_field(cgrid);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) == CellKind::exterior) continue;
            fprime.at(i, j) = std::exp(std::complex<double>(pot.at(i, j), conj.at(i, j)));
        }

    OptimizedProjection out;
    out.region = region;
    out.grid = cgrid;
    out.image = integrate_holomorphic(fprime, ai, aj, {0.0, 0.0});
    out.m_field = make_scalar_field(cgrid);

    double m_min = std::numeric_limits<double>::infinity(), m_max = -m_min;
    std::vector<double> blogm;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) == CellKind::exterior) continue;
            const double u = g.center(i, j).y;
            const double logm = pot.at(i, j) + log_cosh(u);
            out.m_field.at(i, j) = std::exp(logm);
            m_min = std::min(m_min, out.m_field.at(i, j));
            m_max = std::max(m_max, out.m_field.at(i, j));
            if (g.kind(i, j) == CellKind::boundary) blogm.push_back(logm);
        }
    out.ratio = m_max / m_min;

    std::sort(blogm.begin(), blogm.end());
    const double median = blogm[blogm.size() / 2];
    double dev = 0.0;
    for (double v : blogm) dev = std::max(dev, std::abs(v - median));
    out.boundary_constancy = dev;
    return out;
}

double conformality_defect(const OptimizedProjection& opt) {
    const GridDomain& g = *opt.grid;
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) != CellKind::interior) continue;
            bool full = true;
            for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                full = full && g.in_range(i + di, j + dj) &&
                       g.kind(i + di, j + dj) == CellKind::interior;
            if (!full) continue;
            const std::complex<double> wt =
                (opt.image.at(i + 1, j) - opt.image.at(i - 1, j)) / (2.0 * g.h);
            const std::complex<double> wu =
                (opt.image.at(i, j + 1) - opt.image.at(i, j - 1)) / (2.0 * g.h);
            const double ch = std::cosh(g.center(i, j).y);
            // Tissot axes from the Wirtinger split of the differential
            const double p = 0.5 * std::abs(wt - std::complex<double>(0, 1) * wu) * ch;
            const double q = 0.5 * std::abs(wt + std::complex<double>(0, 1) * wu) * ch;
            const double a = p + q, b = std::abs(p - q);
            if (a > 0.0) worst = std::max(worst, (a - b) / a);
        }
    return worst;
}

ConicFit fit_conic_exponent(const Region& region, const ConicSearchConfig& cfg) {
    validate_region(region);
    const double lam0 = region_centroid(region).lon;

    auto objective = [&](double n) {
        ProjectionParams pp;
        pp.cone_n = n;
        pp.central_meridian = lam0;
        ProjectionMap conic = make_projection(ProjectionKind::conformal_conic, pp);
        return distortion_report(conic, region, cfg.report_resolution).ratio;
    };

    double best_n = cfg.n_lo;
    double best_r = std::numeric_limits<double>::infinity();
    const int nc = std::max(cfg.coarse_samples, 3);
    std::vector<double> coarse_r(nc);
    for (int k = 0; k < nc; ++k) {
        double n = cfg.n_lo + (cfg.n_hi - cfg.n_lo) * k / (nc - 1);
        coarse_r[k] = objective(n);
        if (coarse_r[k] < best_r) {
            best_r = coarse_r[k];
            best_n = n;
        }
    }

    // golden-section refinement around the best coarse sample
    const double step = (cfg.n_hi - cfg.n_lo) / (nc - 1);
    double a = std::max(cfg.n_lo, best_n - step);
    double b = std::min(cfg.n_hi, best_n + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < best_r) {
            best_r = f1;
            best_n = x1;
        }
        if (f2 < best_r) {
            best_r = f2;
            best_n = x2;
        }
        if (b - a < cfg.rel_tol * (cfg.n_hi - cfg.n_lo) ||
            std::abs(f1 - f2) < cfg.rel_tol * std::min(f1, f2))
            break;
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = objective(x2);
        }
    }

    ConicFit fit;
    fit.cone_n = best_n;
    fit.central_meridian = lam0;
    fit.center_lat = std::asin(std::min(best_n, 1.0));
    fit.ratio = best_r;
    return fit;
}

}  // namespace chebmap

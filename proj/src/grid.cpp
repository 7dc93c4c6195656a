#include "chebmap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace chebmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool segments_cross(const PlanePoint& a, const PlanePoint& b,
                    const PlanePoint& c, const PlanePoint& d) {
    auto orient = [](const PlanePoint& p, const PlanePoint& q, const PlanePoint& r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    };
    double o1 = orient(a, b, c), o2 = orient(a, b, d);
    double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

PlanePoint closest_on_segment(const PlanePoint& p, const PlanePoint& a,
                              const PlanePoint& b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return {a.x + t * dx, a.y + t * dy};
}

}  // namespace

int GridDomain::interior_count() const {
    return static_cast<int>(std::count(mask.begin(), mask.end(), CellKind::interior));
}

int GridDomain::boundary_count() const {
    return static_cast<int>(std::count(mask.begin(), mask.end(), CellKind::boundary));
}

bool GridDomain::all_boundary_values_set() const {
    for (size_t k = 0; k < mask.size(); ++k)
        if (mask[k] == CellKind::boundary && !std::isfinite(boundary_value[k]))
            return false;
    return true;
}

ScalarField make_scalar_field(std::shared_ptr<const GridDomain> grid) {
    ScalarField f;
    f.values.assign(grid->mask.size(), kNaN);
    f.grid = std::move(grid);
    return f;
}

ComplexField make_complex_field(std::shared_ptr<const GridDomain> grid) {
    ComplexField f;
    f.values.assign(grid->mask.size(), {kNaN, kNaN});
    f.grid = std::move(grid);
    return f;
}

std::shared_ptr<GridDomain> build_grid(const std::vector<PlanePoint>& polyline,
                                       int resolution) {
    if (resolution < 32) throw BadParam("grid resolution must be >= 32");
    const size_t nv = polyline.size();
    if (nv < 3) throw BadRegion("polyline needs at least 3 points");

    if (nv <= 4096) {
        for (size_t i = 0; i < nv; ++i)
            for (size_t j = i + 1; j < nv; ++j) {
                if ((j + 1) % nv == i || (i + 1) % nv == j) continue;
                if (segments_cross(polyline[i], polyline[(i + 1) % nv],
                                   polyline[j], polyline[(j + 1) % nv]))
                    throw NotSimple("polyline is self-intersecting");
            }
    }

    double xmin = polyline[0].x, xmax = xmin, ymin = polyline[0].y, ymax = ymin;
    for (const PlanePoint& p : polyline) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double longest = std::max(xmax - xmin, ymax - ymin);
    if (!(longest > 0.0)) throw BadRegion("degenerate polyline extent");
    const double h = longest / resolution;

    auto g = std::make_shared<GridDomain>();
    g->h = h;
    g->t_min = xmin - 2.0 * h;
    g->u_min = ymin - 2.0 * h;
    g->nx = static_cast<int>(std::ceil((xmax - xmin) / h)) + 4;
    g->ny = static_cast<int>(std::ceil((ymax - ymin) / h)) + 4;
    g->mask.assign(static_cast<size_t>(g->nx) * g->ny, CellKind::exterior);
    g->boundary_value.assign(g->mask.size(), kNaN);
    g->nearest_pt.assign(g->mask.size(), PlanePoint{});

    // even-odd scanline fill at cell centers
    std::vector<double> xs;
    for (int j = 0; j < g->ny; ++j) {
        const double yc = g->u_min + (j + 0.5) * h;
        xs.clear();
        for (size_t k = 0; k < nv; ++k) {
            const PlanePoint& a = polyline[k];
            const PlanePoint& b = polyline[(k + 1) % nv];
            if ((a.y > yc) == (b.y > yc)) continue;
            xs.push_back(a.x + (b.x - a.x) * (yc - a.y) / (b.y - a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (size_t k = 0; k + 1 < xs.size(); k += 2) {
            int i0 = static_cast<int>(std::ceil((xs[k] - g->t_min) / h - 0.5));
            int i1 = static_cast<int>(std::floor((xs[k + 1] - g->t_min) / h - 0.5));
            for (int i = std::max(i0, 0); i <= std::min(i1, g->nx - 1); ++i)
                g->mask[g->idx(i, j)] = CellKind::interior;
        }
    }

    // boundary ring: exterior cells 4-adjacent to the interior
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            if (g->kind(i, j) != CellKind::interior) continue;
            for (int d = 0; d < 4; ++d) {
                int ii = i + dx[d], jj = j + dy[d];
                if (g->in_range(ii, jj) && g->kind(ii, jj) == CellKind::exterior)
                    g->mask[g->idx(ii, jj)] = CellKind::boundary;
            }
        }

    // interior connectivity (a pinch shows up as a second component)
    int first = -1;
    int n_interior = 0;
    for (size_t k = 0; k < g->mask.size(); ++k)
        if (g->mask[k] == CellKind::interior) {
            if (first < 0) first = static_cast<int>(k);
            ++n_interior;
        }
    if (n_interior == 0) throw RegionTooThin("no interior cells at this resolution");

    std::vector<std::uint8_t> seen(g->mask.size(), 0);
    std::deque<int> queue{first};
    seen[first] = 1;
    int reached = 0;
    while (!queue.empty()) {
        int k = queue.front();
        queue.pop_front();
        ++reached;
        int i = k % g->nx, j = k / g->nx;
        for (int d = 0; d < 4; ++d) {
            int ii = i + dx[d], jj = j + dy[d];
            if (!g->in_range(ii, jj)) continue;
            int kk = g->idx(ii, jj);
            if (!seen[kk] && g->mask[kk] == CellKind::interior) {
                seen[kk] = 1;
                queue.push_back(kk);
            }
        }
    }
    if (reached != n_interior)
        throw RegionTooThin("interior pinches into disconnected parts");

    // flood the exterior from the frame; unreached exterior = hole
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    for (int i = 0; i < g->nx; ++i)
        for (int j : {0, g->ny - 1})
            if (g->kind(i, j) == CellKind::exterior && !seen[g->idx(i, j)]) {
                seen[g->idx(i, j)] = 1;
                queue.push_back(g->idx(i, j));
            }
    for (int j = 0; j < g->ny; ++j)
        for (int i : {0, g->nx - 1})
            if (g->kind(i, j) == CellKind::exterior && !seen[g->idx(i, j)]) {
                seen[g->idx(i, j)] = 1;
                queue.push_back(g->idx(i, j));
            }
    while (!queue.empty()) {
        int k = queue.front();
        queue.pop_front();
        int i = k % g->nx, j = k / g->nx;
        for (int d = 0; d < 4; ++d) {
            int ii = i + dx[d], jj = j + dy[d];
            if (!g->in_range(ii, jj)) continue;
            int kk = g->idx(ii, jj);
            if (!seen[kk] && g->mask[kk] != CellKind::interior) {
                seen[kk] = 1;
                queue.push_back(kk);
            }
        }
    }
    for (size_t k = 0; k < g->mask.size(); ++k)
        if (g->mask[k] == CellKind::exterior && !seen[k])
            throw NotSimple("polyline encloses a hole");

    // nearest boundary-curve point per boundary cell
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            if (g->kind(i, j) != CellKind::boundary) continue;
            const PlanePoint c = g->center(i, j);
            double best = std::numeric_limits<double>::infinity();
            PlanePoint bp{};
            for (size_t k = 0; k < nv; ++k) {
                PlanePoint q = closest_on_segment(c, polyline[k], polyline[(k + 1) % nv]);
                double d2 = (q.x - c.x) * (q.x - c.x) + (q.y - c.y) * (q.y - c.y);
                if (d2 < best) {
                    best = d2;
                    bp = q;
                }
            }
            g->nearest_pt[g->idx(i, j)] = bp;
        }

    return g;
}

}  // namespace chebmap

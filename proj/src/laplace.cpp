#include "chebmap/laplace.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <deque>
#include <limits>
#include <thread>
#include <vector>

#include "chebmap/parallel.hpp"

namespace chebmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool valued(const GridDomain& g, int i, int j) {
    return g.in_range(i, j) && g.kind(i, j) != CellKind::exterior;
}

// Interior cell whose whole 5-point stencil is interior. Derivative
// estimates are clean here; next to the boundary ring the nearest-point
// Dirichlet transfer leaves an O(h) wobble that the audits must not read
// as path dependence.
bool core(const GridDomain& g, int i, int j) {
    if (!g.in_range(i, j) || g.kind(i, j) != CellKind::interior) return false;
    return g.in_range(i - 1, j) && g.kind(i - 1, j) == CellKind::interior &&
           g.in_range(i + 1, j) && g.kind(i + 1, j) == CellKind::interior &&
           g.in_range(i, j - 1) && g.kind(i, j - 1) == CellKind::interior &&
           g.in_range(i, j + 1) && g.kind(i, j + 1) == CellKind::interior;
}

struct SorPlan {
    const GridDomain* g;
    double omega;
    std::vector<double>* v;

    void sweep(int color, int j0, int j1) const {
        const GridDomain& gr = *g;
        std::vector<double>& val = *v;
        for (int j = j0; j < j1; ++j) {
            const int base = j * gr.nx;
            for (int i = (j + color) & 1; i < gr.nx; i += 2) {
                if (gr.mask[base + i] != CellKind::interior) continue;
                const double s = val[base + i - 1] + val[base + i + 1] +
                                 val[base + i - gr.nx] + val[base + i + gr.nx];
                val[base + i] += omega * (0.25 * s - val[base + i]);
            }
        }
    }

    void residual_rows(int j0, int j1, std::vector<double>* out) const {
        const GridDomain& gr = *g;
        const std::vector<double>& val = *v;
        for (int j = j0; j < j1; ++j) {
            const int base = j * gr.nx;
            for (int i = 0; i < gr.nx; ++i) {
                if (gr.mask[base + i] != CellKind::interior) {
                    (*out)[base + i] = 0.0;
                    continue;
                }
                const double s = val[base + i - 1] + val[base + i + 1] +
                                 val[base + i - gr.nx] + val[base + i + gr.nx];
                (*out)[base + i] = std::abs(0.25 * s - val[base + i]);
            }
        }
    }
};

struct SorResult {
    bool converged;
    bool diverged;
    double residual;
    long iterations;
};

SorResult run_sor(const GridDomain& g, std::vector<double>& val, double omega,
                  double tol, long cap, int threads) {
    SorPlan plan{&g, omega, &val};
    std::vector<double> resbuf(val.size(), 0.0);
    const int check_every = 16;

    // rows with no interior cell still sweep cheaply; partition evenly
    threads = std::clamp(threads, 1, std::max(1, g.ny / 8));
    std::vector<std::pair<int, int>> bands(threads);
    for (int t = 0; t < threads; ++t)
        bands[t] = {static_cast<int>(static_cast<long>(g.ny) * t / threads),
                    static_cast<int>(static_cast<long>(g.ny) * (t + 1) / threads)};

    SorResult result{false, false, std::numeric_limits<double>::infinity(), 0};
    double prev_res = std::numeric_limits<double>::infinity();
    int grow_count = 0;

    std::barrier sync(threads);
    std::atomic<int> verdict{0};  // 0 run, 1 converged, 2 cap, 3 diverged

    auto body = [&](int tid) {
        const auto [j0, j1] = bands[tid];
        for (long iter = 0;; ++iter) {
            plan.sweep(0, j0, j1);
            sync.arrive_and_wait();
            plan.sweep(1, j0, j1);
            sync.arrive_and_wait();
            const bool check = (iter % check_every == check_every - 1) || iter + 1 >= cap;
            if (check) {
                plan.residual_rows(j0, j1, &resbuf);
                sync.arrive_and_wait();
                if (tid == 0) {
                    double r = 0.0;
                    for (double x : resbuf) r = std::max(r, x);  // fixed index order
                    result.residual = r;
                    result.iterations = iter + 1;
                    if (r <= tol)
                        verdict.store(1, std::memory_order_relaxed);
                    else if (r > prev_res * (1.0 + 1e-12)) {
                        if (++grow_count >= 3) verdict.store(3, std::memory_order_relaxed);
                    } else
                        grow_count = 0;
                    if (iter + 1 >= cap && verdict.load(std::memory_order_relaxed) == 0)
                        verdict.store(2, std::memory_order_relaxed);
                    prev_res = r;
                }
                sync.arrive_and_wait();
                if (verdict.load(std::memory_order_relaxed) != 0) return;
            } else if (iter + 1 >= cap) {
                // unreachable: the cap iteration always checks
                return;
            }
        }
    };

    if (threads == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(body, t);
        body(0);
        for (auto& th : pool) th.join();
    }

    const int code = verdict.load();
    result.converged = code == 1;
    result.diverged = code == 3;
    return result;
}

}  // namespace

double laplacian_residual(const ScalarField& field) {
    const GridDomain& g = *field.grid;
    double r = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) != CellKind::interior) continue;
            double s = field.at(i - 1, j) + field.at(i + 1, j) + field.at(i, j - 1) +
                       field.at(i, j + 1);
            r = std::max(r, std::abs(0.25 * s - field.at(i, j)));
        }
    return r;
}

ScalarField solve_dirichlet(std::shared_ptr<const GridDomain> grid,
                            const SolverConfig& cfg) {
    const GridDomain& g = *grid;
    if (!g.all_boundary_values_set())
        throw BadParam("solve_dirichlet: not all boundary values are set");

    double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
    for (size_t k = 0; k < g.mask.size(); ++k)
        if (g.mask[k] == CellKind::boundary) {
            bmin = std::min(bmin, g.boundary_value[k]);
            bmax = std::max(bmax, g.boundary_value[k]);
        }
    if (!(bmax >= bmin)) throw BadParam("solve_dirichlet: grid has no boundary cells");

    ScalarField out = make_scalar_field(grid);
    const double mean = 0.5 * (bmin + bmax);
    for (size_t k = 0; k < g.mask.size(); ++k) {
        if (g.mask[k] == CellKind::boundary)
            out.values[k] = g.boundary_value[k];
        else if (g.mask[k] == CellKind::interior)
            out.values[k] = mean;
        else
            out.values[k] = kNaN;
    }

    const double range = bmax - bmin;
    if (range == 0.0) return out;  // constant data: exact fixed point

    // span of the interior bounding box drives the SOR relaxation estimate
    int imin = g.nx, imax = -1, jmin = g.ny, jmax = -1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.kind(i, j) == CellKind::interior) {
                imin = std::min(imin, i);
                imax = std::max(imax, i);
                jmin = std::min(jmin, j);
                jmax = std::max(jmax, j);
            }
    const int span = std::max(imax - imin, jmax - jmin) + 1;

    const double tol = cfg.tol_res * range;
    const long cap = cfg.max_iters > 0 ? cfg.max_iters : 40L * span + 5000;
    const double omega =
        cfg.omega > 0.0 ? cfg.omega : 2.0 / (1.0 + std::sin(kPi / (span + 1)));
    const int threads = cfg.threads > 0 ? cfg.threads : thread_budget();

    SorResult res = run_sor(g, out.values, omega, tol, cap, threads);
    if (res.diverged) {
        // restart as plain Gauss-Seidel
        for (size_t k = 0; k < g.mask.size(); ++k)
            if (g.mask[k] == CellKind::interior) out.values[k] = mean;
        res = run_sor(g, out.values, 1.0, tol, 4 * cap, threads);
    }
    if (!res.converged)
        throw NoConvergence("solve_dirichlet: residual " + std::to_string(res.residual) +
                                " after " + std::to_string(res.iterations) +
                                " iterations (target " + std::to_string(tol) + ")",
                            res.residual, res.iterations);
    return out;
}

// --- conjugation and integration ----------------------------------------

namespace {

// Per-axis derivative estimate: centered where possible, one-sided otherwise.
double axis_derivative(const GridDomain& g, const std::vector<double>& v, int i,
                       int j, int di, int dj) {
    const double h = g.h;
    const bool fwd = valued(g, i + di, j + dj);
    const bool bwd = valued(g, i - di, j - dj);
    const double c = v[g.idx(i, j)];
    if (fwd && bwd)
        return (v[g.idx(i + di, j + dj)] - v[g.idx(i - di, j - dj)]) / (2.0 * h);
    if (fwd) {
        if (valued(g, i + 2 * di, j + 2 * dj))
            return (-3.0 * c + 4.0 * v[g.idx(i + di, j + dj)] -
                    v[g.idx(i + 2 * di, j + 2 * dj)]) /
                   (2.0 * h);
        return (v[g.idx(i + di, j + dj)] - c) / h;
    }
    if (bwd) {
        if (valued(g, i - 2 * di, j - 2 * dj))
            return (3.0 * c - 4.0 * v[g.idx(i - di, j - dj)] +
                    v[g.idx(i - 2 * di, j - 2 * dj)]) /
                   (2.0 * h);
        return (c - v[g.idx(i - di, j - dj)]) / h;
    }
    return 0.0;
}

// Breadth-first integration of per-edge trapezoid increments over the grid
// graph of valued cells. increment(a, b, di, dj) gives the step a -> b.
template <typename T, typename Inc>
std::vector<T> bfs_integrate(const GridDomain& g, int ai, int aj, T anchor_value,
                             std::vector<std::uint8_t>* reached_out, Inc&& increment) {
    std::vector<T> acc(g.mask.size(), T{});
    std::vector<std::uint8_t> reached(g.mask.size(), 0);
    std::deque<int> queue;
    const int a = g.idx(ai, aj);
    acc[a] = anchor_value;
    reached[a] = 1;
    queue.push_back(a);
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        const int k = queue.front();
        queue.pop_front();
        const int i = k % g.nx, j = k / g.nx;
        for (int d = 0; d < 4; ++d) {
            const int ii = i + di[d], jj = j + dj[d];
            if (!valued(g, ii, jj)) continue;
            const int kk = g.idx(ii, jj);
            if (reached[kk]) continue;
            acc[kk] = acc[k] + increment(k, kk, di[d], dj[d]);
            reached[kk] = 1;
            queue.push_back(kk);
        }
    }
    if (reached_out) *reached_out = std::move(reached);
    return acc;
}

// BFS assigns values along a spanning tree; on every non-tree core edge the
// value difference must still match the edge increment, otherwise some cycle
// (for instance one around a hole) is inconsistent.
template <typename T, typename Inc>
double closure_defect(const GridDomain& g, const std::vector<T>& acc,
                      const std::vector<std::uint8_t>& reached, Inc&& increment) {
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!core(g, i, j) || !reached[g.idx(i, j)]) continue;
            const int k = g.idx(i, j);
            if (core(g, i + 1, j) && reached[g.idx(i + 1, j)])
                worst = std::max(worst, std::abs(acc[g.idx(i + 1, j)] - acc[k] -
                                                 increment(k, g.idx(i + 1, j), 1, 0)));
            if (core(g, i, j + 1) && reached[g.idx(i, j + 1)])
                worst = std::max(worst, std::abs(acc[g.idx(i, j + 1)] - acc[k] -
                                                 increment(k, g.idx(i, j + 1), 0, 1)));
        }
    return worst;
}

// Compare row-then-column vs column-then-row integration where both L-paths
// stay inside the domain; returns the max discrepancy found.
template <typename T, typename Inc>
double audit_two_paths(const GridDomain& g, int ai, int aj, Inc&& increment) {
    const size_t n = g.mask.size();
    std::vector<T> p1(n, T{}), p2(n, T{});
    std::vector<std::uint8_t> ok1(n, 0), ok2(n, 0);
    const int a = g.idx(ai, aj);
    ok1[a] = ok2[a] = 1;

    auto extend = [&](std::vector<T>& acc, std::vector<std::uint8_t>& ok, int i,
                      int j, int di, int dj) {
        const int from = g.idx(i - di, j - dj);
        if (!ok[from] || !core(g, i, j)) return;
        acc[g.idx(i, j)] = acc[from] + increment(from, g.idx(i, j), di, dj);
        ok[g.idx(i, j)] = 1;
    };

    // path 1: along the anchor row first, then vertically
    for (int i = ai + 1; i < g.nx; ++i) extend(p1, ok1, i, aj, 1, 0);
    for (int i = ai - 1; i >= 0; --i) extend(p1, ok1, i, aj, -1, 0);
    for (int j = aj + 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) extend(p1, ok1, i, j, 0, 1);
    for (int j = aj - 1; j >= 0; --j)
        for (int i = 0; i < g.nx; ++i) extend(p1, ok1, i, j, 0, -1);

    // path 2: along the anchor column first, then horizontally
    for (int j = aj + 1; j < g.ny; ++j) extend(p2, ok2, ai, j, 0, 1);
    for (int j = aj - 1; j >= 0; --j) extend(p2, ok2, ai, j, 0, -1);
    for (int i = ai + 1; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) extend(p2, ok2, i, j, 1, 0);
    for (int i = ai - 1; i >= 0; --i)
        for (int j = 0; j < g.ny; ++j) extend(p2, ok2, i, j, -1, 0);

    double worst = 0.0;
    for (size_t k = 0; k < n; ++k)
        if (ok1[k] && ok2[k]) worst = std::max(worst, std::abs(p1[k] - p2[k]));
    return worst;
}

}  // namespace

ScalarField harmonic_conjugate(const ScalarField& field, int anchor_i,
                               int anchor_j, double tol_res) {
    const GridDomain& g = *field.grid;
    if (!g.in_range(anchor_i, anchor_j) ||
        g.kind(anchor_i, anchor_j) != CellKind::interior)
        throw BadParam("harmonic_conjugate: anchor must be an interior cell");

    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (size_t k = 0; k < g.mask.size(); ++k)
        if (g.mask[k] != CellKind::exterior) {
            vmin = std::min(vmin, field.values[k]);
            vmax = std::max(vmax, field.values[k]);
        }
    const double range = std::max(vmax - vmin, 1e-30);
    if (laplacian_residual(field) > 100.0 * tol_res * range)
        throw NotHarmonic("harmonic_conjugate: field is not discretely harmonic");

    // Cauchy-Riemann for t + i*u: conj_t = -h_u, conj_u = h_t
    std::vector<double> gt(g.mask.size(), 0.0), gu(g.mask.size(), 0.0);
    double gmax = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) == CellKind::exterior) continue;
            const int k = g.idx(i, j);
            gt[k] = axis_derivative(g, field.values, i, j, 1, 0);
            gu[k] = axis_derivative(g, field.values, i, j, 0, 1);
            gmax = std::max(gmax, std::hypot(gt[k], gu[k]));
        }

    auto increment = [&](int from, int to, int di, int dj) {
        if (di != 0)
            return -0.5 * (gu[from] + gu[to]) * (di * g.h);
        return 0.5 * (gt[from] + gt[to]) * (dj * g.h);
    };

    const double extent = std::max(g.nx, g.ny) * g.h;
    const double tol_path =
        10.0 * g.h * g.h * std::max(gmax, 1e-30) * std::max(1.0, extent);
    const double worst = audit_two_paths<double>(g, anchor_i, anchor_j, increment);
    if (worst > tol_path)
        throw PathInconsistency("harmonic_conjugate: path-dependent integral (" +
                                std::to_string(worst) + ")");

    ScalarField out = make_scalar_field(field.grid);
    std::vector<std::uint8_t> reached;
    auto acc = bfs_integrate<double>(g, anchor_i, anchor_j, 0.0, &reached, increment);
    const double defect = closure_defect(g, acc, reached, increment);
    if (defect > tol_path)
        throw PathInconsistency("harmonic_conjugate: inconsistent cycle (" +
                                std::to_string(defect) +
                                "), domain is not simply connected");
    for (size_t k = 0; k < g.mask.size(); ++k)
        out.values[k] = reached[k] ? acc[k] : kNaN;
    return out;
}

ComplexField integrate_holomorphic(const ComplexField& fprime, int anchor_i,
                                   int anchor_j,
                                   std::complex<double> anchor_value) {
    const GridDomain& g = *fprime.grid;
    if (!g.in_range(anchor_i, anchor_j) ||
        g.kind(anchor_i, anchor_j) != CellKind::interior)
        throw BadParam("integrate_holomorphic: anchor must be an interior cell");

    // discrete d/d(conj z) must vanish away from the boundary ring
    double gmax = 0.0, cr_max = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!core(g, i, j)) continue;
            const std::complex<double> wt =
                (fprime.at(i + 1, j) - fprime.at(i - 1, j)) / (2.0 * g.h);
            const std::complex<double> wu =
                (fprime.at(i, j + 1) - fprime.at(i, j - 1)) / (2.0 * g.h);
            gmax = std::max(gmax, std::max(std::abs(wt), std::abs(wu)));
            cr_max = std::max(cr_max,
                              0.5 * std::abs(wt + std::complex<double>(0, 1) * wu));
        }
    if (cr_max > 0.05 * std::max(gmax, 1e-30) + 1e-12)
        throw PathInconsistency("integrate_holomorphic: field is not holomorphic");

    auto increment = [&](int from, int to, int di, int dj) {
        const std::complex<double> dz(di * g.h, dj * g.h);
        return 0.5 * (fprime.values[from] + fprime.values[to]) * dz;
    };

    double wmax = 0.0;
    for (size_t k = 0; k < g.mask.size(); ++k)
        if (g.mask[k] != CellKind::exterior)
            wmax = std::max(wmax, std::abs(fprime.values[k]));
    const double extent = std::max(g.nx, g.ny) * g.h;
    const double tol_path = 10.0 * g.h * g.h * std::max({gmax, wmax, 1e-30}) *
                            std::max(1.0, extent);
    const double worst =
        audit_two_paths<std::complex<double>>(g, anchor_i, anchor_j, increment);
    if (worst > tol_path)
        throw PathInconsistency("integrate_holomorphic: path-dependent integral (" +
                                std::to_string(worst) + ")");

    ComplexField out = make_complex_field(fprime.grid);
    std::vector<std::uint8_t> reached;
    auto acc = bfs_integrate<std::complex<double>>(g, anchor_i, anchor_j,
                                                   anchor_value, &reached, increment);
    const double defect = closure_defect(g, acc, reached, increment);
    if (defect > tol_path)
        throw PathInconsistency("integrate_holomorphic: inconsistent cycle (" +
                                std::to_string(defect) +
                                "), domain is not simply connected");
    for (size_t k = 0; k < g.mask.size(); ++k)
        out.values[k] = reached[k] ? acc[k] : std::complex<double>{kNaN, kNaN};
    return out;
}

}  // namespace chebmap

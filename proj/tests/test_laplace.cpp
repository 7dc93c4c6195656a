#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>

#include "chebmap/laplace.hpp"

using namespace chebmap;

namespace {

std::vector<PlanePoint> unit_square() {
    return {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

std::vector<PlanePoint> disk_polyline(double r, int n = 2048) {
    std::vector<PlanePoint> out;
    for (int k = 0; k < n; ++k) {
        double th = 2 * kPi * k / n;
        out.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return out;
}

// boundary data from the harmonic itself, evaluated at cell centers, so the
// study isolates the stencil order
template <typename F>
ScalarField solve_with(std::shared_ptr<GridDomain> g, F&& exact,
                       const SolverConfig& cfg = {}) {
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i)
            if (g->kind(i, j) == CellKind::boundary)
                g->boundary_value[g->idx(i, j)] = exact(g->center(i, j));
    return solve_dirichlet(g, cfg);
}

template <typename F>
double max_interior_error(const ScalarField& f, F&& exact) {
    const GridDomain& g = *f.grid;
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.kind(i, j) == CellKind::interior)
                worst = std::max(worst, std::abs(f.at(i, j) - exact(g.center(i, j))));
    return worst;
}

void check_max_principle(const ScalarField& f) {
    const GridDomain& g = *f.grid;
    double bmin = 1e300, bmax = -1e300, imin = 1e300, imax = -1e300;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) == CellKind::boundary) {
                bmin = std::min(bmin, f.at(i, j));
                bmax = std::max(bmax, f.at(i, j));
            } else if (g.kind(i, j) == CellKind::interior) {
                imin = std::min(imin, f.at(i, j));
                imax = std::max(imax, f.at(i, j));
            }
        }
    CHECK(imin >= bmin - 1e-12);
    CHECK(imax <= bmax + 1e-12);
}

}  // namespace

TEST_CASE("build_grid masks") {
    SUBCASE("unit square at resolution 64 gives a 64x64 interior block") {
        auto g = build_grid(unit_square(), 64);
        CHECK(g->interior_count() == 64 * 64);
        int rowmin = 1 << 30, rowmax = 0;
        for (int j = 0; j < g->ny; ++j) {
            int run = 0;
            for (int i = 0; i < g->nx; ++i)
                run += g->kind(i, j) == CellKind::interior;
            if (run) {
                rowmin = std::min(rowmin, run);
                rowmax = std::max(rowmax, run);
            }
        }
        CHECK(rowmin == 64);
        CHECK(rowmax == 64);
    }

    SUBCASE("disk interior area approximates pi r^2") {
        auto g = build_grid(disk_polyline(1.0), 128);
        double cell_area = g->h * g->h;
        double area = g->interior_count() * cell_area;
        CHECK(area == doctest::Approx(kPi).epsilon(0.02));
    }

    SUBCASE("self-crossing bowtie rejected") {
        std::vector<PlanePoint> bow = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
        CHECK_THROWS_AS(build_grid(bow, 32), NotSimple);
    }

    SUBCASE("pinched dumbbell rejected") {
        // two squares joined by a corridor far thinner than a cell
        std::vector<PlanePoint> dumb = {
            {0, 0},       {1, 0},       {1, 0.4995}, {2, 0.4995}, {2, 0},
            {3, 0},       {3, 1},       {2, 1},      {2, 0.5005}, {1, 0.5005},
            {1, 1},       {0, 1}};
        CHECK_THROWS_AS(build_grid(dumb, 32), RegionTooThin);
    }

    SUBCASE("resolution bound") {
        CHECK_THROWS_AS(build_grid(unit_square(), 16), BadParam);
    }
}

TEST_CASE("solve_dirichlet exact fixed points") {
    SUBCASE("constant boundary gives the constant exactly") {
        auto g = build_grid(unit_square(), 48);
        ScalarField f = solve_with(g, [](PlanePoint) { return 3.25; });
        double worst = 0.0;
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) == CellKind::interior)
                    worst = std::max(worst, std::abs(f.at(i, j) - 3.25));
        CHECK(worst == 0.0);
    }

    SUBCASE("linear data is reproduced to near round-off") {
        auto g = build_grid(unit_square(), 48);
        SolverConfig cfg;
        cfg.tol_res = 2e-15;
        cfg.max_iters = 200000;
        ScalarField f = solve_with(g, [](PlanePoint p) { return p.x; }, cfg);
        CHECK(max_interior_error(f, [](PlanePoint p) { return p.x; }) < 1e-12);
        check_max_principle(f);
    }
}

TEST_CASE("solve_dirichlet quadratic harmonics are stencil-exact") {
    // the 5-point Laplacian annihilates t^2 - u^2 exactly, so the solve
    // reproduces it up to the iteration tolerance at any resolution
    auto exact = [](PlanePoint p) { return p.x * p.x - p.y * p.y; };
    SolverConfig cfg;
    cfg.tol_res = 1e-12;
    auto g = build_grid(disk_polyline(1.0), 64);
    ScalarField f = solve_with(g, exact, cfg);
    CHECK(max_interior_error(f, exact) < 1e-7);
    check_max_principle(f);
}

TEST_CASE("solve_dirichlet second-order convergence") {
    // Re e^z has nonvanishing fourth derivatives, so the truncation error is
    // visible and must shrink ~4x per grid halving
    auto exact = [](PlanePoint p) { return std::exp(p.x) * std::cos(p.y); };
    SolverConfig cfg;
    cfg.tol_res = 1e-12;
    double errs[3];
    int res[3] = {32, 64, 128};
    for (int k = 0; k < 3; ++k) {
        auto g = build_grid(disk_polyline(1.0), res[k]);
        ScalarField f = solve_with(g, exact, cfg);
        errs[k] = max_interior_error(f, exact);
        check_max_principle(f);
    }
    CHECK(errs[0] / errs[1] > 3.3);  // ~4x per halving
    CHECK(errs[1] / errs[2] > 3.3);
    double p = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(p > 1.9);
}

TEST_CASE("solve_dirichlet failure reporting") {
    auto g = build_grid(unit_square(), 48);
    SolverConfig cfg;
    cfg.max_iters = 3;
    try {
        solve_with(g, [](PlanePoint p) { return p.x * p.x - p.y * p.y; }, cfg);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
        CHECK(e.residual > 0.0);
        CHECK(e.iterations <= 3);
        CHECK(std::string(e.what()).find("residual") != std::string::npos);
    }
    CHECK_THROWS_AS(solve_dirichlet(build_grid(unit_square(), 48)), BadParam);
}

TEST_CASE("solve_dirichlet determinism across thread counts") {
    auto run = [](int threads) {
        auto g = build_grid(disk_polyline(1.0), 96);
        SolverConfig cfg;
        cfg.threads = threads;
        return solve_with(
            g, [](PlanePoint p) { return std::exp(p.x) * std::cos(p.y); }, cfg);
    };
    ScalarField a = run(1), b = run(3), c = run(1);
    REQUIRE(a.values.size() == b.values.size());
    CHECK(std::memcmp(a.values.data(), b.values.data(),
                      a.values.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.values.data(), c.values.data(),
                      a.values.size() * sizeof(double)) == 0);
}

TEST_CASE("harmonic conjugate") {
    SUBCASE("conjugate of t is u (up to the anchor constant)") {
        auto g = build_grid(unit_square(), 48);
        ScalarField f = make_scalar_field(g);
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) != CellKind::exterior)
                    f.at(i, j) = g->center(i, j).x;
        int ai = g->nx / 2, aj = g->ny / 2;
        while (g->kind(ai, aj) != CellKind::interior) ++ai;
        ScalarField conj = harmonic_conjugate(f, ai, aj);
        double u0 = g->center(ai, aj).y;
        double worst = 0.0;
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) == CellKind::interior)
                    worst = std::max(
                        worst, std::abs(conj.at(i, j) - (g->center(i, j).y - u0)));
        CHECK(worst < 1e-11);
    }

    SUBCASE("conjugate of a constant is zero") {
        auto g = build_grid(unit_square(), 48);
        ScalarField f = make_scalar_field(g);
        for (size_t k = 0; k < f.values.size(); ++k)
            if (g->mask[k] != CellKind::exterior) f.values[k] = 7.0;
        ScalarField conj = harmonic_conjugate(f, g->nx / 2, g->ny / 2);
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) == CellKind::interior)
                    CHECK(conj.at(i, j) == 0.0);
    }

    SUBCASE("conjugate of Re z^2 is Im z^2 plus a constant") {
        auto g = build_grid(disk_polyline(1.0), 96);
        ScalarField f = make_scalar_field(g);
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) != CellKind::exterior) {
                    PlanePoint c = g->center(i, j);
                    f.at(i, j) = c.x * c.x - c.y * c.y;
                }
        int ai = g->nx / 2, aj = g->ny / 2;
        while (g->kind(ai, aj) != CellKind::interior) ++ai;
        ScalarField conj = harmonic_conjugate(f, ai, aj);
        PlanePoint a = g->center(ai, aj);
        const double c0 = 2.0 * a.x * a.y;
        double worst = 0.0;
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) == CellKind::interior) {
                    PlanePoint c = g->center(i, j);
                    worst = std::max(
                        worst, std::abs(conj.at(i, j) - (2 * c.x * c.y - c0)));
                }
        CHECK(worst < 5e-3 * g->h);  // O(h^2) against the analytic pair
    }

    SUBCASE("non-harmonic input rejected") {
        auto g = build_grid(unit_square(), 48);
        ScalarField f = make_scalar_field(g);
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) != CellKind::exterior) {
                    PlanePoint c = g->center(i, j);
                    f.at(i, j) = c.x * c.x;  // Laplacian 2, not harmonic
                }
        CHECK_THROWS_AS(harmonic_conjugate(f, g->nx / 2, g->ny / 2), NotHarmonic);
    }

    SUBCASE("annulus (hole) trips the path audit") {
        // hand-built ring mask: log r is harmonic but has no single-valued
        // conjugate around the hole
        auto g = std::make_shared<GridDomain>();
        g->h = 0.05;
        g->nx = g->ny = 48;
        g->t_min = g->u_min = -1.2;
        g->mask.assign(48 * 48, CellKind::exterior);
        for (int j = 0; j < 48; ++j)
            for (int i = 0; i < 48; ++i) {
                PlanePoint c = g->center(i, j);
                double r = std::hypot(c.x, c.y);
                if (r > 0.35 && r < 1.0) g->mask[g->idx(i, j)] = CellKind::interior;
            }
        for (int j = 1; j < 47; ++j)
            for (int i = 1; i < 47; ++i) {
                if (g->kind(i, j) != CellKind::exterior) continue;
                bool adj = false;
                for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                    adj = adj || g->kind(i + di, j + dj) == CellKind::interior;
                if (adj) g->mask[g->idx(i, j)] = CellKind::boundary;
            }
        g->boundary_value.assign(g->mask.size(),
                                 std::numeric_limits<double>::quiet_NaN());
        g->nearest_pt.assign(g->mask.size(), PlanePoint{});
        for (int j = 0; j < 48; ++j)
            for (int i = 0; i < 48; ++i)
                if (g->kind(i, j) == CellKind::boundary) {
                    PlanePoint c = g->center(i, j);
                    g->boundary_value[g->idx(i, j)] = std::log(std::hypot(c.x, c.y));
                }
        ScalarField f = solve_dirichlet(g);
        int ai = 8, aj = 24;
        while (g->kind(ai, aj) != CellKind::interior) ++ai;
        CHECK_THROWS_AS(harmonic_conjugate(f, ai, aj), PathInconsistency);
    }
}

TEST_CASE("integrate_holomorphic") {
    auto g = build_grid(unit_square(), 48);
    auto fill = [&](auto fn) {
        ComplexField f = make_complex_field(g);
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) != CellKind::exterior) {
                    PlanePoint c = g->center(i, j);
                    f.at(i, j) = fn(std::complex<double>(c.x, c.y));
                }
        return f;
    };
    int ai = g->nx / 2, aj = g->ny / 2;
    while (g->kind(ai, aj) != CellKind::interior) ++ai;
    PlanePoint ac = g->center(ai, aj);
    const std::complex<double> za{ac.x, ac.y};

    SUBCASE("f' = 1 integrates to z - z_anchor + value") {
        ComplexField F = integrate_holomorphic(
            fill([](std::complex<double>) { return std::complex<double>{1, 0}; }),
            ai, aj, {2.0, -1.0});
        double worst = 0.0;
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) == CellKind::interior) {
                    PlanePoint c = g->center(i, j);
                    std::complex<double> want = std::complex<double>(c.x, c.y) - za +
                                                std::complex<double>(2, -1);
                    worst = std::max(worst, std::abs(F.at(i, j) - want));
                }
        CHECK(worst < 1e-12);
    }

    SUBCASE("f' = z integrates to z^2/2 up to a constant") {
        ComplexField F = integrate_holomorphic(
            fill([](std::complex<double> z) { return z; }), ai, aj, za * za * 0.5);
        double worst = 0.0;
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) == CellKind::interior) {
                    PlanePoint c = g->center(i, j);
                    std::complex<double> z{c.x, c.y};
                    worst = std::max(worst, std::abs(F.at(i, j) - 0.5 * z * z));
                }
        CHECK(worst < 1e-12);  // trapezoid is exact on linear integrands
    }

    SUBCASE("f' = 0 stays at the anchor value") {
        ComplexField F = integrate_holomorphic(
            fill([](std::complex<double>) { return std::complex<double>{0, 0}; }),
            ai, aj, {5.0, 5.0});
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                if (g->kind(i, j) == CellKind::interior)
                    CHECK(std::abs(F.at(i, j) - std::complex<double>(5, 5)) == 0.0);
    }

    SUBCASE("anti-holomorphic input rejected") {
        CHECK_THROWS_AS(
            integrate_holomorphic(
                fill([](std::complex<double> z) { return std::conj(z); }), ai, aj,
                {0, 0}),
            PathInconsistency);
    }
}

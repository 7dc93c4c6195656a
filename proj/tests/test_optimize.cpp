#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>

#include "chebmap/map_file.hpp"
#include "chebmap/optimize.hpp"

using namespace chebmap;

namespace {

using cplx = std::complex<double>;

struct Alignment {
    cplx alpha, beta;
    double max_err;       // max |alpha w + beta - s|
    double diameter;      // of the reference point set
    double m_rel_err;     // max |m_ref / (|alpha| m) - 1|
};

// least-squares similarity alpha w + beta matching the optimized image to a
// reference projection, plus the aligned magnification comparison
Alignment align_to(const OptimizedProjection& opt, const ProjectionMap& ref) {
    const GridDomain& g = *opt.grid;
    std::vector<cplx> w, s;
    std::vector<double> m_opt, m_ref;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.kind(i, j) == CellKind::exterior) continue;
            GeoPoint p = mercator_inverse(g.center(i, j));
            PlanePoint q = ref.forward(p);
            w.push_back(opt.image.at(i, j));
            s.push_back({q.x, q.y});
            m_opt.push_back(opt.m_field.at(i, j));
            m_ref.push_back(magnification_conformal(ref, p));
        }
    const size_t n = w.size();
    cplx wbar{}, sbar{};
    for (size_t k = 0; k < n; ++k) {
        wbar += w[k];
        sbar += s[k];
    }
    wbar /= static_cast<double>(n);
    sbar /= static_cast<double>(n);
    cplx num{};
    double den = 0.0;
    for (size_t k = 0; k < n; ++k) {
        num += std::conj(w[k] - wbar) * (s[k] - sbar);
        den += std::norm(w[k] - wbar);
    }
    Alignment a;
    a.alpha = num / den;
    a.beta = sbar - a.alpha * wbar;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const cplx& v : s) {
        xmin = std::min(xmin, v.real());
        xmax = std::max(xmax, v.real());
        ymin = std::min(ymin, v.imag());
        ymax = std::max(ymax, v.imag());
    }
    a.diameter = std::hypot(xmax - xmin, ymax - ymin);
    a.max_err = 0.0;
    a.m_rel_err = 0.0;
    const double scale = std::abs(a.alpha);
    for (size_t k = 0; k < n; ++k) {
        a.max_err = std::max(a.max_err, std::abs(a.alpha * w[k] + a.beta - s[k]));
        a.m_rel_err =
            std::max(a.m_rel_err, std::abs(m_ref[k] / (scale * m_opt[k]) - 1.0));
    }
    return a;
}

}  // namespace

TEST_CASE("optimizer recovers the stereographic map on a geodesic cap") {
    Region cap = make_cap({0.0, 0.0}, deg2rad(30.0), 1024);
    OptimizedProjection opt = optimize_projection(cap, 96);

    CHECK(opt.ratio >= 1.0);
    CHECK(opt.boundary_constancy < 5.0 * opt.grid->h);
    for (double v : opt.m_field.values)
        if (std::isfinite(v)) CHECK(v > 0.0);

    // closed-form oracle: the cap's symmetric constant-boundary solution
    ProjectionParams pp;
    pp.center = {0.0, 0.0};
    ProjectionMap stereo = make_projection(ProjectionKind::stereographic, pp);
    Alignment a = align_to(opt, stereo);
    CHECK(a.max_err / a.diameter < 0.01);
    CHECK(a.m_rel_err < 0.01);

    const double sec15 = 1.0 / std::cos(deg2rad(15.0));
    CHECK(opt.ratio == doctest::Approx(sec15 * sec15).epsilon(0.01));

    CHECK(conformality_defect(opt) < 1e-3);
}

TEST_CASE("boundary deviation of log m shrinks linearly with h") {
    Region cap = make_cap({0.0, 0.0}, deg2rad(30.0), 1024);
    OptimizedProjection lo = optimize_projection(cap, 64);
    OptimizedProjection hi = optimize_projection(cap, 128);
    CHECK(lo.boundary_constancy / hi.boundary_constancy >= 1.8);
}

TEST_CASE("optimizer input validation") {
    Region cap = make_cap({0.0, 0.0}, deg2rad(10.0), 128);
    CHECK_THROWS_AS(optimize_projection(cap, 32), BadParam);
}

TEST_CASE("optimized map beats the classical candidates on a quadrangle") {
    Region quad = make_lonlat_quad(deg2rad(-20), deg2rad(20), deg2rad(30),
                                   deg2rad(50), 128, "quad40");
    OptimizedProjection opt = optimize_projection(quad, 96);

    ProjectionParams pp;
    pp.center = region_centroid(quad);
    double best_classical = 1e300;
    best_classical = std::min(
        best_classical,
        distortion_report(make_projection(ProjectionKind::mercator, {}), quad, 64)
            .ratio);
    best_classical = std::min(
        best_classical,
        distortion_report(make_projection(ProjectionKind::stereographic, pp), quad, 64)
            .ratio);
    ConicFit fit = fit_conic_exponent(quad);
    best_classical = std::min(best_classical, fit.ratio);

    CHECK(opt.ratio <= best_classical * 1.01);
}

TEST_CASE("conic exponent fit") {
    SUBCASE("east-west band at 45 degrees picks the matching cone") {
        Region band = make_lonlat_quad(deg2rad(-30), deg2rad(30), deg2rad(35),
                                       deg2rad(55), 96, "band45");
        ConicFit fit = fit_conic_exponent(band);
        // equalizing the band edges gives the expected exponent
        auto u_of = [](double lat) { return std::asinh(std::tan(lat)); };
        auto logsec = [](double lat) { return -std::log(std::cos(lat)); };
        double n_expected = (logsec(deg2rad(55)) - logsec(deg2rad(35))) /
                            (u_of(deg2rad(55)) - u_of(deg2rad(35)));
        CHECK(fit.cone_n == doctest::Approx(n_expected).epsilon(0.03));
        CHECK(rad2deg(fit.center_lat) == doctest::Approx(45.0).epsilon(0.05));

        // beats cones tangent at other latitudes (1-D sweep oracle)
        auto ratio_at = [&](double n) {
            ProjectionParams pp;
            pp.cone_n = n;
            pp.central_meridian = fit.central_meridian;
            return distortion_report(
                       make_projection(ProjectionKind::conformal_conic, pp), band, 48)
                .ratio;
        };
        CHECK(fit.ratio < ratio_at(std::sin(deg2rad(30.0))));
        CHECK(fit.ratio < ratio_at(std::sin(deg2rad(60.0))));
    }

    SUBCASE("thin equatorial band is cylindrical: n at the lower bound") {
        Region band = make_lonlat_quad(deg2rad(-40), deg2rad(40), deg2rad(-5),
                                       deg2rad(5), 96, "band0");
        ConicSearchConfig cfg;
        ConicFit fit = fit_conic_exponent(band, cfg);
        CHECK(fit.cone_n == doctest::Approx(cfg.n_lo).epsilon(1e-9));
        // monotone improvement toward the cylindrical limit
        auto ratio_at = [&](double n) {
            ProjectionParams pp;
            pp.cone_n = n;
            pp.central_meridian = fit.central_meridian;
            return distortion_report(
                       make_projection(ProjectionKind::conformal_conic, pp), band, 48)
                .ratio;
        };
        CHECK(ratio_at(0.05) < ratio_at(0.2));
        CHECK(ratio_at(0.2) < ratio_at(0.5));
    }

    SUBCASE("symmetric region pins the central meridian") {
        Region cap = make_cap({0.3, deg2rad(40.0)}, deg2rad(12.0), 256);
        ConicFit fit = fit_conic_exponent(cap);
        CHECK(fit.central_meridian == doctest::Approx(0.3).epsilon(1e-6));
    }

    SUBCASE("refinement never loses to the coarse scan") {
        Region quad = make_lonlat_quad(deg2rad(-15), deg2rad(25), deg2rad(20),
                                       deg2rad(45), 96, "q");
        ConicSearchConfig cfg;
        ConicFit fit = fit_conic_exponent(quad, cfg);
        for (int k = 0; k < cfg.coarse_samples; ++k) {
            double n = cfg.n_lo + (cfg.n_hi - cfg.n_lo) * k / (cfg.coarse_samples - 1);
            ProjectionParams pp;
            pp.cone_n = n;
            pp.central_meridian = fit.central_meridian;
            double r = distortion_report(
                           make_projection(ProjectionKind::conformal_conic, pp), quad,
                           cfg.report_resolution)
                           .ratio;
            CHECK(fit.ratio <= r + 1e-12);
        }
    }
}

TEST_CASE("optimizer determinism and map file round trip") {
    Region cap = make_cap({0.1, 0.2}, deg2rad(15.0), 512);
    SolverConfig one;
    one.threads = 1;
    SolverConfig four;
    four.threads = 4;
    OptimizedProjection a = optimize_projection(cap, 64, one);
    OptimizedProjection b = optimize_projection(cap, 64, four);
    REQUIRE(a.image.values.size() == b.image.values.size());
    CHECK(std::memcmp(a.image.values.data(), b.image.values.data(),
                      a.image.values.size() * sizeof(cplx)) == 0);
    CHECK(std::memcmp(a.m_field.values.data(), b.m_field.values.data(),
                      a.m_field.values.size() * sizeof(double)) == 0);

    const std::string path = "/tmp/chebmap_test_map.chebmap";
    write_map_file(path, a);
    MapFileData d = read_map_file(path);
    CHECK(d.nx == a.grid->nx);
    CHECK(d.ny == a.grid->ny);
    CHECK(d.h == a.grid->h);
    REQUIRE(d.image.size() == a.image.values.size());
    CHECK(std::memcmp(d.image.data(), a.image.values.data(),
                      d.image.size() * sizeof(cplx)) == 0);
    CHECK(std::memcmp(d.m.data(), a.m_field.values.data(),
                      d.m.size() * sizeof(double)) == 0);
}

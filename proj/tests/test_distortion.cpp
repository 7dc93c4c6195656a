#include <doctest.h>

#include <cmath>

#include "chebmap/distortion.hpp"
#include "test_support.hpp"

using namespace chebmap;

namespace {

ProjectionMap make_kind(ProjectionKind k) {
    ProjectionParams p;
    return make_projection(k, p);
}

}  // namespace

TEST_CASE("local_scales on the cylindrical kinds") {
    ProjectionMap mc = make_kind(ProjectionKind::mercator);

    DistortionSample eq = local_scales(mc, {0.0, 0.0});
    CHECK(eq.k_meridian == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(eq.k_parallel == doctest::Approx(1.0).epsilon(1e-8));

    DistortionSample s60 = local_scales(mc, {0.3, kPi / 3});
    CHECK(s60.m == doctest::Approx(2.0).epsilon(1e-6));  // sec 60 = 2
    CHECK(s60.tissot_a == doctest::Approx(s60.tissot_b).epsilon(1e-6));

    ProjectionMap eac = make_kind(ProjectionKind::equal_area_cylindrical);
    DistortionSample a60 = local_scales(eac, {0.1, kPi / 3});
    CHECK(a60.tissot_a * a60.tissot_b == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a60.k_parallel == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(a60.k_meridian == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::isnan(a60.m));  // direction-dependent scale has no single m

    CHECK_THROWS_AS(local_scales(mc, {0.0, 0.0}, 1e-9), StepUnderflow);
    CHECK_THROWS_AS(local_scales(mc, {0.0, 0.0}, 1e-2), StepUnderflow);
    ProjectionMap st = make_kind(ProjectionKind::stereographic);
    CHECK_THROWS_AS(local_scales(st, {kPi, 0.0}), SingularPoint);
}

TEST_CASE("magnification ratio from the analytic derivative") {
    ProjectionMap mc = make_kind(ProjectionKind::mercator);
    CHECK(magnification_conformal(mc, {0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(magnification_conformal(mc, {0.5, kPi / 3}) ==
          doctest::Approx(2.0).epsilon(1e-12));  // cosh u = sec lat

    ProjectionMap eac = make_kind(ProjectionKind::equal_area_cylindrical);
    CHECK_THROWS_AS(magnification_conformal(eac, {0.0, 0.0}), NotConformal);

    // cross-validation oracle: finite-difference tissot_a
    ProjectionParams pp;
    pp.cone_n = 0.6;
    ProjectionMap conic = make_projection(ProjectionKind::conformal_conic, pp);
    auto& gen = test::rng();
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        GeoPoint p = test::random_point(gen);
        double m = magnification_conformal(conic, p);
        DistortionSample s = local_scales(conic, p);
        worst = std::max(worst, std::abs(m - s.tissot_a) / s.tissot_a);
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("Euler classification") {
    Region band = make_lonlat_quad(deg2rad(-30), deg2rad(30), deg2rad(-25),
                                   deg2rad(25), 64, "band");
    auto cls_mc = classify_euler(make_kind(ProjectionKind::mercator), band);
    CHECK(cls_mc == std::set<EulerHypothesis>{EulerHypothesis::H1, EulerHypothesis::H2});

    auto cls_ea = classify_euler(make_kind(ProjectionKind::equal_area_cylindrical), band);
    CHECK(cls_ea == std::set<EulerHypothesis>{EulerHypothesis::H1, EulerHypothesis::H3});

    Region cap = make_cap({0.0, 0.0}, deg2rad(30.0), 256);
    auto cls_st = classify_euler(make_kind(ProjectionKind::stereographic), cap);
    CHECK(cls_st == std::set<EulerHypothesis>{EulerHypothesis::H2});

    CHECK_THROWS_AS(classify_euler(make_kind(ProjectionKind::mercator), band, 8),
                    BadParam);
}

TEST_CASE("distortion report") {
    SUBCASE("mercator on the equatorial band peaks at sec(20 deg)") {
        Region band = make_lonlat_quad(deg2rad(-40), deg2rad(40), deg2rad(-20),
                                       deg2rad(20), 128, "band20");
        DistortionReport rep =
            distortion_report(make_kind(ProjectionKind::mercator), band, 96);
        CHECK(rep.ratio == doctest::Approx(1.0 / std::cos(deg2rad(20)))
                               .epsilon(1e-4));
        CHECK(rep.m_min == doctest::Approx(1.0).epsilon(1e-4));
    }

    SUBCASE("near-point region has ratio near 1") {
        Region tiny = make_cap({0.2, 0.3}, deg2rad(0.5), 64);
        ProjectionParams pp;
        pp.center = {0.2, 0.3};
        DistortionReport rep = distortion_report(
            make_projection(ProjectionKind::stereographic, pp), tiny, 32);
        CHECK(rep.ratio > 1.0);
        CHECK(rep.ratio < 1.0001);
    }

    SUBCASE("stereographic on its own cap has constant boundary scale") {
        Region cap = make_cap({0.0, 0.0}, deg2rad(30.0), 512);
        ProjectionMap st = make_kind(ProjectionKind::stereographic);
        DistortionReport rep = distortion_report(st, cap, 64);
        const GridDomain& g = *rep.log_m.grid;
        double lo = 1e300, hi = -1e300;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.kind(i, j) == CellKind::boundary) {
                    lo = std::min(lo, rep.log_m.at(i, j));
                    hi = std::max(hi, rep.log_m.at(i, j));
                }
        CHECK(hi - lo < 1e-4);  // rotational symmetry, up to polygonization
        // the cap ratio of the tangent-plane stereographic is sec^2(r/2)
        double sec15 = 1.0 / std::cos(deg2rad(15.0));
        CHECK(rep.ratio == doctest::Approx(sec15 * sec15).epsilon(1e-4));
    }
}

TEST_CASE("scale invariance of ratio and classification") {
    Region quad = make_lonlat_quad(deg2rad(-20), deg2rad(20), deg2rad(25),
                                   deg2rad(55), 64, "quad");
    ProjectionMap base = make_kind(ProjectionKind::conformal_conic);
    ProjectionMap big = scaled(base, 2.5);
    DistortionReport ra = distortion_report(base, quad, 48);
    DistortionReport rb = distortion_report(big, quad, 48);
    CHECK(rb.ratio == doctest::Approx(ra.ratio).epsilon(1e-12));
    CHECK(rb.m_min == doctest::Approx(2.5 * ra.m_min).epsilon(1e-12));
    CHECK(rb.m_max == doctest::Approx(2.5 * ra.m_max).epsilon(1e-12));
    CHECK(ra.classification == rb.classification);
    CHECK(ra.classification == std::set<EulerHypothesis>{EulerHypothesis::H2});
}

TEST_CASE("no implemented projection preserves length ratios on a 30 deg cap") {
    // numeric form of the impossibility of a perfect map
    struct Case {
        ProjectionKind kind;
        GeoPoint center;
    };
    const Case cases[] = {
        {ProjectionKind::mercator, {0.0, 0.0}},
        {ProjectionKind::equal_area_cylindrical, {0.0, 0.0}},
        {ProjectionKind::stereographic, {0.0, 0.0}},
        {ProjectionKind::conformal_conic, {0.0, deg2rad(36.9)}},
        {ProjectionKind::lagrange_circle, {0.0, 0.0}},
        {ProjectionKind::delisle_conic, {0.0, deg2rad(50.0)}},
    };
    double least = 1e300;
    for (const Case& c : cases) {
        Region cap = make_cap(c.center, deg2rad(30.0), 256);
        ProjectionParams pp;
        pp.center = c.center;
        ProjectionMap map = make_projection(c.kind, pp);
        DistortionReport rep = distortion_report(map, cap, 48);
        CHECK_MESSAGE(rep.ratio > 1.001, map.name);
        least = std::min(least, rep.ratio);
    }
    // stereographic at its own cap is the best of the lot
    CHECK(least == doctest::Approx(std::pow(1.0 / std::cos(deg2rad(15.0)), 2))
                       .epsilon(1e-3));
}

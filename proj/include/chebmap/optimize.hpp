#pragma once

#include "chebmap/distortion.hpp"
#include "chebmap/laplace.hpp"

namespace chebmap {

// Distortion-minimizing conformal image of a region: the numerical map with
// constant magnification on the region boundary, built by solving the
// Dirichlet problem for log m in the Mercator plane.
struct OptimizedProjection {
    Region region;
    std::shared_ptr<const GridDomain> grid;
    ComplexField image;    // plane position per interior/boundary cell
    ScalarField m_field;   // magnification per cell
    double ratio{};        // max m / min m over the region
    double boundary_constancy{};  // max |log m - median log m| on boundary cells

    // bilinear interpolation of the image at a Mercator-plane point
    PlanePoint image_at(const PlanePoint& mercator_pt) const;

    // wraps the gridded map for rendering and generic evaluation
    ProjectionMap as_projection_map() const;
};

// Pipeline: boundary -> Mercator plane -> grid -> Dirichlet solve of
// log|f'| with boundary data -log cosh u -> harmonic conjugate ->
// f' = exp(h + i h~) -> line integration -> image; m = exp(h) cosh u.
OptimizedProjection optimize_projection(const Region& region, int resolution,
                                        const SolverConfig& solver = {});

// Max relative Tissot-axis disagreement of the gridded map, measured with
// grid-step central differences on fully interior cells.
double conformality_defect(const OptimizedProjection& opt);

struct ConicFit {
    double cone_n{};
    double central_meridian{};
    double center_lat{};  // tangent parallel of the fitted cone, asin(n)
    double ratio{};
};

struct ConicSearchConfig {
    double n_lo = 0.05;
    double n_hi = 1.0;
    int coarse_samples = 24;
    double rel_tol = 1e-4;
    int report_resolution = 48;
};

// Best conformal conic for the region: the distortion ratio of the family
// depends only on the cone constant (the scale parallel cancels and the
// central meridian just rotates the image), so the search is a coarse scan
// in n refined by golden section. The central meridian is pinned to the
// region centroid and center_lat reports the cone's tangent parallel.
ConicFit fit_conic_exponent(const Region& region,
                            const ConicSearchConfig& cfg = {});

}  // namespace chebmap

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "chebmap/geo.hpp"

namespace chebmap {

enum class CellKind : std::uint8_t { exterior, interior, boundary };

// Masked square-cell lattice in the Mercator (t, u) plane. Cell (i, j) has
// its center at (t_min + (i+0.5)h, u_min + (j+0.5)h). Boundary cells are the
// exterior cells 4-adjacent to the interior; their Dirichlet values are read
// at the nearest point of the continuous boundary curve, which halves the
// discretization error for curved regions.
struct GridDomain {
    double t_min{}, u_min{};
    double h{};
    int nx{}, ny{};
    std::vector<CellKind> mask;           // nx*ny, row-major (j*nx + i)
    std::vector<double> boundary_value;   // NaN unless set on a boundary cell
    std::vector<PlanePoint> nearest_pt;   // filled for boundary cells

    int idx(int i, int j) const { return j * nx + i; }
    bool in_range(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    CellKind kind(int i, int j) const { return mask[idx(i, j)]; }
    PlanePoint center(int i, int j) const {
        return {t_min + (i + 0.5) * h, u_min + (j + 0.5) * h};
    }
    double t_max() const { return t_min + nx * h; }
    double u_max() const { return u_min + ny * h; }

    int interior_count() const;
    int boundary_count() const;
    bool all_boundary_values_set() const;
};

// Real field over interior + boundary cells (NaN elsewhere).
struct ScalarField {
    std::shared_ptr<const GridDomain> grid;
    std::vector<double> values;

    double at(int i, int j) const { return values[grid->idx(i, j)]; }
    double& at(int i, int j) { return values[grid->idx(i, j)]; }
};

// Complex field over interior + boundary cells.
struct ComplexField {
    std::shared_ptr<const GridDomain> grid;
    std::vector<std::complex<double>> values;

    std::complex<double> at(int i, int j) const { return values[grid->idx(i, j)]; }
    std::complex<double>& at(int i, int j) { return values[grid->idx(i, j)]; }
};

ScalarField make_scalar_field(std::shared_ptr<const GridDomain> grid);
ComplexField make_complex_field(std::shared_ptr<const GridDomain> grid);

// Rasterizes a simple closed polyline (even-odd rule at cell centers) at
// `resolution` cells across its longest bounding-box side. Throws NotSimple
// for self-crossing input or holes, RegionTooThin when the interior pinches
// apart or vanishes.
std::shared_ptr<GridDomain> build_grid(const std::vector<PlanePoint>& polyline,
                                       int resolution);

// Assigns boundary_value = f(nearest boundary point) on every boundary cell.
template <typename F>
void set_boundary_values(GridDomain& g, F&& f) {
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.kind(i, j) == CellKind::boundary)
                g.boundary_value[g.idx(i, j)] = f(g.nearest_pt[g.idx(i, j)]);
}

}  // namespace chebmap

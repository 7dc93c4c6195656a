#pragma once

#include <complex>

#include "chebmap/grid.hpp"

namespace chebmap {

struct SolverConfig {
    double tol_res = 1e-10;  // residual target, relative to boundary-value range
    long max_iters = 0;      // 0 = auto from grid size
    double omega = 0.0;      // 0 = rectangle estimate
    int threads = 0;         // 0 = thread_budget()
};

// Solves the 5-point Dirichlet problem on the masked grid. Red-black SOR
// with a fixed sweep order; falls back to Gauss-Seidel if divergence is
// detected. Output is bitwise identical for any thread count. Throws
// NoConvergence (carrying the achieved residual) when the cap is hit.
ScalarField solve_dirichlet(std::shared_ptr<const GridDomain> grid,
                            const SolverConfig& cfg = {});

// Max 5-point residual |(sum of neighbors - 4v)/4| over interior cells.
double laplacian_residual(const ScalarField& field);

// Harmonic conjugate via trapezoid integration of the Cauchy-Riemann
// differential along the grid graph, zero at the anchor. The conjugate pairs
// with the input as real/imaginary parts of a function analytic in t + i*u.
// Throws NotHarmonic, PathInconsistency.
ScalarField harmonic_conjugate(const ScalarField& field, int anchor_i,
                               int anchor_j, double tol_res = 1e-10);

// Antiderivative of a discretely holomorphic field: trapezoid line
// integration over the grid graph from the anchor, where the result takes
// anchor_value. Throws PathInconsistency.
ComplexField integrate_holomorphic(const ComplexField& fprime, int anchor_i,
                                   int anchor_j,
                                   std::complex<double> anchor_value);

}  // namespace chebmap

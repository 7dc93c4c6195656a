#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "chebmap/geo.hpp"

namespace chebmap {

enum class SurfaceKind : std::uint8_t { plane, sphere };

enum class VertexStatus : std::uint8_t { ok, torn, out_of_range };

// Lattice of surface points with prescribed edge lengths: a_len along the
// i direction, c_len along j (equal for the square-thread net). Vertices are
// indexed over the window [-N, N]^2; torn vertices mark where the fixed-edge
// propagation has no solution.
struct ChebNet {
    SurfaceKind surface{SurfaceKind::plane};
    double curvature{};   // K; 0 for the plane, > 0 for the sphere
    double a_len{}, c_len{};
    double phi0{};
    int extent{};         // N

    // sphere: unit vectors (physical point = R * v, R = 1/sqrt(K));
    // plane: (x, y, 0)
    std::vector<Vec3> pos;
    std::vector<VertexStatus> status;

    int side() const { return 2 * extent + 1; }
    int vidx(int i, int j) const { return (j + extent) * side() + (i + extent); }
    bool in_window(int i, int j) const {
        return i >= -extent && i <= extent && j >= -extent && j <= extent;
    }
    bool is_ok(int i, int j) const {
        return in_window(i, j) && status[vidx(i, j)] == VertexStatus::ok;
    }
    double radius() const;  // sphere only

    // surface distance between two stored vertices
    double vertex_distance(int i0, int j0, int i1, int j1) const;
};

// Net angle phi(i, j) between the chords to the +i and +j neighbors, defined
// where all three vertices are ok (NaN elsewhere).
struct NetAngles {
    int extent{};
    std::vector<double> phi;

    int side() const { return 2 * extent + 1; }
    double at(int i, int j) const { return phi[(j + extent) * side() + (i + extent)]; }
    bool has(int i, int j) const;
};

struct SineGordonResult {
    double max_residual{};
    int i{}, j{};   // location of the max
    int cells{};    // number of evaluated plaquettes
};

// Square-thread net: two geodesic seeds through the base point crossing at
// phi0, edges of length h. Throws BadSeedAngle, StepTooLarge.
ChebNet build_net(SurfaceKind surface, double phi0, double h, int N,
                  double curvature = 1.0);

// Darboux's rectangle net: i edges of length a_len, j edges of length c_len.
// a_len == c_len reproduces build_net exactly.
ChebNet darboux_net(SurfaceKind surface, double phi0, double a_len, double c_len,
                    int N, double curvature = 1.0);

NetAngles net_angles(const ChebNet& net);

// Angle at one vertex; throws MissingNeighbor if a needed vertex is not ok.
double net_angle_at(const ChebNet& net, int i, int j);

// Max |D_uv phi + K sin(mean phi)| over interior plaquettes, where
// D_uv phi = (phi(i+1,j+1) - phi(i+1,j) - phi(i,j+1) + phi(i,j)) / (a*c).
// Throws NetTooSmall when no plaquette is available.
SineGordonResult sine_gordon_residual(const ChebNet& net);

// Max deviation of constructed edge lengths from their prescription.
double edge_length_check(const ChebNet& net);

// CSV export: i,j,x,y[,z],phi,status with a header row.
void write_net_csv(const ChebNet& net, std::ostream& os);

}  // namespace chebmap

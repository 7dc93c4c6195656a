#pragma once

#include <string>

#include "chebmap/optimize.hpp"

namespace chebmap {

// Versioned binary container for an optimized map. Layout:
//   bytes 0..7   magic "CHEBMAP1"
//   5 x f64      t_min, t_max, u_min, u_max, h   (little-endian)
//   nx*ny x 2f64 image, row-major complex pairs  (NaN outside the region)
//   nx*ny x f64  magnification values
// with nx = round((t_max - t_min)/h), ny = round((u_max - u_min)/h).
struct MapFileData {
    double t_min{}, t_max{}, u_min{}, u_max{}, h{};
    int nx{}, ny{};
    std::vector<std::complex<double>> image;
    std::vector<double> m;
};

void write_map_file(const std::string& path, const OptimizedProjection& opt);
MapFileData read_map_file(const std::string& path);

}  // namespace chebmap

#include "chebmap/map_file.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace chebmap {

static_assert(std::endian::native == std::endian::little,
              "CHEBMAP1 writer assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'H', 'E', 'B', 'M', 'A', 'P', '1'};

void put_f64(std::ostream& os, double v) {
    char buf[8];
    std::memcpy(buf, &v, 8);
    os.write(buf, 8);
}

double get_f64(std::istream& is) {
    char buf[8];
    is.read(buf, 8);
    double v;
    std::memcpy(&v, buf, 8);
    return v;
}

}  // namespace

void write_map_file(const std::string& path, const OptimizedProjection& opt) {
    const GridDomain& g = *opt.grid;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kMagic, 8);
    put_f64(os, g.t_min);
    put_f64(os, g.t_max());
    put_f64(os, g.u_min);
    put_f64(os, g.u_max());
    put_f64(os, g.h);
    for (const std::complex<double>& w : opt.image.values) {
        put_f64(os, w.real());
        put_f64(os, w.imag());
    }
    for (double v : opt.m_field.values) put_f64(os, v);
    if (!os) throw IoError("write failed for " + path);
}

MapFileData read_map_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw IoError(path + " is not a CHEBMAP1 file");
    MapFileData d;
    d.t_min = get_f64(is);
    d.t_max = get_f64(is);
    d.u_min = get_f64(is);
    d.u_max = get_f64(is);
    d.h = get_f64(is);
    if (!is || !(d.h > 0.0)) throw IoError(path + ": bad header");
    d.nx = static_cast<int>(std::lround((d.t_max - d.t_min) / d.h));
    d.ny = static_cast<int>(std::lround((d.u_max - d.u_min) / d.h));
    if (d.nx <= 0 || d.ny <= 0 || static_cast<long>(d.nx) * d.ny > (1L << 28))
        throw IoError(path + ": implausible grid dimensions");
    const long cells = static_cast<long>(d.nx) * d.ny;
    d.image.resize(cells);
    for (long k = 0; k < cells; ++k) {
        double re = get_f64(is);
        double im = get_f64(is);
        d.image[k] = {re, im};
    }
    d.m.resize(cells);
    for (long k = 0; k < cells; ++k) d.m[k] = get_f64(is);
    if (!is) throw IoError(path + ": truncated body");
    return d;
}

}  // namespace chebmap

#include "chebmap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace chebmap {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void SvgWriter::add_path(const std::vector<std::vector<PlanePoint>>& subpaths,
                         const std::string& stroke, double width, bool closed,
                         const std::string& id) {
    paths_.push_back({subpaths, stroke, width, closed, id});
}

void SvgWriter::add_polyline(const std::vector<PlanePoint>& pts,
                             const std::string& stroke, double width, bool closed,
                             const std::string& id) {
    add_path({pts}, stroke, width, closed, id);
}

void SvgWriter::add_circle(const PlanePoint& center, double r,
                           const std::string& fill, const std::string& id) {
    circles_.push_back({center, r, fill, id});
}

void SvgWriter::add_legend(double v_min, double v_max, const std::string& title) {
    legend_ = true;
    legend_min_ = v_min;
    legend_max_ = v_max;
    legend_title_ = title;
}

std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    // blue -> cyan -> green -> yellow -> red
    const double stops[5][3] = {{40, 60, 200}, {40, 170, 220}, {60, 180, 90},
                                {230, 200, 50}, {210, 50, 40}};
    const double x = t * 4.0;
    const int k = std::min(static_cast<int>(x), 3);
    const double f = x - k;
    char buf[32];
    std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)",
                  static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

void SvgWriter::write(std::ostream& os) const {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto grow = [&](const PlanePoint& p) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, -p.y);  // y flipped: north up
        y1 = std::max(y1, -p.y);
    };
    for (const auto& pe : paths_)
        for (const auto& sp : pe.subpaths)
            for (const auto& p : sp) grow(p);
    for (const auto& ce : circles_) {
        grow({ce.c.x - ce.r, ce.c.y - ce.r});
        grow({ce.c.x + ce.r, ce.c.y + ce.r});
    }
    if (x1 < x0) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    const double mx = 0.05 * std::max(x1 - x0, 1e-9);
    const double my = 0.05 * std::max(y1 - y0, 1e-9);
    x0 -= mx;
    x1 += mx;
    y0 -= my;
    y1 += my;
    const double w = x1 - x0, h = y1 - y0;
    const double stroke_unit = std::max(w, h) / 600.0;

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(x0) << " "
       << fmt(y0) << " " << fmt(w) << " " << fmt(h) << "\">\n";

    for (const auto& ce : circles_)
        os << "  <circle cx=\"" << fmt(ce.c.x) << "\" cy=\"" << fmt(-ce.c.y)
           << "\" r=\"" << fmt(ce.r) << "\" fill=\"" << ce.fill << "\""
           << (ce.id.empty() ? "" : " id=\"" + ce.id + "\"") << "/>\n";

    for (const auto& pe : paths_) {
        os << "  <path";
        if (!pe.id.empty()) os << " id=\"" << pe.id << "\"";
        os << " fill=\"none\" stroke=\"" << pe.stroke << "\" stroke-width=\""
           << fmt(pe.width * stroke_unit) << "\" d=\"";
        for (const auto& sp : pe.subpaths) {
            if (sp.size() < 2) continue;
            for (size_t k = 0; k < sp.size(); ++k)
                os << (k == 0 ? "M" : "L") << fmt(sp[k].x) << " " << fmt(-sp[k].y);
            if (pe.closed) os << "Z";
        }
        os << "\"/>\n";
    }

    if (legend_) {
        const int steps = 12;
        const double lw = 0.30 * w, lh = 0.03 * h;
        const double lx = x0 + 0.05 * w, ly = y0 + 0.05 * h;
        for (int k = 0; k < steps; ++k) {
            os << "  <rect x=\"" << fmt(lx + lw * k / steps) << "\" y=\"" << fmt(ly)
               << "\" width=\"" << fmt(lw / steps) << "\" height=\"" << fmt(lh)
               << "\" fill=\"" << ramp_color((k + 0.5) / steps) << "\"/>\n";
        }
        const double fs = 0.035 * std::max(w, h);
        os << "  <text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly + lh + 1.2 * fs)
           << "\" font-size=\"" << fmt(fs) << "\">" << legend_title_ << ": "
           << fmt(legend_min_) << " .. " << fmt(legend_max_) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace chebmap

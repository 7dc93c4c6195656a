#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chebmap/geo.hpp"

namespace chebmap {

// Minimal SVG assembler for map output. Coordinates are given in map units;
// the writer flips the y axis (north up) and fits the viewBox to the content
// with a 5% margin.
class SvgWriter {
public:
    // one path element; subpaths allow gaps (e.g. clipped graticule lines)
    void add_path(const std::vector<std::vector<PlanePoint>>& subpaths,
                  const std::string& stroke, double width, bool closed,
                  const std::string& id = "");
    void add_polyline(const std::vector<PlanePoint>& pts, const std::string& stroke,
                      double width, bool closed, const std::string& id = "");
    void add_circle(const PlanePoint& center, double r, const std::string& fill,
                    const std::string& id = "");
    // legend block with a color ramp; anchored at the top-left of the drawing
    void add_legend(double v_min, double v_max, const std::string& title);
    void write(std::ostream& os) const;

private:
    struct PathElem {
        std::vector<std::vector<PlanePoint>> subpaths;
        std::string stroke;
        double width;
        bool closed;
        std::string id;
    };
    struct CircleElem {
        PlanePoint c;
        double r;
        std::string fill;
        std::string id;
    };
    std::vector<PathElem> paths_;
    std::vector<CircleElem> circles_;
    bool legend_ = false;
    double legend_min_ = 0.0, legend_max_ = 0.0;
    std::string legend_title_;
};

// 5-stop blue->red ramp for scalar legends, t in [0, 1].
std::string ramp_color(double t);

}  // namespace chebmap

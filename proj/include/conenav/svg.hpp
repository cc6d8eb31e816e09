#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace conenav {

/// Minimal SVG writer: fixed-precision paths, circles and rectangles only,
/// no external assets, so emitted files are byte-stable across runs and
/// suitable for golden-file comparisons. World coordinates are mapped with
/// +y up into a viewBox chosen at construction.
class SvgWriter {
  public:
    SvgWriter(std::ostream& out, double xmin, double ymin, double xmax, double ymax, double pixels_per_unit = 60.0);
    ~SvgWriter();

    SvgWriter(const SvgWriter&) = delete;
    SvgWriter& operator=(const SvgWriter&) = delete;

    void circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke,
                double stroke_width = 0.0);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width);
    void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke, double width);
    void rect(double x, double y, double w, double h, const std::string& fill);
    /// Arrow from (x,y) along (dx,dy), with a head sized to the shaft.
    void arrow(double x, double y, double dx, double dy, const std::string& stroke, double width);

    double px(double x) const;
    double py(double y) const;

  private:
    std::ostream& out_;
    double xmin_, ymin_, xmax_, ymax_, scale_;
};

std::string format_fixed(double value, int digits = 3);

}  // namespace conenav

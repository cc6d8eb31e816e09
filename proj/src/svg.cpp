#include "conenav/svg.hpp"

#include <cmath>
#include <cstdio>

namespace conenav {

std::string format_fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

SvgWriter::SvgWriter(std::ostream& out, double xmin, double ymin, double xmax, double ymax, double pixels_per_unit)
    : out_(out), xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax), scale_(pixels_per_unit) {
    const double w = (xmax_ - xmin_) * scale_;
    const double h = (ymax_ - ymin_) * scale_;
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(w, 0) << "\" height=\""
         << format_fixed(h, 0) << "\" viewBox=\"0 0 " << format_fixed(w, 0) << " " << format_fixed(h, 0)
         << "\">\n";
    out_ << "<rect x=\"0\" y=\"0\" width=\"" << format_fixed(w, 0) << "\" height=\"" << format_fixed(h, 0)
         << "\" fill=\"white\"/>\n";
}

SvgWriter::~SvgWriter() { out_ << "</svg>\n"; }

double SvgWriter::px(double x) const { return (x - xmin_) * scale_; }
double SvgWriter::py(double y) const { return (ymax_ - y) * scale_; }

void SvgWriter::circle(double cx, double cy, double r, const std::string& fill, const std::string& stroke,
                       double stroke_width) {
    out_ << "<circle cx=\"" << format_fixed(px(cx)) << "\" cy=\"" << format_fixed(py(cy)) << "\" r=\""
         << format_fixed(r * scale_) << "\" fill=\"" << fill << "\"";
    if (!stroke.empty()) {
        out_ << " stroke=\"" << stroke << "\" stroke-width=\"" << format_fixed(stroke_width * scale_) << "\"";
    }
    out_ << "/>\n";
}

void SvgWriter::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width) {
    out_ << "<line x1=\"" << format_fixed(px(x1)) << "\" y1=\"" << format_fixed(py(y1)) << "\" x2=\""
         << format_fixed(px(x2)) << "\" y2=\"" << format_fixed(py(y2)) << "\" stroke=\"" << stroke
         << "\" stroke-width=\"" << format_fixed(width * scale_) << "\"/>\n";
}

void SvgWriter::polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                         double width) {
    out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << format_fixed(width * scale_)
         << "\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) out_ << " ";
        out_ << format_fixed(px(points[i].first)) << "," << format_fixed(py(points[i].second));
    }
    out_ << "\"/>\n";
}

void SvgWriter::rect(double x, double y, double w, double h, const std::string& fill) {
    out_ << "<rect x=\"" << format_fixed(px(x)) << "\" y=\"" << format_fixed(py(y + h)) << "\" width=\""
         << format_fixed(w * scale_) << "\" height=\"" << format_fixed(h * scale_) << "\" fill=\"" << fill
         << "\"/>\n";
}

void SvgWriter::arrow(double x, double y, double dx, double dy, const std::string& stroke, double width) {
    const double len = std::hypot(dx, dy);
    if (len <= 0.0) return;
    const double tip_x = x + dx, tip_y = y + dy;
    line(x, y, tip_x, tip_y, stroke, width);
    const double head = 0.25 * len;
    const double ux = dx / len, uy = dy / len;
    line(tip_x, tip_y, tip_x - head * (ux + 0.5 * uy), tip_y - head * (uy - 0.5 * ux), stroke, width);
    line(tip_x, tip_y, tip_x - head * (ux - 0.5 * uy), tip_y - head * (uy + 0.5 * ux), stroke, width);
}

}  // namespace conenav

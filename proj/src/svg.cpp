#include "mobgossip/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mobgossip {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 32.0;
constexpr double kMarginBottom = 48.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
       << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' '
       << num(kHeight) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const double x0 = kMarginLeft;
    const double x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom;
    const double y1 = kMarginTop;

    os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
       << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
       << "\" y2=\"" << num(y1) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 12.0)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << spec.x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << num((y0 + y1) / 2)
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << num((y0 + y1) / 2) << ")\">" << spec.y_label << "</text>\n";
    if (!spec.title.empty()) {
        os << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" "
           << "font-size=\"14\">" << spec.title << "</text>\n";
    }

    // Collect plottable points (log axes drop non-positive values).
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : spec.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) {
            continue;
        }
        if ((spec.log_x && x <= 0.0) || (spec.log_y && y <= 0.0)) {
            continue;
        }
        pts.emplace_back(spec.log_x ? std::log10(x) : x, spec.log_y ? std::log10(y) : y);
    }

    if (!pts.empty()) {
        double min_x = std::numeric_limits<double>::infinity();
        double max_x = -min_x;
        double min_y = min_x;
        double max_y = -min_x;
        for (auto [x, y] : pts) {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
        if (max_x == min_x) {
            min_x -= 1.0;
            max_x += 1.0;
        }
        if (max_y == min_y) {
            min_y -= 1.0;
            max_y += 1.0;
        }
        const auto map_x = [&](double x) {
            return x0 + (x - min_x) / (max_x - min_x) * (x1 - x0);
        };
        const auto map_y = [&](double y) {
            return y0 - (y - min_y) / (max_y - min_y) * (y0 - y1);
        };
        const auto tick_text = [&](double v, bool log_axis) {
            return num(log_axis ? std::pow(10.0, v) : v);
        };
        for (int i = 0; i <= 4; ++i) {
            const double fx = min_x + (max_x - min_x) * i / 4.0;
            const double fy = min_y + (max_y - min_y) * i / 4.0;
            os << "<text x=\"" << num(map_x(fx)) << "\" y=\"" << num(y0 + 16.0)
               << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_text(fx, spec.log_x)
               << "</text>\n";
            os << "<text x=\"" << num(x0 - 6.0) << "\" y=\"" << num(map_y(fy) + 4.0)
               << "\" text-anchor=\"end\" font-size=\"11\">" << tick_text(fy, spec.log_y)
               << "</text>\n";
        }
        for (auto [x, y] : pts) {
            os << "<circle cx=\"" << num(map_x(x)) << "\" cy=\"" << num(map_y(y))
               << "\" r=\"3\" fill=\"steelblue\"/>\n";
        }
    }

    os << "</svg>\n";
    return os.str();
}

}  // namespace mobgossip

#pragma once

#include <string>
#include <vector>

namespace mobgossip {

// Static scatter plot with optional log-log axes. Output is plain SVG text
// and byte-deterministic for fixed input.
struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<std::pair<double, double>> points;
};

std::string render_svg(const PlotSpec& spec);

}  // namespace mobgossip

#ifndef FFINV_SVG_HPP
#define FFINV_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace ffinv {

struct SvgCurve {
    std::string label;
    std::vector<std::pair<double, double>> points;
    std::string color = "#3465a4";
};

struct SvgPanel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgCurve> curves;
    bool log10_y = false;
};

/// Self-contained SVG document with one or more stacked line-plot panels.
std::string render_svg(const std::vector<SvgPanel>& panels, int width = 720,
                       int panel_height = 320);

void write_svg(const std::string& path, const std::vector<SvgPanel>& panels);

} // namespace ffinv

#endif

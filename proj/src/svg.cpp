#include "ffinv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ffinv/errors.hpp"

namespace ffinv {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const std::vector<SvgPanel>& panels, int width, int panel_height)
{
    const int margin_l = 64, margin_r = 16, margin_t = 32, margin_b = 40;
    const int total_h = panel_height * static_cast<int>(panels.size());
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << total_h << "\" viewBox=\"0 0 " << width << " " << total_h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const SvgPanel& panel = panels[pi];
        const double oy = static_cast<double>(pi) * panel_height;
        const double px0 = margin_l, px1 = width - margin_r;
        const double py0 = oy + margin_t, py1 = oy + panel_height - margin_b;

        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        auto yval = [&](double y) {
            return panel.log10_y ? std::log10(std::max(y, 1e-300)) : y;
        };
        for (const auto& c : panel.curves)
            for (auto [x, y] : c.points) {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, yval(y));
                ymax = std::max(ymax, yval(y));
            }
        if (!(xmin < xmax)) {
            xmin -= 0.5;
            xmax += 0.5;
        }
        if (!(ymin < ymax)) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double ypad = 0.05 * (ymax - ymin);
        ymin -= ypad;
        ymax += ypad;

        auto X = [&](double x) { return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0); };
        auto Y = [&](double y) { return py1 - (yval(y) - ymin) / (ymax - ymin) * (py1 - py0); };

        out << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << oy + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
            << escape(panel.title) << "</text>\n";
        out << "<rect x=\"" << px0 << "\" y=\"" << py0 << "\" width=\"" << px1 - px0
            << "\" height=\"" << py1 - py0 << "\" fill=\"none\" stroke=\"#555\"/>\n";

        for (int tick = 0; tick <= 4; ++tick) {
            const double fx = xmin + (xmax - xmin) * tick / 4;
            const double fy = ymin + (ymax - ymin) * tick / 4;
            out << "<line x1=\"" << X(fx) << "\" y1=\"" << py1 << "\" x2=\"" << X(fx)
                << "\" y2=\"" << py1 + 4 << "\" stroke=\"#555\"/>\n"
                << "<text x=\"" << X(fx) << "\" y=\"" << py1 + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
                << fmt(fx) << "</text>\n";
            const double raw = panel.log10_y ? std::pow(10.0, fy) : fy;
            out << "<line x1=\"" << px0 - 4 << "\" y1=\"" << py1 - (fy - ymin) / (ymax - ymin) * (py1 - py0)
                << "\" x2=\"" << px0 << "\" y2=\"" << py1 - (fy - ymin) / (ymax - ymin) * (py1 - py0)
                << "\" stroke=\"#555\"/>\n"
                << "<text x=\"" << px0 - 8 << "\" y=\""
                << py1 - (fy - ymin) / (ymax - ymin) * (py1 - py0) + 3
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
                << fmt(raw) << "</text>\n";
        }
        out << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << py1 + 32
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << escape(panel.x_label) << "</text>\n";
        out << "<text x=\"" << oy + 14 << "\" y=\"" << (py0 + py1) / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
               "transform=\"rotate(-90 14 "
            << (py0 + py1) / 2 << ")\">" << escape(panel.y_label) << "</text>\n";

        for (const auto& c : panel.curves) {
            if (c.points.empty())
                continue;
            out << "<polyline fill=\"none\" stroke=\"" << c.color
                << "\" stroke-width=\"1\" stroke-opacity=\"0.8\" points=\"";
            for (auto [x, y] : c.points)
                out << fmt(X(x)) << "," << fmt(Y(y)) << " ";
            out << "\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

void write_svg(const std::string& path, const std::vector<SvgPanel>& panels)
{
    std::ofstream out(path);
    if (!out)
        throw NumericError("svg: cannot write " + path);
    out << render_svg(panels);
}

} // namespace ffinv

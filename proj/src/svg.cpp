#include "wkd/svg.hpp"

#include <algorithm>
#include <cmath>

#include "wkd/io.hpp"

namespace wkd {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string svg_field_threshold(const ScalarField2D& field, double level,
                                const PointCloud* overlay) {
    const int nx = field.nx();
    const int ny = field.ny();
    const double width = 720.0;
    const double scale = width / (field.box().xmax - field.box().xmin);
    const double height = (field.box().ymax - field.box().ymin) * scale;
    auto px = [&](double x) { return (x - field.box().xmin) * scale; };
    auto py = [&](double y) { return height - (y - field.box().ymin) * scale; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Merge horizontal runs of sublevel cells into single rects.
    const double cw = field.dx() * scale;
    const double ch = field.dy() * scale;
    for (int iy = 0; iy < ny; ++iy) {
        int run_start = -1;
        for (int ix = 0; ix <= nx; ++ix) {
            const bool in = ix < nx && field.value(ix, iy) <= level;
            if (in && run_start < 0) run_start = ix;
            if (!in && run_start >= 0) {
                const double x = px(field.cell_x(run_start) - 0.5 * field.dx());
                const double y = py(field.cell_y(iy) + 0.5 * field.dy());
                svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
                       num((ix - run_start) * cw) + "\" height=\"" + num(ch) +
                       "\" fill=\"#b0b0b0\"/>\n";
                run_start = -1;
            }
        }
    }

    if (overlay != nullptr && overlay->dim() == 2) {
        for (int i = 0; i < overlay->size(); ++i) {
            auto p = overlay->point(i);
            svg += "<circle cx=\"" + num(px(p[0])) + "\" cy=\"" + num(py(p[1])) +
                   "\" r=\"1.2\" fill=\"#c62828\" fill-opacity=\"0.6\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string svg_vineyard(const Vineyard& vineyard, int max_ranks) {
    const double width = 720.0;
    const double height = 480.0;
    const double margin = 48.0;

    double m0_lo = std::numeric_limits<double>::infinity();
    double m0_hi = 0.0;
    double pers_hi = 0.0;
    size_t ranks = 0;
    for (const auto& e : vineyard.entries) {
        m0_lo = std::min(m0_lo, e.m0);
        m0_hi = std::max(m0_hi, e.m0);
        const auto pers = e.diagram.persistences(1);
        ranks = std::max(ranks, pers.size());
        for (double p : pers) pers_hi = std::max(pers_hi, p);
    }
    ranks = std::min(ranks, static_cast<size_t>(max_ranks));
    if (vineyard.entries.empty() || pers_hi <= 0.0 || !(m0_hi > m0_lo)) {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\"/>\n";
    }

    auto px = [&](double m0) {
        return margin + (m0 - m0_lo) / (m0_hi - m0_lo) * (width - 2 * margin);
    };
    auto py = [&](double pers) {
        return height - margin - pers / pers_hi * (height - 2 * margin);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + num(margin) + "\" y1=\"" + num(height - margin) + "\" x2=\"" +
           num(width - margin) + "\" y2=\"" + num(height - margin) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(margin) + "\" y1=\"" + num(margin) + "\" x2=\"" + num(margin) +
           "\" y2=\"" + num(height - margin) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(width / 2) + "\" y=\"" + num(height - 12.0) +
           "\" font-size=\"13\" text-anchor=\"middle\">m0</text>\n";
    svg += "<text x=\"14\" y=\"" + num(height / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           num(height / 2) + ")\">persistence</text>\n";

    const char* palette[] = {"#1565c0", "#c62828", "#2e7d32", "#f9a825",
                             "#6a1b9a", "#00838f", "#ef6c00", "#455a64"};
    for (size_t rank = 0; rank < ranks; ++rank) {
        std::string points;
        for (const auto& e : vineyard.entries) {
            const auto pers = e.diagram.persistences(1);
            if (rank >= pers.size()) continue;
            points += num(px(e.m0)) + "," + num(py(pers[rank])) + " ";
        }
        if (points.empty()) continue;
        svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
               palette[rank % 8] + "\" stroke-width=\"" + (rank < 2 ? "2.2" : "1.1") + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace wkd

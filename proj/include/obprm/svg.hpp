#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "obprm/format.hpp"
#include "obprm/geometry.hpp"

namespace obprm {

// 2D scene: obstacle outlines as closed polylines, sampled nodes as dots.
// Rendering is deterministic: identical scenes produce identical bytes.
struct SvgScene {
    std::vector<std::vector<Point>> outlines;
    std::vector<Point> markers;
    std::string legend;

    void add_outline(std::vector<Point> ring) { outlines.push_back(std::move(ring)); }
    void add_marker(Point p) { markers.push_back(std::move(p)); }

    static SvgScene for_set(const PolyconvexSet& s) {
        if (s.dimension() != 2) throw std::domain_error("SvgScene: 2D sets only");
        SvgScene scene;
        for (const auto& part : s.parts()) {
            std::vector<Point> ring;
            for (int vi : part.ring()) ring.push_back(part.vertices()[vi]);
            scene.add_outline(std::move(ring));
        }
        return scene;
    }
};

inline std::string render_svg(const SvgScene& scene) {
    const double canvas = 640.0;
    const double pad = 32.0;

    double lo_x = 0.0, lo_y = 0.0, hi_x = 1.0, hi_y = 1.0;
    bool first = true;
    auto grow = [&](const Point& p) {
        if (first) {
            lo_x = hi_x = p[0];
            lo_y = hi_y = p[1];
            first = false;
        } else {
            lo_x = std::min(lo_x, p[0]);
            hi_x = std::max(hi_x, p[0]);
            lo_y = std::min(lo_y, p[1]);
            hi_y = std::max(hi_y, p[1]);
        }
    };
    for (const auto& ring : scene.outlines)
        for (const auto& p : ring) grow(p);
    for (const auto& p : scene.markers) grow(p);

    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    double scale = (canvas - 2.0 * pad) / span;
    auto tx = [&](const Point& p) { return pad + (p[0] - lo_x) * scale; };
    auto ty = [&](const Point& p) { return canvas - pad - (p[1] - lo_y) * scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_g12(canvas) << "\" height=\""
        << fmt_g12(canvas) << "\" viewBox=\"0 0 " << fmt_g12(canvas) << " " << fmt_g12(canvas)
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& ring : scene.outlines) {
        out << "<polygon fill=\"#d9d9d9\" stroke=\"#333333\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ring.size(); ++i) {
            if (i) out << " ";
            out << fmt_g12(tx(ring[i])) << "," << fmt_g12(ty(ring[i]));
        }
        out << "\"/>\n";
    }
    for (const auto& p : scene.markers)
        out << "<circle cx=\"" << fmt_g12(tx(p)) << "\" cy=\"" << fmt_g12(ty(p))
            << "\" r=\"3\" fill=\"#c0392b\"/>\n";
    if (!scene.legend.empty())
        out << "<text x=\"" << fmt_g12(pad) << "\" y=\"" << fmt_g12(0.75 * pad)
            << "\" font-family=\"monospace\" font-size=\"14\">" << scene.legend << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

inline void write_svg(const SvgScene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write SVG file: " + path);
    out << render_svg(scene);
}

}  // namespace obprm

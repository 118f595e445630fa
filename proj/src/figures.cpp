#include "rbhp/figures.hpp"

#include <cstdio>

#include "rbhp/csv.hpp"

namespace rbhp {

namespace {

std::string csv_twin_path(const std::string& svg_path) {
    const auto dot = svg_path.rfind('.');
    if (dot == std::string::npos || svg_path.substr(dot) != ".svg") return svg_path + ".csv";
    return svg_path.substr(0, dot) + ".csv";
}

std::string leaf_color(int k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "hsl(%d,62%%,%d%%)", (k * 47) % 360, 55 + (k * 13) % 25);
    return buf;
}

struct Frame {
    double x0, y0, w, h;  // parameter-space window (free axes)
    int ax, ay;           // free axis indices
    double px = 760.0, py;
    double pixel_x(double x) const { return 20.0 + (x - x0) / w * px; }
    double pixel_y(double y) const { return 20.0 + (y0 + h - y) / h * py; }  // flip y
};

Frame make_frame(const ParamBox& box) {
    const auto axes = box.free_axes();
    Frame f{};
    f.ax = axes[0];
    f.ay = axes[1];
    f.x0 = box.lower()[static_cast<std::size_t>(f.ax)];
    f.y0 = box.lower()[static_cast<std::size_t>(f.ay)];
    f.w = box.side_length(f.ax);
    f.h = box.side_length(f.ay);
    f.py = f.px * f.h / f.w;
    return f;
}

std::string svg_open(const Frame& f) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  f.px + 40.0, f.py + 40.0, f.px + 40.0, f.py + 40.0);
    return buf;
}

}  // namespace

FigureResult export_partition_figure(const RBLibrary& library, const std::string& svg_path) {
    FigureResult out;
    out.csv_path = csv_twin_path(svg_path);
    write_text_file(out.csv_path, partition_csv(library));

    if (library.root().box.effective_dim() != 2) return out;  // CSV only for d = 1

    const Frame f = make_frame(library.root().box);
    std::string svg = svg_open(f);
    char buf[256];
    for (int k = 0; k < library.num_leaves(); ++k) {
        const ParamBox& b = library.leaf(k).box;
        const double x = f.pixel_x(b.lower()[static_cast<std::size_t>(f.ax)]);
        const double y = f.pixel_y(b.upper()[static_cast<std::size_t>(f.ay)]);
        const double w = b.side_length(f.ax) / f.w * f.px;
        const double h = b.side_length(f.ay) / f.h * f.py;
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\" "
                      "stroke=\"black\" stroke-width=\"1\"/>\n",
                      x, y, w, h, leaf_color(k).c_str());
        svg += buf;
    }
    svg += "</svg>\n";
    write_text_file(svg_path, svg);
    out.wrote_svg = true;
    out.svg_path = svg_path;
    return out;
}

FigureResult export_partition_figure(const AnchorTree& tree, const std::string& svg_path, int raster) {
    FigureResult out;
    out.csv_path = csv_twin_path(svg_path);
    write_text_file(out.csv_path, proximity_partition_csv(tree));

    if (tree.root_box().effective_dim() != 2) return out;

    const Frame f = make_frame(tree.root_box());
    std::string svg = svg_open(f);
    char buf[256];
    const double cw = f.px / raster, ch = f.py / raster;
    Param mu = tree.root_box().center();
    for (int j = 0; j < raster; ++j) {
        for (int i = 0; i < raster; ++i) {
            mu[static_cast<std::size_t>(f.ax)] = f.x0 + (i + 0.5) / raster * f.w;
            mu[static_cast<std::size_t>(f.ay)] = f.y0 + (j + 0.5) / raster * f.h;
            const int k = tree.locate(mu);
            const double x = f.pixel_x(mu[static_cast<std::size_t>(f.ax)]) - 0.5 * cw;
            const double y = f.pixel_y(mu[static_cast<std::size_t>(f.ay)]) - 0.5 * ch;
            std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                          x, y, cw + 0.05, ch + 0.05, leaf_color(k).c_str());
            svg += buf;
        }
    }
    svg += "</svg>\n";
    write_text_file(svg_path, svg);
    out.wrote_svg = true;
    out.svg_path = svg_path;
    return out;
}

}  // namespace rbhp

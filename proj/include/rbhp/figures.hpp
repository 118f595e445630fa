#pragma once

#include <string>

#include "rbhp/proximity.hpp"
#include "rbhp/rb_library.hpp"

namespace rbhp {

struct FigureResult {
    bool wrote_svg = false;
    std::string svg_path;
    std::string csv_path;
};

/// Writes an SVG of the parameter-domain partition (leaf rectangles for the
/// tree, a rasterized nearest-anchor map for the proximity baseline) plus a
/// CSV twin. One-dimensional effective domains get the CSV only.
FigureResult export_partition_figure(const RBLibrary& library, const std::string& svg_path);
FigureResult export_partition_figure(const AnchorTree& tree, const std::string& svg_path, int raster = 200);

}  // namespace rbhp

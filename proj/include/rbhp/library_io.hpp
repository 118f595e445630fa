#pragma once

#include <string>

#include "rbhp/proximity.hpp"
#include "rbhp/rb_library.hpp"

namespace rbhp {

struct BadLibraryFile : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LibraryFileStats {
    std::uint64_t total_bytes = 0;
    std::uint64_t geometry_bytes = 0;  // partition description only (ex. RB payload)
};

/// Binary library file, little-endian:
///   magic "RBHP", version, problem descriptor, domain, Qa/Qf, config echo,
///   K, then per-leaf records (bit path, box bounds, basis size, reduced
///   operators and Riesz Gram blocks, row-major), trailing FNV-1a checksum.
/// Stores online data only; truth-space arrays never hit the file. Internal
/// split axes are re-derived on load from the deterministic longest-edge
/// rule and checked against the stored leaf boxes.
LibraryFileStats save_library(const RBLibrary& library, const std::string& path);
RBLibrary load_library(const std::string& path);

/// Proximity-tree sibling format (magic "RBPX"): each leaf stores its full
/// anchor chain (the pair of candidate anchors at every split along its
/// path), which is what makes this partition description grow with depth.
LibraryFileStats save_proximity_library(const AnchorTree& tree, const std::string& path);
AnchorTree load_proximity_library(const std::string& path);

}  // namespace rbhp

#pragma once

#include <map>
#include <string>
#include <vector>

namespace rbhp {

using Param = std::vector<double>;

/// Axis-aligned tensor-product parameter subdomain. Frozen coordinates pin a
/// coordinate to a single value (lower == upper) so that degenerate domains
/// such as {0} x [0,10] share the code path of full boxes.
class ParamBox {
public:
    ParamBox() = default;
    ParamBox(Param lower, Param upper, std::map<int, double> frozen = {});

    int dim() const { return static_cast<int>(lower_.size()); }
    const Param& lower() const { return lower_; }
    const Param& upper() const { return upper_; }
    const std::map<int, double>& frozen() const { return frozen_; }

    bool is_frozen(int axis) const { return frozen_.count(axis) > 0; }
    std::vector<int> free_axes() const;
    int effective_dim() const { return static_cast<int>(free_axes().size()); }

    double side_length(int axis) const { return upper_[static_cast<std::size_t>(axis)] - lower_[static_cast<std::size_t>(axis)]; }
    /// Product of free side lengths.
    double volume() const;
    /// Longest free side length.
    double longest_side() const;
    /// Longest free axis; ties broken by lowest index.
    int longest_free_axis() const;
    /// min_{i,j free} h_i / h_j (1 when only one free axis).
    double aspect_ratio() const;

    Param center() const;
    /// Closed-box membership; frozen coordinates must match exactly.
    bool contains(const Param& mu) const;

    /// Equi-split along the given free axis at the midpoint.
    std::pair<ParamBox, ParamBox> split(int axis) const;

    bool operator==(const ParamBox& other) const;

private:
    Param lower_, upper_;
    std::map<int, double> frozen_;
};

/// Longest-edge equi-split; returns the two halves and the split axis.
struct SplitResult {
    ParamBox left, right;
    int axis;
};
SplitResult split_longest_edge(const ParamBox& box);

std::string to_string(const Param& mu);

}  // namespace rbhp

#include "rbhp/param_box.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace rbhp {

ParamBox::ParamBox(Param lower, Param upper, std::map<int, double> frozen)
    : lower_(std::move(lower)), upper_(std::move(upper)), frozen_(std::move(frozen)) {
    if (lower_.size() != upper_.size()) throw std::invalid_argument("ParamBox: dimension mismatch");
    for (auto& [axis, value] : frozen_) {
        if (axis < 0 || axis >= dim()) throw std::invalid_argument("ParamBox: frozen axis out of range");
        lower_[static_cast<std::size_t>(axis)] = value;
        upper_[static_cast<std::size_t>(axis)] = value;
    }
    for (int j = 0; j < dim(); ++j) {
        if (!is_frozen(j) && !(lower_[static_cast<std::size_t>(j)] < upper_[static_cast<std::size_t>(j)]))
            throw std::invalid_argument("ParamBox: lower must be < upper on free axes");
    }
    if (free_axes().empty()) throw std::invalid_argument("ParamBox: needs at least one free axis");
}

std::vector<int> ParamBox::free_axes() const {
    std::vector<int> axes;
    for (int j = 0; j < dim(); ++j)
        if (!is_frozen(j)) axes.push_back(j);
    return axes;
}

double ParamBox::volume() const {
    double v = 1.0;
    for (int j : free_axes()) v *= side_length(j);
    return v;
}

double ParamBox::longest_side() const {
    double h = 0.0;
    for (int j : free_axes()) h = std::max(h, side_length(j));
    return h;
}

int ParamBox::longest_free_axis() const {
    int best = -1;
    double h = -1.0;
    for (int j : free_axes()) {
        if (side_length(j) > h) {
            h = side_length(j);
            best = j;
        }
    }
    return best;
}

double ParamBox::aspect_ratio() const {
    const auto axes = free_axes();
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    for (int j : axes) {
        lo = std::min(lo, side_length(j));
        hi = std::max(hi, side_length(j));
    }
    return lo / hi;
}

Param ParamBox::center() const {
    Param c(static_cast<std::size_t>(dim()));
    for (int j = 0; j < dim(); ++j)
        c[static_cast<std::size_t>(j)] = is_frozen(j) ? lower_[static_cast<std::size_t>(j)]
                                                      : 0.5 * (lower_[static_cast<std::size_t>(j)] + upper_[static_cast<std::size_t>(j)]);
    return c;
}

bool ParamBox::contains(const Param& mu) const {
    if (static_cast<int>(mu.size()) != dim()) return false;
    for (int j = 0; j < dim(); ++j) {
        if (mu[static_cast<std::size_t>(j)] < lower_[static_cast<std::size_t>(j)] ||
            mu[static_cast<std::size_t>(j)] > upper_[static_cast<std::size_t>(j)])
            return false;
    }
    return true;
}

std::pair<ParamBox, ParamBox> ParamBox::split(int axis) const {
    if (is_frozen(axis)) throw std::invalid_argument("ParamBox::split: frozen axis");
    const double mid = 0.5 * (lower_[static_cast<std::size_t>(axis)] + upper_[static_cast<std::size_t>(axis)]);
    Param lo_hi = upper_, hi_lo = lower_;
    lo_hi[static_cast<std::size_t>(axis)] = mid;
    hi_lo[static_cast<std::size_t>(axis)] = mid;
    return {ParamBox(lower_, lo_hi, frozen_), ParamBox(hi_lo, upper_, frozen_)};
}

bool ParamBox::operator==(const ParamBox& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_ && frozen_ == other.frozen_;
}

SplitResult split_longest_edge(const ParamBox& box) {
    const int axis = box.longest_free_axis();
    auto [left, right] = box.split(axis);
    return {std::move(left), std::move(right), axis};
}

std::string to_string(const Param& mu) {
    std::string s = "(";
    char buf[32];
    for (std::size_t j = 0; j < mu.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.6g", mu[j]);
        if (j) s += ", ";
        s += buf;
    }
    return s + ")";
}

}  // namespace rbhp

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rbhp/param_box.hpp"
#include "rbhp/rng.hpp"

namespace rbhp {

/// Finite training sample of a parameter box. Reproducible from
/// (seed, box, size); frozen coordinates are set exactly.
struct TrainingSet {
    std::vector<Param> points;
    std::uint64_t seed = 0;
    ParamBox box;

    std::size_t size() const { return points.size(); }
    const Param& operator[](std::size_t i) const { return points[i]; }

    static TrainingSet uniform(const ParamBox& box, std::size_t size, std::uint64_t seed);

    /// Copy with mu inserted at index 0 (used to honor explicit initial
    /// parameters, which must be members of the set).
    TrainingSet with_prepended(const Param& mu) const;

    /// Exact-match lookup.
    std::optional<std::size_t> find(const Param& mu) const;
};

}  // namespace rbhp

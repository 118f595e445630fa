#include "rbhp/training_set.hpp"

#include <stdexcept>

namespace rbhp {

TrainingSet TrainingSet::uniform(const ParamBox& box, std::size_t size, std::uint64_t seed) {
    TrainingSet set;
    set.seed = seed;
    set.box = box;
    set.points.reserve(size);
    Rng rng(seed);
    const int d = box.dim();
    for (std::size_t p = 0; p < size; ++p) {
        Param mu(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            mu[static_cast<std::size_t>(j)] = box.is_frozen(j)
                                                  ? box.lower()[static_cast<std::size_t>(j)]
                                                  : rng.uniform(box.lower()[static_cast<std::size_t>(j)],
                                                                box.upper()[static_cast<std::size_t>(j)]);
        }
        set.points.push_back(std::move(mu));
    }
    return set;
}

TrainingSet TrainingSet::with_prepended(const Param& mu) const {
    if (!box.contains(mu)) throw std::invalid_argument("TrainingSet: prepended point outside box");
    TrainingSet out = *this;
    out.points.insert(out.points.begin(), mu);
    return out;
}

std::optional<std::size_t> TrainingSet::find(const Param& mu) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] == mu) return i;
    return std::nullopt;
}

}  // namespace rbhp

#pragma once

#include <random>
#include <vector>

#include "vfield/errors.hpp"
#include "vfield/retina.hpp"
#include "vfield/rng.hpp"

namespace vfield {

// Border policy shared by exploration and sample collection: the saccade is
// drawn uniformly from the subset that keeps the field of view inside the
// scene.

inline Position center_position(int scene_width, int scene_height) {
    return {(scene_width - kFovSize) / 2, (scene_height - kFovSize) / 2};
}

inline std::vector<int> feasible_saccades(Position pos, int scene_width, int scene_height) {
    std::vector<int> qs;
    qs.reserve(kSaccadeCount);
    for (const Saccade& s : saccades())
        if (fov_in_bounds({pos.x + s.dx, pos.y + s.dy}, scene_width, scene_height))
            qs.push_back(s.q);
    if (qs.empty())
        throw ImpossibleGeometry("no feasible saccade from (" + std::to_string(pos.x) + "," +
                                 std::to_string(pos.y) + ") in scene " +
                                 std::to_string(scene_width) + "x" +
                                 std::to_string(scene_height));
    return qs;
}

// Draws one feasible saccade and applies it. Returns the drawn q.
inline int random_step(std::mt19937_64& rng, Position& pos, int scene_width, int scene_height,
                       bool* interior = nullptr) {
    const std::vector<int> qs = feasible_saccades(pos, scene_width, scene_height);
    if (interior) *interior = (qs.size() == kSaccadeCount);
    const int q = qs[bounded_uniform(rng, static_cast<std::uint32_t>(qs.size()))];
    pos = apply_saccade(pos, saccade(q), scene_width, scene_height);
    return q;
}

}  // namespace vfield

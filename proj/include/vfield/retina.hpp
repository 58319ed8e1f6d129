#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vfield/image.hpp"

namespace vfield {

// Sensor geometry. The 30x30 field of view tiles into a 3x3 grid of 10x10
// receptive fields, numbered row-major 1..9 with field 5 the fovea.
// Peripheral fields keep only even rows and columns of their tile (25 of 100
// sensels); the fovea keeps all 100. Coordinates: x rightward, y downward,
// origin at the scene's top-left; a position addresses the top-left corner
// of the field of view.
inline constexpr int kFovSize = 30;
inline constexpr int kFieldSize = 10;
inline constexpr int kGridSide = 3;
inline constexpr int kFieldCount = 9;
inline constexpr int kFoveaField = 5;
inline constexpr int kMaskStride = 2;
inline constexpr int kSaccadeCount = 8;
inline constexpr int kFoveaDim = 100;
inline constexpr int kPeripheralDim = 25;

struct Position {
    int x = 0;
    int y = 0;
    bool operator==(const Position&) const = default;
};

// One of the 8 sensor translations; components are one field pitch each.
struct Saccade {
    int q = 0;  // 1..8
    int dx = 0;
    int dy = 0;
    bool operator==(const Saccade&) const = default;
};

// Pre-quantization input of one receptive field: 100 values for the fovea,
// 25 for a peripheral field, in row-major retained-sensel order.
struct RawFieldInput {
    int field = 0;  // 1..9
    std::vector<std::uint8_t> values;
};

struct Patch {
    std::array<std::uint8_t, kFovSize * kFovSize> v{};
    std::uint8_t at(int row, int col) const { return v[static_cast<std::size_t>(row) * kFovSize + col]; }
    std::uint8_t& at(int row, int col) { return v[static_cast<std::size_t>(row) * kFovSize + col]; }
};

// Canonical saccade order q=1..8: E, NE, N, NW, W, SW, S, SE (y points down,
// so N has dy = -10).
const std::array<Saccade, kSaccadeCount>& saccades();
const Saccade& saccade(int q);
std::optional<int> saccade_index(int dx, int dy);

int field_dim(int field);
// Tile coordinates (row, col) in 0..2 of a field within the grid.
std::pair<int, int> field_tile(int field);
// Center offset of a field from the fovea center, in pixels.
std::pair<int, int> field_center_offset(int field);

bool fov_in_bounds(Position pos, int scene_width, int scene_height);

Patch extract_patch(const GrayImage& image, Position pos);

std::array<RawFieldInput, kFieldCount> split_fields(const Patch& patch);

Position apply_saccade(Position pos, const Saccade& s, int scene_width, int scene_height);

// Ground-truth coupled field pairs for a saccade: (a, b) is coupled when the
// visual feature projected on field a before the translation lands exactly
// on field b after it. External verification aid; never consumed by the
// learning path.
std::vector<std::pair<int, int>> coupling_oracle(const Saccade& s);

}  // namespace vfield

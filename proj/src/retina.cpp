#include "vfield/retina.hpp"

#include <string>

#include "vfield/errors.hpp"

namespace vfield {

const std::array<Saccade, kSaccadeCount>& saccades() {
    static const std::array<Saccade, kSaccadeCount> table = {{
        {1, kFieldSize, 0},            // E
        {2, kFieldSize, -kFieldSize},  // NE
        {3, 0, -kFieldSize},           // N
        {4, -kFieldSize, -kFieldSize}, // NW
        {5, -kFieldSize, 0},           // W
        {6, -kFieldSize, kFieldSize},  // SW
        {7, 0, kFieldSize},            // S
        {8, kFieldSize, kFieldSize},   // SE
    }};
    return table;
}

const Saccade& saccade(int q) {
    if (q < 1 || q > kSaccadeCount)
        throw std::invalid_argument("saccade index " + std::to_string(q) + " outside 1..8");
    return saccades()[static_cast<std::size_t>(q - 1)];
}

std::optional<int> saccade_index(int dx, int dy) {
    for (const Saccade& s : saccades())
        if (s.dx == dx && s.dy == dy) return s.q;
    return std::nullopt;
}

int field_dim(int field) {
    return field == kFoveaField ? kFoveaDim : kPeripheralDim;
}

std::pair<int, int> field_tile(int field) {
    if (field < 1 || field > kFieldCount)
        throw std::invalid_argument("field id " + std::to_string(field) + " outside 1..9");
    return {(field - 1) / kGridSide, (field - 1) % kGridSide};
}

std::pair<int, int> field_center_offset(int field) {
    const auto [row, col] = field_tile(field);
    return {(col - 1) * kFieldSize, (row - 1) * kFieldSize};
}

bool fov_in_bounds(Position pos, int scene_width, int scene_height) {
    return pos.x >= 0 && pos.y >= 0 && pos.x + kFovSize <= scene_width &&
           pos.y + kFovSize <= scene_height;
}

Patch extract_patch(const GrayImage& image, Position pos) {
    if (!fov_in_bounds(pos, image.width, image.height))
        throw BoundsError("field of view at (" + std::to_string(pos.x) + "," +
                          std::to_string(pos.y) + ") exceeds scene " +
                          std::to_string(image.width) + "x" + std::to_string(image.height));
    Patch patch;
    for (int row = 0; row < kFovSize; ++row) {
        const std::uint8_t* src =
            image.pixels.data() + static_cast<std::size_t>(pos.y + row) * image.width + pos.x;
        std::uint8_t* dst = patch.v.data() + static_cast<std::size_t>(row) * kFovSize;
        for (int col = 0; col < kFovSize; ++col) dst[col] = src[col];
    }
    return patch;
}

std::array<RawFieldInput, kFieldCount> split_fields(const Patch& patch) {
    std::array<RawFieldInput, kFieldCount> out;
    for (int field = 1; field <= kFieldCount; ++field) {
        const auto [tr, tc] = field_tile(field);
        const int row0 = tr * kFieldSize;
        const int col0 = tc * kFieldSize;
        RawFieldInput& input = out[static_cast<std::size_t>(field - 1)];
        input.field = field;
        if (field == kFoveaField) {
            input.values.resize(kFoveaDim);
            for (int r = 0; r < kFieldSize; ++r)
                for (int c = 0; c < kFieldSize; ++c)
                    input.values[static_cast<std::size_t>(r) * kFieldSize + c] =
                        patch.at(row0 + r, col0 + c);
        } else {
            // Discarded sensels contribute nothing; retained ones are copied
            // verbatim, no pooling or averaging.
            input.values.resize(kPeripheralDim);
            std::size_t k = 0;
            for (int r = 0; r < kFieldSize; r += kMaskStride)
                for (int c = 0; c < kFieldSize; c += kMaskStride)
                    input.values[k++] = patch.at(row0 + r, col0 + c);
        }
    }
    return out;
}

Position apply_saccade(Position pos, const Saccade& s, int scene_width, int scene_height) {
    const Position moved{pos.x + s.dx, pos.y + s.dy};
    if (!fov_in_bounds(moved, scene_width, scene_height))
        throw BoundsError("saccade (" + std::to_string(s.dx) + "," + std::to_string(s.dy) +
                          ") from (" + std::to_string(pos.x) + "," + std::to_string(pos.y) +
                          ") leaves the scene");
    return moved;
}

std::vector<std::pair<int, int>> coupling_oracle(const Saccade& s) {
    // Field b sees, after the translation, the feature field a saw before it
    // exactly when rel(b) = rel(a) - (dx, dy).
    std::vector<std::pair<int, int>> pairs;
    for (int a = 1; a <= kFieldCount; ++a) {
        const auto [ax, ay] = field_center_offset(a);
        const int bx = ax - s.dx;
        const int by = ay - s.dy;
        for (int b = 1; b <= kFieldCount; ++b) {
            const auto [cx, cy] = field_center_offset(b);
            if (cx == bx && cy == by) pairs.emplace_back(a, b);
        }
    }
    return pairs;
}

}  // namespace vfield

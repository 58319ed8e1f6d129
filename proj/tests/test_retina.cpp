#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "vfield/errors.hpp"
#include "vfield/retina.hpp"
#include "vfield/scene.hpp"

using namespace vfield;

namespace {

GrayImage ramp_image(int w, int h) {
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.at(x, y) = static_cast<std::uint8_t>((y * w + x) % 256);
    return img;
}

Patch ramp_patch() {
    Patch p;
    for (int r = 0; r < kFovSize; ++r)
        for (int c = 0; c < kFovSize; ++c)
            p.at(r, c) = static_cast<std::uint8_t>((r * kFovSize + c) % 256);
    return p;
}

// Absolute scene coordinates of a field's retained sensels, written from the
// grid definition directly (independent of split_fields).
std::vector<std::pair<int, int>> retained_coords(Position pos, int field) {
    const int tr = (field - 1) / 3;
    const int tc = (field - 1) % 3;
    std::vector<std::pair<int, int>> coords;
    const int step = (field == kFoveaField) ? 1 : 2;
    for (int r = 0; r < 10; r += step)
        for (int c = 0; c < 10; c += step)
            coords.emplace_back(pos.x + tc * 10 + c, pos.y + tr * 10 + r);
    return coords;
}

}  // namespace

TEST_CASE("saccade table covers the 8 one-pitch translations exactly once") {
    std::set<std::pair<int, int>> vectors;
    for (const Saccade& s : saccades()) {
        CHECK((s.dx == -10 || s.dx == 0 || s.dx == 10));
        CHECK((s.dy == -10 || s.dy == 0 || s.dy == 10));
        CHECK((s.dx != 0 || s.dy != 0));
        vectors.insert({s.dx, s.dy});
        CHECK(saccade(s.q) == s);
        CHECK(saccade_index(s.dx, s.dy) == s.q);
    }
    CHECK(vectors.size() == 8);
    CHECK_FALSE(saccade_index(0, 0).has_value());
    CHECK_THROWS_AS(saccade(0), std::invalid_argument);
    CHECK_THROWS_AS(saccade(9), std::invalid_argument);
}

TEST_CASE("extract_patch copies the exact sub-raster") {
    const GrayImage constant(100, 100, 37);
    const Patch p = extract_patch(constant, {12, 31});
    CHECK(std::all_of(p.v.begin(), p.v.end(), [](std::uint8_t v) { return v == 37; }));

    const GrayImage img = ramp_image(64, 64);
    const Patch q = extract_patch(img, {5, 9});
    for (int r = 0; r < kFovSize; ++r)
        for (int c = 0; c < kFovSize; ++c) CHECK(q.at(r, c) == img.at(5 + c, 9 + r));
}

TEST_CASE("extract_patch boundary arithmetic") {
    const GrayImage img(1024, 1024, 0);
    CHECK_NOTHROW(extract_patch(img, {994, 994}));  // last legal position
    CHECK_THROWS_AS(extract_patch(img, {995, 0}), BoundsError);
    CHECK_THROWS_AS(extract_patch(img, {0, 995}), BoundsError);
    CHECK_THROWS_AS(extract_patch(img, {-1, 0}), BoundsError);
}

TEST_CASE("split_fields: constant patch yields constant fields of dim 100/25") {
    Patch p;
    p.v.fill(201);
    const auto fields = split_fields(p);
    for (int f = 1; f <= kFieldCount; ++f) {
        const RawFieldInput& in = fields[f - 1];
        CHECK(in.field == f);
        CHECK(static_cast<int>(in.values.size()) == (f == kFoveaField ? 100 : 25));
        CHECK(std::all_of(in.values.begin(), in.values.end(),
                          [](std::uint8_t v) { return v == 201; }));
    }
}

TEST_CASE("split_fields: ramp patch lands where the mask says") {
    const Patch p = ramp_patch();
    const auto fields = split_fields(p);
    // Field 1 keeps even rows/cols of the top-left tile.
    CHECK(fields[0].values[0] == p.at(0, 0));
    CHECK(fields[0].values[1] == p.at(0, 2));
    CHECK(fields[0].values[0] == 0);
    CHECK(fields[0].values[1] == 2);
    // The fovea starts at the central tile's origin.
    CHECK(fields[4].values[0] == p.at(10, 10));
    CHECK(fields[4].values[1] == p.at(10, 11));
}

TEST_CASE("split_fields re-indexes each retained sensel exactly once") {
    // Tag every patch cell uniquely (900 < 2^16 so use two bytes via two
    // patches: low byte and high byte of the index).
    Patch lo, hi;
    for (int i = 0; i < kFovSize * kFovSize; ++i) {
        lo.v[i] = static_cast<std::uint8_t>(i & 0xFF);
        hi.v[i] = static_cast<std::uint8_t>(i >> 8);
    }
    const auto lo_fields = split_fields(lo);
    const auto hi_fields = split_fields(hi);
    std::set<int> seen;
    std::size_t total = 0;
    for (int f = 0; f < kFieldCount; ++f) {
        REQUIRE(lo_fields[f].values.size() == hi_fields[f].values.size());
        for (std::size_t k = 0; k < lo_fields[f].values.size(); ++k) {
            const int tag = lo_fields[f].values[k] | (hi_fields[f].values[k] << 8);
            CHECK(seen.insert(tag).second);  // no sensel appears twice
            ++total;
        }
    }
    CHECK(total == 100 + 8 * 25);
    // Retained tags match the mask-derived coordinates.
    const auto coords = retained_coords({0, 0}, 1);
    CHECK(coords.size() == 25);
    CHECK(*seen.begin() == 0);
}

TEST_CASE("apply_saccade translates and checks bounds") {
    const Saccade east = saccade(*saccade_index(10, 0));
    CHECK(apply_saccade({500, 500}, east, 1024, 1024) == Position{510, 500});
    const Saccade west = saccade(*saccade_index(-10, 0));
    CHECK_THROWS_AS(apply_saccade({0, 0}, west, 1024, 1024), BoundsError);
    // A saccade composed with its opposite returns to the start.
    for (const Saccade& s : saccades()) {
        const Saccade opposite = saccade(*saccade_index(-s.dx, -s.dy));
        const Position start{500, 500};
        CHECK(apply_saccade(apply_saccade(start, s, 1024, 1024), opposite, 1024, 1024) == start);
    }
}

TEST_CASE("coupling oracle: rightward saccade couples the six column-shift pairs") {
    const Saccade east = saccade(*saccade_index(10, 0));
    auto pairs = coupling_oracle(east);
    std::sort(pairs.begin(), pairs.end());
    const std::vector<std::pair<int, int>> expected = {{2, 1}, {3, 2}, {5, 4},
                                                       {6, 5}, {8, 7}, {9, 8}};
    CHECK(pairs == expected);
}

TEST_CASE("coupling oracle: diagonal saccades couple 4 pairs, axis-aligned 6") {
    for (const Saccade& s : saccades()) {
        const auto pairs = coupling_oracle(s);
        const std::size_t expected = (s.dx != 0 && s.dy != 0) ? 4 : 6;
        CHECK(pairs.size() == expected);
        // Enumeration cross-check: (3-|dx|/10)*(3-|dy|/10) grid overlaps,
        // identity excluded by the nonzero shift.
        const std::size_t formula = static_cast<std::size_t>((3 - std::abs(s.dx) / 10) *
                                                             (3 - std::abs(s.dy) / 10));
        CHECK(pairs.size() == formula);
    }
}

TEST_CASE("coupling oracle: fovea pairs with exactly one field per saccade") {
    std::map<int, int> fovea_as_target;  // peripheral field -> times coupled into fovea
    for (const Saccade& s : saccades()) {
        int from_fovea = 0, into_fovea = 0;
        for (const auto& [a, b] : coupling_oracle(s)) {
            if (a == kFoveaField) {
                ++from_fovea;
                CHECK(b != kFoveaField);
            }
            if (b == kFoveaField) {
                ++into_fovea;
                ++fovea_as_target[a];
            }
        }
        CHECK(from_fovea == 1);
        CHECK(into_fovea == 1);
    }
    // Every peripheral field feeds the fovea for exactly one saccade.
    CHECK(fovea_as_target.size() == 8);
    for (const auto& [field, times] : fovea_as_target) {
        CHECK(field != kFoveaField);
        CHECK(times == 1);
    }
}

TEST_CASE("retained masks align exactly for coupled peripheral pairs") {
    const Position pos{50, 50};
    for (const Saccade& s : saccades()) {
        const Position moved{pos.x + s.dx, pos.y + s.dy};
        for (const auto& [a, b] : coupling_oracle(s)) {
            if (a == kFoveaField || b == kFoveaField) continue;
            CHECK(retained_coords(pos, a) == retained_coords(moved, b));
        }
    }
}

TEST_CASE("field geometry helpers") {
    CHECK(field_dim(5) == 100);
    CHECK(field_dim(1) == 25);
    CHECK(field_tile(1) == std::pair{0, 0});
    CHECK(field_tile(5) == std::pair{1, 1});
    CHECK(field_tile(9) == std::pair{2, 2});
    CHECK(field_center_offset(5) == std::pair{0, 0});
    CHECK(field_center_offset(1) == std::pair{-10, -10});
    CHECK(field_center_offset(6) == std::pair{10, 0});
    CHECK_THROWS_AS(field_tile(0), std::invalid_argument);
    CHECK_THROWS_AS(field_tile(10), std::invalid_argument);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "test_util.hpp"
#include "vfield/codebook.hpp"
#include "vfield/errors.hpp"
#include "vfield/rng.hpp"
#include "vfield/walk.hpp"

using namespace vfield;

namespace {

FieldSamples make_samples(int field, int dim, const std::vector<std::vector<std::uint8_t>>& rows) {
    FieldSamples fs;
    fs.field = field;
    fs.dim = dim;
    fs.count = rows.size();
    for (const auto& r : rows) fs.data.insert(fs.data.end(), r.begin(), r.end());
    return fs;
}

}  // namespace

TEST_CASE("kmeans with k distinct samples and k clusters reproduces the samples") {
    std::vector<std::vector<std::uint8_t>> rows = {
        {0, 0, 0}, {50, 10, 200}, {255, 255, 255}, {9, 120, 33}};
    const FieldSamples fs = make_samples(1, 3, rows);
    const Codebook cb = train_codebook(fs, 4, 123);
    CHECK(cb.k == 4);
    CHECK(cb.meta.inertia == 0.0);
    std::set<std::vector<double>> protos;
    for (int c = 0; c < cb.k; ++c) {
        const auto p = cb.prototype(c);
        protos.insert(std::vector<double>(p.begin(), p.end()));
    }
    for (const auto& r : rows) {
        std::vector<double> want(r.begin(), r.end());
        CHECK(protos.count(want) == 1);
    }
}

TEST_CASE("kmeans recovers two well-separated blobs") {
    // Two Gaussian blobs, separation 100, sigma 1, 10^4 samples of dim 25.
    std::mt19937_64 rng(77);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int dim = 25;
    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<double> mean_lo(dim, 0.0), mean_hi(dim, 0.0);
    int n_lo = 0, n_hi = 0;
    for (int i = 0; i < 10000; ++i) {
        const bool hi = (i % 2) == 1;
        const double center = hi ? 160.0 : 60.0;
        std::vector<std::uint8_t> row(dim);
        for (int j = 0; j < dim; ++j) {
            const double v = std::clamp(center + noise(rng), 0.0, 255.0);
            row[j] = static_cast<std::uint8_t>(std::lround(v));
        }
        // Oracle: per-blob sample means of the quantized data.
        for (int j = 0; j < dim; ++j) (hi ? mean_hi : mean_lo)[j] += row[j];
        (hi ? n_hi : n_lo)++;
        rows.push_back(std::move(row));
    }
    for (int j = 0; j < dim; ++j) {
        mean_lo[j] /= n_lo;
        mean_hi[j] /= n_hi;
    }

    const Codebook cb = train_codebook(make_samples(1, dim, rows), 2, 4242);
    auto dist = [&](std::span<const double> p, const std::vector<double>& m) {
        double acc = 0.0;
        for (int j = 0; j < dim; ++j) acc += (p[j] - m[j]) * (p[j] - m[j]);
        return std::sqrt(acc);
    };
    const double d00 = dist(cb.prototype(0), mean_lo);
    const double d01 = dist(cb.prototype(0), mean_hi);
    const double to_lo = std::min(d00, dist(cb.prototype(1), mean_lo));
    const double to_hi = std::min(d01, dist(cb.prototype(1), mean_hi));
    CHECK(to_lo < 1.0);
    CHECK(to_hi < 1.0);
    CHECK(cb.meta.inertia <= cb.meta.init_inertia);
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
    std::mt19937_64 rng(5);
    std::vector<std::vector<std::uint8_t>> rows;
    for (int i = 0; i < 500; ++i) {
        std::vector<std::uint8_t> row(25);
        for (auto& v : row) v = static_cast<std::uint8_t>(rng() & 0xFF);
        rows.push_back(std::move(row));
    }
    const FieldSamples fs = make_samples(2, 25, rows);
    const Codebook a = train_codebook(fs, 20, 99);
    const Codebook b = train_codebook(fs, 20, 99);
    CHECK(serialize_codebook(a) == serialize_codebook(b));
    const Codebook c = train_codebook(fs, 20, 100);
    CHECK(serialize_codebook(a) != serialize_codebook(c));
}

TEST_CASE("kmeans rejects data with fewer distinct samples than k") {
    std::vector<std::vector<std::uint8_t>> rows(50, std::vector<std::uint8_t>{1, 2, 3});
    rows.push_back({4, 5, 6});
    CHECK_THROWS_AS(train_codebook(make_samples(1, 3, rows), 3, 1), DegenerateData);
    CHECK_NOTHROW(train_codebook(make_samples(1, 3, rows), 2, 1));
}

TEST_CASE("kmeans leaves no empty cluster on clustered data") {
    std::mt19937_64 rng(8);
    std::vector<std::vector<std::uint8_t>> rows;
    for (int i = 0; i < 2000; ++i) {
        std::vector<std::uint8_t> row(25);
        for (auto& v : row) v = static_cast<std::uint8_t>(rng() & 0xFF);
        rows.push_back(std::move(row));
    }
    const Codebook cb = train_codebook(make_samples(1, 25, rows), 20, 3);
    std::vector<int> counts(20, 0);
    for (const auto& r : rows)
        ++counts[encode(std::span<const std::uint8_t>(r), cb) - 1];
    CHECK(std::all_of(counts.begin(), counts.end(), [](int c) { return c > 0; }));
}

TEST_CASE("encode returns the matching prototype and breaks ties low") {
    const Codebook cb = make_codebook(1, 2, {0, 0, 10, 0, 20, 0, 30, 0, 40, 0, 50, 0, 60, 0});
    CHECK(cb.k == 7);
    const std::vector<double> exactly_seventh = {60, 0};
    CHECK(encode(std::span<const double>(exactly_seventh), cb) == 7);
    // Equidistant between prototypes 3 (20,0) and 4 (30,0): lowest wins.
    const std::vector<double> tie = {25, 0};
    CHECK(encode(std::span<const double>(tie), cb) == 3);
    // Idempotence on prototypes.
    for (int i = 0; i < cb.k; ++i) {
        const auto p = cb.prototype(i);
        CHECK(encode(p, cb) == i + 1);
    }
    const std::vector<std::uint8_t> wrong_dim = {1, 2, 3};
    CHECK_THROWS_AS(encode(std::span<const std::uint8_t>(wrong_dim), cb), std::invalid_argument);
}

TEST_CASE("encoding cells are convex: midpoints stay in the cell") {
    std::mt19937_64 rng(31);
    std::vector<double> protos;
    for (int i = 0; i < 12 * 25; ++i) protos.push_back(uniform_unit(rng) * 255.0);
    const Codebook cb = make_codebook(3, 25, std::move(protos));
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> x(25), y(25);
        for (int j = 0; j < 25; ++j) {
            x[j] = uniform_unit(rng) * 255.0;
            y[j] = uniform_unit(rng) * 255.0;
        }
        const int sx = encode(std::span<const double>(x), cb);
        if (sx != encode(std::span<const double>(y), cb)) continue;
        std::vector<double> mid(25);
        for (int j = 0; j < 25; ++j) mid[j] = 0.5 * (x[j] + y[j]);
        CHECK(encode(std::span<const double>(mid), cb) == sx);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("encode argmin is invariant to common positive scaling") {
    std::mt19937_64 rng(32);
    std::vector<double> protos;
    for (int i = 0; i < 10 * 25; ++i) protos.push_back(uniform_unit(rng) * 120.0);
    const Codebook cb = make_codebook(2, 25, std::vector<double>(protos));
    std::vector<double> scaled(protos);
    for (auto& v : scaled) v *= 2.0;
    const Codebook cb2 = make_codebook(2, 25, std::move(scaled));
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint8_t> q(25);
        for (auto& v : q) v = static_cast<std::uint8_t>(rng() % 128);
        std::vector<std::uint8_t> q2(25);
        for (int j = 0; j < 25; ++j) q2[j] = static_cast<std::uint8_t>(q[j] * 2);
        CHECK(encode(std::span<const std::uint8_t>(q), cb) ==
              encode(std::span<const std::uint8_t>(q2), cb2));
    }
}

TEST_CASE("make_codebook rejects coincident prototypes") {
    CHECK_THROWS_AS(make_codebook(1, 2, {1, 2, 1, 2}), DegenerateData);
}

TEST_CASE("codebook files round-trip exactly") {
    ScratchDir dir("codebook_io");
    std::mt19937_64 rng(41);
    std::vector<double> protos;
    for (int i = 0; i < 20 * 25; ++i) protos.push_back(uniform_unit(rng) * 255.0);
    Codebook cb = make_codebook(2, 25, std::move(protos),
                                CodebookMeta{9, 1000, 17, 1.5e8, 1.23456789012345e8});
    save_codebook(cb, dir.path / "field_2.cbk");
    const Codebook loaded = load_codebook(dir.path / "field_2.cbk");
    CHECK(loaded.field == cb.field);
    CHECK(loaded.k == cb.k);
    CHECK(loaded.dim == cb.dim);
    CHECK(loaded.prototypes == cb.prototypes);  // %.17g round-trips doubles
    CHECK(loaded.meta.inertia == cb.meta.inertia);
    CHECK(codebook_hash(loaded) == codebook_hash(cb));
}

TEST_CASE("collect_training_samples: first sample equals the center patch split") {
    SceneSchedule sched;
    sched.source = SceneSchedule::Source::Random;
    sched.scene_count = 1;
    sched.saccades_per_scene = 100;
    sched.seed = 4;
    sched.width = 64;
    sched.height = 64;
    SceneStream stream(sched);
    const auto samples = collect_training_samples(stream, 1, 10);
    const GrayImage& scene = stream.scene(0);
    const auto fields = split_fields(extract_patch(scene, center_position(64, 64)));
    for (int f = 0; f < kFieldCount; ++f) {
        CHECK(samples[f].count == 1);
        CHECK(samples[f].dim == (f + 1 == kFoveaField ? 100 : 25));
        CHECK(std::equal(fields[f].values.begin(), fields[f].values.end(),
                         samples[f].data.begin()));
    }
}

TEST_CASE("collect_training_samples on constant scenes is constant") {
    auto scenes = std::make_shared<const std::vector<GrayImage>>(1, GrayImage(64, 64, 55));
    SceneSchedule sched;
    sched.source = SceneSchedule::Source::Fixed;
    sched.fixed = scenes;
    sched.scene_count = 1;
    sched.saccades_per_scene = 1000;
    SceneStream stream(sched);
    const auto samples = collect_training_samples(stream, 50, 1);
    for (const auto& fs : samples) {
        CHECK(fs.count == 50);
        CHECK(std::all_of(fs.data.begin(), fs.data.end(),
                          [](std::uint8_t v) { return v == 55; }));
    }
}

TEST_CASE("collect_training_samples is deterministic and spans scene changes") {
    SceneSchedule sched;
    sched.source = SceneSchedule::Source::Random;
    sched.scene_count = 3;
    sched.saccades_per_scene = 40;
    sched.seed = 21;
    sched.width = 80;
    sched.height = 80;
    SceneStream s1(sched), s2(sched);
    const auto a = collect_training_samples(s1, 120, 77);
    const auto b = collect_training_samples(s2, 120, 77);
    for (int f = 0; f < kFieldCount; ++f) CHECK(a[f].data == b[f].data);
}

TEST_CASE("prototype gallery has one tile per prototype") {
    std::mt19937_64 rng(51);
    std::vector<double> protos;
    for (int i = 0; i < 20 * 25; ++i) protos.push_back(uniform_unit(rng) * 255.0);
    const Codebook cb = make_codebook(1, 25, std::move(protos));
    const GrayImage img = render_prototype_gallery(cb);
    CHECK(img.width == 4 + 10 * (40 + 4));  // 10 columns of 5x5 tiles upscaled x8
    CHECK(img.height == 4 + 2 * (40 + 4));
}

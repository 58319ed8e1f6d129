#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vfield/image.hpp"
#include "vfield/kmeans.hpp"
#include "vfield/retina.hpp"
#include "vfield/scene.hpp"

namespace vfield {

// Paper-default prototype counts: 50 foveal states, 20 per peripheral field.
inline constexpr int kFoveaStates = 50;
inline constexpr int kPeripheralStates = 20;

inline int default_state_count(int field) {
    return field == kFoveaField ? kFoveaStates : kPeripheralStates;
}

// Raw inputs gathered for one receptive field, row-major, one row per step.
struct FieldSamples {
    int field = 0;
    int dim = 0;
    std::size_t count = 0;
    std::vector<std::uint8_t> data;

    std::span<const std::uint8_t> row(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

// Random walk over the scene stream recording every field's raw input at
// every step. Scenes advance every schedule.saccades_per_scene steps
// (wrapping over the schedule if more samples are requested than the stream
// covers); the position re-centers on each scene change. Same border policy
// as exploration.
std::array<FieldSamples, kFieldCount> collect_training_samples(SceneStream& stream,
                                                               long long samples_per_field,
                                                               std::uint64_t walk_seed);

struct CodebookMeta {
    std::uint64_t seed = 0;
    std::uint64_t sample_count = 0;
    int iterations = 0;
    double init_inertia = 0.0;
    double inertia = 0.0;
};

// Per-field set of prototype sensory states. Immutable after training.
struct Codebook {
    int field = 0;
    int k = 0;
    int dim = 0;
    std::vector<double> prototypes;  // k * dim
    CodebookMeta meta;

    std::span<const double> prototype(int index0) const {
        return {prototypes.data() + static_cast<std::size_t>(index0) * dim,
                static_cast<std::size_t>(dim)};
    }
};

Codebook train_codebook(const FieldSamples& samples, int k, std::uint64_t seed);

// Builds a codebook from explicit prototypes (synthetic constructions).
// Throws DegenerateData when prototypes are not pairwise distinct.
Codebook make_codebook(int field, int dim, std::vector<double> prototypes,
                       CodebookMeta meta = {});

// Winner-takes-all encoding: 1-based index of the nearest prototype by
// Euclidean distance, ties to the lowest index.
int encode(std::span<const std::uint8_t> input, const Codebook& cb);
int encode(std::span<const double> input, const Codebook& cb);

std::string serialize_codebook(const Codebook& cb);
void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);
std::uint64_t codebook_hash(const Codebook& cb);

std::array<Codebook, kFieldCount> load_codebook_set(const std::filesystem::path& dir);
std::filesystem::path codebook_filename(int field);

// Prototype gallery: each prototype rendered as its native 10x10 or 5x5
// tile, upscaled and arranged on a grid for visual inspection.
GrayImage render_prototype_gallery(const Codebook& cb);

}  // namespace vfield

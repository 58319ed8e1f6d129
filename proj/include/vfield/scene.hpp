#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "vfield/image.hpp"

namespace vfield {

// Minimum scene side: the sensor's 30x30 field of view has to fit.
inline constexpr int kMinSceneSide = 30;

// Side length natural images are normalized to before exploration.
inline constexpr int kNaturalSceneSide = 1024;

// Integer ITU-R BT.601 luma: round(0.299 R + 0.587 G + 0.114 B), evaluated
// exactly in fixed point.
inline std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

GrayImage to_luminance(const RgbImage& img);

// Every pixel drawn independently and uniformly from the 256 levels;
// identical output for identical (width, height, seed).
GrayImage generate_random_scene(int width, int height, std::uint64_t seed);

GrayImage resize_nearest(const GrayImage& img, int new_width, int new_height);
GrayImage center_crop(const GrayImage& img, int width, int height);

// Loads a raster image and normalizes it into an exploration scene:
// luminance conversion, then (if the shortest side is below 1024)
// nearest-neighbor upscale so the shortest side is exactly 1024, then a
// center crop to 1024x1024.
GrayImage load_natural_scene(const std::filesystem::path& path);

struct SceneSchedule {
    enum class Source { Random, Directory, Fixed };

    int scene_count = 100;
    long long saccades_per_scene = 10000;
    Source source = Source::Random;
    // Random source: per-scene seeds derive from (seed, scene index).
    std::uint64_t seed = 0;
    // Random source dimensions.
    int width = 1024;
    int height = 1024;
    // Directory source: files are taken in lexicographic filename order.
    std::filesystem::path directory;
    // Fixed source: preloaded scenes (used by synthetic constructions and
    // tests; not reachable from run configuration).
    std::shared_ptr<const std::vector<GrayImage>> fixed;
};

std::uint64_t scene_seed(std::uint64_t run_seed, int index);

// Deterministic realization of a schedule's scene stream. scene(i) loads or
// generates on demand and caches the most recent scene.
class SceneStream {
  public:
    explicit SceneStream(SceneSchedule schedule);

    const GrayImage& scene(int index);
    int count() const { return schedule_.scene_count; }
    const SceneSchedule& schedule() const { return schedule_; }
    std::string source_description() const;

  private:
    GrayImage make_scene(int index) const;

    SceneSchedule schedule_;
    std::vector<std::filesystem::path> files_;
    int cached_index_ = -1;
    GrayImage cached_;
};

}  // namespace vfield

#include "vfield/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vfield/errors.hpp"
#include "vfield/image_io.hpp"
#include "vfield/rng.hpp"

namespace vfield {

GrayImage to_luminance(const RgbImage& img) {
    GrayImage out(img.width, img.height);
    const std::size_t n = out.pixels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = img.pixels.data() + 3 * i;
        out.pixels[i] = luminance(p[0], p[1], p[2]);
    }
    return out;
}

GrayImage generate_random_scene(int width, int height, std::uint64_t seed) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("scene dimensions must be positive");
    GrayImage img(width, height);
    std::mt19937_64 rng(seed);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

GrayImage resize_nearest(const GrayImage& img, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0)
        throw std::invalid_argument("resize dimensions must be positive");
    GrayImage out(new_width, new_height);
    for (int y = 0; y < new_height; ++y) {
        const int sy = std::min<int>(
            img.height - 1,
            static_cast<int>((static_cast<long long>(y) * img.height + img.height / 2) /
                             new_height));
        for (int x = 0; x < new_width; ++x) {
            const int sx = std::min<int>(
                img.width - 1,
                static_cast<int>((static_cast<long long>(x) * img.width + img.width / 2) /
                                 new_width));
            out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

GrayImage center_crop(const GrayImage& img, int width, int height) {
    if (width > img.width || height > img.height)
        throw std::invalid_argument("crop larger than image");
    const int x0 = (img.width - width) / 2;
    const int y0 = (img.height - height) / 2;
    GrayImage out(width, height);
    for (int y = 0; y < height; ++y)
        std::copy_n(img.pixels.data() + static_cast<std::size_t>(y0 + y) * img.width + x0, width,
                    out.pixels.data() + static_cast<std::size_t>(y) * width);
    return out;
}

GrayImage load_natural_scene(const std::filesystem::path& path) {
    GrayImage gray = to_luminance(load_image(path));
    const int shortest = std::min(gray.width, gray.height);
    if (shortest < kNaturalSceneSide) {
        const double scale = static_cast<double>(kNaturalSceneSide) / shortest;
        const int w = std::max<int>(kNaturalSceneSide,
                                    static_cast<int>(std::llround(gray.width * scale)));
        const int h = std::max<int>(kNaturalSceneSide,
                                    static_cast<int>(std::llround(gray.height * scale)));
        gray = resize_nearest(gray, w, h);
    }
    gray = center_crop(gray, kNaturalSceneSide, kNaturalSceneSide);
    if (gray.width < kMinSceneSide || gray.height < kMinSceneSide)
        throw InvalidScene(path.string() + ": scene smaller than the field of view");
    return gray;
}

std::uint64_t scene_seed(std::uint64_t run_seed, int index) {
    return derive_seed(run_seed, static_cast<std::uint64_t>(index));
}

SceneStream::SceneStream(SceneSchedule schedule) : schedule_(std::move(schedule)) {
    if (schedule_.scene_count <= 0)
        throw std::invalid_argument("scene_count must be positive");
    if (schedule_.saccades_per_scene <= 0)
        throw std::invalid_argument("saccades_per_scene must be positive");
    switch (schedule_.source) {
        case SceneSchedule::Source::Random:
            break;
        case SceneSchedule::Source::Directory: {
            if (!std::filesystem::is_directory(schedule_.directory))
                throw IoError(schedule_.directory.string() + ": not a directory");
            for (const auto& entry : std::filesystem::directory_iterator(schedule_.directory))
                if (entry.is_regular_file() && has_image_extension(entry.path()))
                    files_.push_back(entry.path());
            std::sort(files_.begin(), files_.end(),
                      [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
            if (static_cast<int>(files_.size()) < schedule_.scene_count)
                throw InsufficientScenes(schedule_.directory.string() + ": found " +
                                         std::to_string(files_.size()) + " images, need " +
                                         std::to_string(schedule_.scene_count));
            break;
        }
        case SceneSchedule::Source::Fixed:
            if (!schedule_.fixed ||
                static_cast<int>(schedule_.fixed->size()) < schedule_.scene_count)
                throw InsufficientScenes("fixed scene list shorter than scene_count");
            break;
    }
}

const GrayImage& SceneStream::scene(int index) {
    if (index < 0 || index >= schedule_.scene_count)
        throw std::out_of_range("scene index " + std::to_string(index) + " outside schedule of " +
                                std::to_string(schedule_.scene_count));
    if (index != cached_index_) {
        cached_ = make_scene(index);
        if (cached_.width < kMinSceneSide || cached_.height < kMinSceneSide)
            throw InvalidScene("scene " + std::to_string(index) +
                               " smaller than the field of view");
        cached_index_ = index;
    }
    return cached_;
}

GrayImage SceneStream::make_scene(int index) const {
    switch (schedule_.source) {
        case SceneSchedule::Source::Random:
            return generate_random_scene(schedule_.width, schedule_.height,
                                         scene_seed(schedule_.seed, index));
        case SceneSchedule::Source::Directory:
            return load_natural_scene(files_[static_cast<std::size_t>(index)]);
        case SceneSchedule::Source::Fixed:
            return (*schedule_.fixed)[static_cast<std::size_t>(index)];
    }
    throw std::logic_error("unreachable scene source");
}

std::string SceneStream::source_description() const {
    switch (schedule_.source) {
        case SceneSchedule::Source::Random:
            return "random(" + std::to_string(schedule_.width) + "x" +
                   std::to_string(schedule_.height) + ", seed=" + std::to_string(schedule_.seed) +
                   ")";
        case SceneSchedule::Source::Directory:
            return "directory(" + schedule_.directory.string() + ")";
        case SceneSchedule::Source::Fixed:
            return "fixed(" + std::to_string(schedule_.fixed ? schedule_.fixed->size() : 0) +
                   " preloaded scenes)";
    }
    return {};
}

}  // namespace vfield

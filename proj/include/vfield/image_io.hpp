#pragma once

#include <filesystem>

#include "vfield/image.hpp"

namespace vfield {

// Raster IO for the formats the toolkit ingests and emits: PNG (via libpng)
// and binary/ASCII PNM. Only 8-bit channels are accepted; 16-bit or deeper
// files raise IoError.

RgbImage load_image(const std::filesystem::path& path);

void save_png(const GrayImage& img, const std::filesystem::path& path);
void save_png(const RgbImage& img, const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
void save_ppm(const RgbImage& img, const std::filesystem::path& path);

bool has_image_extension(const std::filesystem::path& path);

}  // namespace vfield

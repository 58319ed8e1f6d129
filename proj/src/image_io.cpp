#include "vfield/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

namespace vfield {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw IoError(path.string() + ": " + what);
}

RgbImage load_png_file(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) fail(path, "cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "png_create_info_struct failed");
    }
    RgbImage out;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "not a decodable PNG");
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    if (depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "only 8-bit channels are supported");
    }

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    // Alpha is not part of the scene model; drop it.
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != 3 * static_cast<std::size_t>(w)) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unexpected row layout after expansion");
    }

    out = RgbImage(static_cast<int>(w), static_cast<int>(h));
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = out.pixels.data() + 3 * static_cast<std::size_t>(y) * w;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void write_png_impl(const std::filesystem::path& path, int w, int h, int color_type,
                    const std::uint8_t* data, std::size_t stride) {
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) fail(path, "cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(path, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "png write failed");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * stride));
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

// --- PNM -------------------------------------------------------------------

int pnm_next_int(std::istream& in, const std::filesystem::path& path) {
    // Skips whitespace and '#' comments.
    for (;;) {
        int c = in.peek();
        if (c == EOF) fail(path, "truncated PNM header");
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) fail(path, "malformed PNM header");
    return value;
}

RgbImage load_pnm_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char p = 0, kind = 0;
    in.get(p).get(kind);
    if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6'))
        fail(path, "unsupported PNM type");
    const bool rgb = (kind == '3' || kind == '6');
    const bool binary = (kind == '5' || kind == '6');
    const int w = pnm_next_int(in, path);
    const int h = pnm_next_int(in, path);
    const int maxval = pnm_next_int(in, path);
    if (w <= 0 || h <= 0) fail(path, "non-positive PNM dimensions");
    if (maxval <= 0 || maxval > 255) fail(path, "only 8-bit PNM is supported");

    const std::size_t samples = static_cast<std::size_t>(w) * h * (rgb ? 3 : 1);
    std::vector<std::uint8_t> raw(samples);
    if (binary) {
        in.get();  // single whitespace after maxval
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(samples));
        if (static_cast<std::size_t>(in.gcount()) != samples) fail(path, "truncated PNM payload");
    } else {
        for (std::size_t i = 0; i < samples; ++i) {
            int v = 0;
            if (!(in >> v)) fail(path, "truncated PNM payload");
            if (v < 0 || v > maxval) fail(path, "PNM sample out of range");
            raw[i] = static_cast<std::uint8_t>(v);
        }
    }
    RgbImage out(w, h);
    if (rgb) {
        out.pixels = std::move(raw);
    } else {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            out.pixels[3 * i] = raw[i];
            out.pixels[3 * i + 1] = raw[i];
            out.pixels[3 * i + 2] = raw[i];
        }
    }
    return out;
}

}  // namespace

RgbImage load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail(path, "cannot open");
    unsigned char magic[8] = {};
    probe.read(reinterpret_cast<char*>(magic), 8);
    if (probe.gcount() < 2) fail(path, "file too short to be an image");
    probe.close();

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (std::memcmp(magic, png_sig, 8) == 0) return load_png_file(path);
    if (magic[0] == 'P' && magic[1] >= '2' && magic[1] <= '6') return load_pnm_file(path);
    fail(path, "unrecognized image format (PNG or PNM expected)");
}

void save_png(const GrayImage& img, const std::filesystem::path& path) {
    write_png_impl(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, img.pixels.data(),
                   static_cast<std::size_t>(img.width));
}

void save_png(const RgbImage& img, const std::filesystem::path& path) {
    write_png_impl(path, img.width, img.height, PNG_COLOR_TYPE_RGB, img.pixels.data(),
                   3 * static_cast<std::size_t>(img.width));
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) fail(path, "write failed");
}

void save_ppm(const RgbImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) fail(path, "write failed");
}

bool has_image_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

}  // namespace vfield

#include "vfield/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "vfield/errors.hpp"
#include "vfield/hash.hpp"
#include "vfield/walk.hpp"

namespace vfield {

std::array<FieldSamples, kFieldCount> collect_training_samples(SceneStream& stream,
                                                               long long samples_per_field,
                                                               std::uint64_t walk_seed) {
    if (samples_per_field <= 0)
        throw std::invalid_argument("samples_per_field must be positive");

    std::array<FieldSamples, kFieldCount> out;
    for (int f = 1; f <= kFieldCount; ++f) {
        FieldSamples& fs = out[static_cast<std::size_t>(f - 1)];
        fs.field = f;
        fs.dim = field_dim(f);
        fs.count = static_cast<std::size_t>(samples_per_field);
        fs.data.resize(fs.count * static_cast<std::size_t>(fs.dim));
    }

    const long long per_scene = stream.schedule().saccades_per_scene;
    std::mt19937_64 rng(walk_seed);
    int scene_index = 0;
    const GrayImage* img = &stream.scene(0);
    Position pos = center_position(img->width, img->height);

    for (long long step = 0; step < samples_per_field; ++step) {
        const auto fields = split_fields(extract_patch(*img, pos));
        for (int f = 0; f < kFieldCount; ++f) {
            FieldSamples& fs = out[static_cast<std::size_t>(f)];
            std::copy(fields[static_cast<std::size_t>(f)].values.begin(),
                      fields[static_cast<std::size_t>(f)].values.end(),
                      fs.data.begin() + static_cast<std::size_t>(step) * fs.dim);
        }
        if ((step + 1) % per_scene == 0) {
            scene_index = static_cast<int>(((step + 1) / per_scene) % stream.count());
            img = &stream.scene(scene_index);
            pos = center_position(img->width, img->height);
        } else {
            random_step(rng, pos, img->width, img->height);
        }
    }
    return out;
}

Codebook train_codebook(const FieldSamples& samples, int k, std::uint64_t seed) {
    KMeansResult r = kmeans(samples.data.data(), samples.count, samples.dim, k, seed);
    Codebook cb;
    cb.field = samples.field;
    cb.k = k;
    cb.dim = samples.dim;
    cb.prototypes = std::move(r.centroids);
    cb.meta = {seed, static_cast<std::uint64_t>(samples.count), r.iterations, r.init_inertia,
               r.inertia};
    return cb;
}

Codebook make_codebook(int field, int dim, std::vector<double> prototypes, CodebookMeta meta) {
    if (dim <= 0 || prototypes.empty() || prototypes.size() % static_cast<std::size_t>(dim) != 0)
        throw std::invalid_argument("make_codebook: prototype buffer does not tile by dim");
    Codebook cb;
    cb.field = field;
    cb.dim = dim;
    cb.k = static_cast<int>(prototypes.size() / static_cast<std::size_t>(dim));
    cb.prototypes = std::move(prototypes);
    cb.meta = meta;
    for (int a = 0; a < cb.k; ++a)
        for (int b = a + 1; b < cb.k; ++b)
            if (std::memcmp(cb.prototypes.data() + static_cast<std::size_t>(a) * dim,
                            cb.prototypes.data() + static_cast<std::size_t>(b) * dim,
                            sizeof(double) * static_cast<std::size_t>(dim)) == 0)
                throw DegenerateData("make_codebook: prototypes " + std::to_string(a + 1) +
                                     " and " + std::to_string(b + 1) + " coincide");
    return cb;
}

namespace {

template <typename T>
int encode_impl(std::span<const T> input, const Codebook& cb) {
    if (static_cast<int>(input.size()) != cb.dim)
        throw std::invalid_argument("encode: input dimension " + std::to_string(input.size()) +
                                    " does not match codebook dimension " +
                                    std::to_string(cb.dim));
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int c = 0; c < cb.k; ++c) {
        const double* p = cb.prototypes.data() + static_cast<std::size_t>(c) * cb.dim;
        double acc = 0.0;
        for (int j = 0; j < cb.dim; ++j) {
            const double d = static_cast<double>(input[static_cast<std::size_t>(j)]) - p[j];
            acc += d * d;
        }
        if (acc < best) {
            best = acc;
            best_i = c;
        }
    }
    return best_i + 1;
}

}  // namespace

int encode(std::span<const std::uint8_t> input, const Codebook& cb) {
    return encode_impl(input, cb);
}

int encode(std::span<const double> input, const Codebook& cb) {
    return encode_impl(input, cb);
}

std::string serialize_codebook(const Codebook& cb) {
    std::ostringstream out;
    char buf[64];
    out << "vfield-codebook v1\n";
    out << "field " << cb.field << "\n";
    out << "k " << cb.k << "\n";
    out << "dim " << cb.dim << "\n";
    out << "seed " << cb.meta.seed << "\n";
    out << "samples " << cb.meta.sample_count << "\n";
    out << "iterations " << cb.meta.iterations << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", cb.meta.init_inertia);
    out << "init_inertia " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", cb.meta.inertia);
    out << "inertia " << buf << "\n";
    for (int c = 0; c < cb.k; ++c) {
        out << "p " << (c + 1);
        const double* row = cb.prototypes.data() + static_cast<std::size_t>(c) * cb.dim;
        for (int j = 0; j < cb.dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            out << " " << buf;
        }
        out << "\n";
    }
    return out.str();
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    const std::string body = serialize_codebook(cb);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError(path.string() + ": write failed");
}

namespace {

[[noreturn]] void bad_codebook(const std::filesystem::path& path, const std::string& what) {
    throw IoError(path.string() + ": malformed codebook (" + what + ")");
}

}  // namespace

Codebook load_codebook(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open");
    std::string line;
    if (!std::getline(in, line) || line != "vfield-codebook v1") bad_codebook(path, "header");

    Codebook cb;
    auto read_kv = [&](const char* key) -> std::string {
        if (!std::getline(in, line)) bad_codebook(path, std::string("missing ") + key);
        std::istringstream ls(line);
        std::string k, v;
        ls >> k;
        std::getline(ls, v);
        if (k != key) bad_codebook(path, std::string("expected ") + key + ", got " + k);
        return v;
    };
    cb.field = std::stoi(read_kv("field"));
    cb.k = std::stoi(read_kv("k"));
    cb.dim = std::stoi(read_kv("dim"));
    cb.meta.seed = std::stoull(read_kv("seed"));
    cb.meta.sample_count = std::stoull(read_kv("samples"));
    cb.meta.iterations = std::stoi(read_kv("iterations"));
    cb.meta.init_inertia = std::stod(read_kv("init_inertia"));
    cb.meta.inertia = std::stod(read_kv("inertia"));
    if (cb.field < 1 || cb.field > kFieldCount || cb.k <= 0 || cb.dim <= 0)
        bad_codebook(path, "out-of-range header values");

    cb.prototypes.resize(static_cast<std::size_t>(cb.k) * cb.dim);
    for (int c = 0; c < cb.k; ++c) {
        if (!std::getline(in, line)) bad_codebook(path, "missing prototype row");
        std::istringstream ls(line);
        std::string tag;
        int idx = 0;
        ls >> tag >> idx;
        if (tag != "p" || idx != c + 1) bad_codebook(path, "prototype row tag");
        double* row = cb.prototypes.data() + static_cast<std::size_t>(c) * cb.dim;
        for (int j = 0; j < cb.dim; ++j)
            if (!(ls >> row[j])) bad_codebook(path, "short prototype row");
    }
    return cb;
}

std::uint64_t codebook_hash(const Codebook& cb) {
    return fnv1a64(serialize_codebook(cb));
}

std::filesystem::path codebook_filename(int field) {
    return "field_" + std::to_string(field) + ".cbk";
}

std::array<Codebook, kFieldCount> load_codebook_set(const std::filesystem::path& dir) {
    std::array<Codebook, kFieldCount> out;
    for (int f = 1; f <= kFieldCount; ++f) {
        Codebook cb = load_codebook(dir / codebook_filename(f));
        if (cb.field != f)
            throw IoError((dir / codebook_filename(f)).string() + ": field id mismatch");
        if (cb.dim != field_dim(f))
            throw IoError((dir / codebook_filename(f)).string() + ": dimension mismatch");
        out[static_cast<std::size_t>(f - 1)] = std::move(cb);
    }
    return out;
}

GrayImage render_prototype_gallery(const Codebook& cb) {
    const int tile = (cb.field == kFoveaField) ? kFieldSize : kFieldSize / kMaskStride;
    if (cb.dim != tile * tile)
        throw std::invalid_argument("gallery: codebook dimension is not a square tile");
    const int scale = 8;
    const int pad = 4;
    const int cols = std::min(cb.k, 10);
    const int rows = (cb.k + cols - 1) / cols;
    const int cell = tile * scale;
    GrayImage img(pad + cols * (cell + pad), pad + rows * (cell + pad), 32);
    for (int c = 0; c < cb.k; ++c) {
        const int gx = pad + (c % cols) * (cell + pad);
        const int gy = pad + (c / cols) * (cell + pad);
        const double* row = cb.prototypes.data() + static_cast<std::size_t>(c) * cb.dim;
        for (int py = 0; py < cell; ++py)
            for (int px = 0; px < cell; ++px) {
                const double v = row[(py / scale) * tile + (px / scale)];
                const long lv = std::lround(std::clamp(v, 0.0, 255.0));
                img.at(gx + px, gy + py) = static_cast<std::uint8_t>(lv);
            }
    }
    return img;
}

}  // namespace vfield

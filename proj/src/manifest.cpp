#include "vfield/manifest.hpp"

#include <fstream>

#include "vfield/errors.hpp"
#include "vfield/hash.hpp"
#include "vfield/retina.hpp"

namespace vfield {

std::uint64_t geometry_hash() {
    Fnv1a64 h;
    h.update("fov=30;field=10;grid=3x3;numbering=row-major;fovea=5;mask=even;");
    for (const Saccade& s : saccades()) {
        h.update(&s.q, sizeof(s.q));
        h.update(&s.dx, sizeof(s.dx));
        h.update(&s.dy, sizeof(s.dy));
    }
    return h.digest();
}

nlohmann::json geometry_json() {
    nlohmann::json j;
    j["fov"] = kFovSize;
    j["field"] = kFieldSize;
    j["mask_stride"] = kMaskStride;
    j["fovea"] = kFoveaField;
    j["hash"] = hash_hex(geometry_hash());
    return j;
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << manifest.dump(2) << "\n";
    if (!out) throw IoError(path.string() + ": write failed");
}

nlohmann::json read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": malformed manifest: " + e.what());
    }
    return j;
}

}  // namespace vfield

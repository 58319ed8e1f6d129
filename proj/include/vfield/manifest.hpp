#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

namespace vfield {

// Fingerprint of the fixed sensor geometry, recorded in every artifact so
// mismatched files refuse to combine.
std::uint64_t geometry_hash();
nlohmann::json geometry_json();

// Manifests carry no volatile fields (no timestamps, no host data): a
// manifest plus the scene source reproduces every output byte-for-byte.
void write_manifest(const std::filesystem::path& path, const nlohmann::json& manifest);
nlohmann::json read_manifest(const std::filesystem::path& path);

}  // namespace vfield

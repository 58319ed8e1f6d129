#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace vfield {

// FNV-1a 64-bit. Integrity fingerprint for artifacts (codebooks, tensors,
// geometry); detects accidental mismatch, not tampering.
class Fnv1a64 {
  public:
    Fnv1a64& update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001B3ull;
        }
        return *this;
    }
    Fnv1a64& update(std::string_view s) { return update(s.data(), s.size()); }
    std::uint64_t digest() const { return state_; }

  private:
    std::uint64_t state_ = 0xCBF29CE484222325ull;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    return Fnv1a64{}.update(s).digest();
}

std::uint64_t hash_file(const std::filesystem::path& path);

std::string hash_hex(std::uint64_t h);
std::uint64_t parse_hash_hex(const std::string& s);

}  // namespace vfield

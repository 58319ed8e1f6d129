#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "vfield/codebook.hpp"
#include "vfield/config.hpp"
#include "vfield/model.hpp"

namespace vfield {

// Command implementations behind the CLI. Each command writes its manifest
// before any other output and validates upstream hashes before consuming
// inputs. Progress notes go to `log` (stderr in the CLI); all file output is
// deterministic.

struct TrainResult {
    std::filesystem::path codebook_dir;
    std::array<std::uint64_t, kFieldCount> hashes{};
};

TrainResult run_train(const Settings& settings, std::ostream& log);

struct ExploreResult {
    std::filesystem::path tensor_path;
    long long events = 0;
    long long suppressed = 0;
};

ExploreResult run_explore(const Settings& settings, const std::filesystem::path& codebook_dir,
                          std::ostream& log);

struct AnalyzeResult {
    std::filesystem::path analysis_dir;
    BlockReport report;
    bool verified = false;  // coupled blocks occupy the lowest entropy ranks, every saccade
};

struct AnalyzeOptions {
    std::filesystem::path tensor_path;              // empty: <out>/tensor.vft
    std::filesystem::path codebook_dir;             // empty: <out>/codebooks (galleries skipped if absent)
    bool anchors_all = false;                       // default: foveal anchors only
};

AnalyzeResult run_analyze(const Settings& settings, const AnalyzeOptions& options,
                          std::ostream& log);

// Paths used by the commands, relative to the configured output directory.
std::filesystem::path codebooks_dir(const Settings& s);
std::filesystem::path tensor_path(const Settings& s);
std::filesystem::path run_log_path(const Settings& s);
std::filesystem::path analysis_dir(const Settings& s);

}  // namespace vfield

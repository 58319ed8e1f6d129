#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "vfield/scene.hpp"

namespace vfield {

using KeyValues = std::map<std::string, std::string>;

// Line-oriented key=value file; '#' starts a comment line. Unknown keys are
// rejected.
KeyValues parse_config_file(const std::filesystem::path& path);

// Fully resolved run configuration. Seeds not given explicitly derive from
// the master seed, so a single --seed reproduces a whole run.
struct Settings {
    std::uint64_t master_seed = 1;

    std::string scene_source = "random";  // "random" | "directory"
    int scene_count = 100;
    long long saccades_per_scene = 10000;
    std::uint64_t scene_seed = 0;
    std::filesystem::path scene_path;
    int scene_width = 1024;
    int scene_height = 1024;

    long long codebook_samples = 1'000'000;
    std::uint64_t codebook_seed = 0;
    std::uint64_t codebook_scene_seed = 0;  // training uses its own scene stream

    long long explore_saccades = 1'000'000;
    std::uint64_t explore_seed = 0;

    double epsilon = 0.5;

    std::filesystem::path out_dir;
    std::filesystem::path event_log;  // empty: no event log
};

// Precedence: overrides (CLI flags) > file > defaults.
Settings resolve_settings(const KeyValues& file, const KeyValues& overrides);

nlohmann::json settings_to_json(const Settings& s);
Settings settings_from_json(const nlohmann::json& j);

// Settings without output locations; embedded in artifact headers so two
// runs of one configuration produce byte-identical files wherever they land.
nlohmann::json settings_core_json(const Settings& s);

// Scene stream for the main exploration or for codebook training (which
// runs on its own stream seed).
SceneSchedule make_schedule(const Settings& s, bool training_stream);

}  // namespace vfield

#include "vfield/config.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <fstream>
#include <set>

#include "vfield/errors.hpp"
#include "vfield/retina.hpp"
#include "vfield/rng.hpp"

namespace vfield {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "seed",
        "scene.source",
        "scene.count",
        "scene.saccades_per_scene",
        "scene.seed",
        "scene.path",
        "scene.width",
        "scene.height",
        "codebook.samples",
        "codebook.seed",
        "codebook.scene_seed",
        "explore.saccades",
        "explore.seed",
        "explore.event_log",
        "analyze.epsilon",
        "output.dir",
        "retina.fov",
        "retina.field",
        "retina.mask_stride",
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value);

template <>
long long parse_number<long long>(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + value + "'");
    }
}

template <>
std::uint64_t parse_number<std::uint64_t>(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an unsigned integer: '" + value + "'");
    }
}

template <>
int parse_number<int>(const std::string& key, const std::string& value) {
    const long long v = parse_number<long long>(key, value);
    if (v < INT_MIN || v > INT_MAX) throw ConfigError(key + ": out of int range");
    return static_cast<int>(v);
}

template <>
double parse_number<double>(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + value + "'");
    }
}

}  // namespace

KeyValues parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!known_keys().count(key))
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        kv[key] = value;
    }
    return kv;
}

Settings resolve_settings(const KeyValues& file, const KeyValues& overrides) {
    KeyValues merged = file;
    for (const auto& [k, v] : overrides) {
        if (!known_keys().count(k)) throw ConfigError("unknown key '" + k + "'");
        merged[k] = v;
    }

    auto get = [&](const char* key) -> const std::string* {
        const auto it = merged.find(key);
        return it == merged.end() ? nullptr : &it->second;
    };

    Settings s;
    if (const auto* v = get("seed")) s.master_seed = parse_number<std::uint64_t>("seed", *v);
    if (const auto* v = get("scene.source")) s.scene_source = *v;
    if (s.scene_source != "random" && s.scene_source != "directory")
        throw ConfigError("scene.source must be 'random' or 'directory'");
    if (const auto* v = get("scene.count")) s.scene_count = parse_number<int>("scene.count", *v);
    if (s.scene_count <= 0) throw ConfigError("scene.count must be positive");
    if (const auto* v = get("scene.saccades_per_scene"))
        s.saccades_per_scene = parse_number<long long>("scene.saccades_per_scene", *v);
    if (s.saccades_per_scene <= 0) throw ConfigError("scene.saccades_per_scene must be positive");
    if (const auto* v = get("scene.path")) s.scene_path = *v;
    if (s.scene_source == "directory" && s.scene_path.empty())
        throw ConfigError("scene.path is required for the directory source");
    if (const auto* v = get("scene.width")) s.scene_width = parse_number<int>("scene.width", *v);
    if (const auto* v = get("scene.height")) s.scene_height = parse_number<int>("scene.height", *v);
    if (s.scene_width < kMinSceneSide || s.scene_height < kMinSceneSide)
        throw ConfigError("random scenes must be at least 30x30");

    s.scene_seed = get("scene.seed")
                       ? parse_number<std::uint64_t>("scene.seed", *get("scene.seed"))
                       : derive_seed(s.master_seed, 1);
    s.codebook_scene_seed =
        get("codebook.scene_seed")
            ? parse_number<std::uint64_t>("codebook.scene_seed", *get("codebook.scene_seed"))
            : derive_seed(s.master_seed, 2);
    s.codebook_seed = get("codebook.seed")
                          ? parse_number<std::uint64_t>("codebook.seed", *get("codebook.seed"))
                          : derive_seed(s.master_seed, 3);
    s.explore_seed = get("explore.seed")
                         ? parse_number<std::uint64_t>("explore.seed", *get("explore.seed"))
                         : derive_seed(s.master_seed, 4);

    if (const auto* v = get("codebook.samples"))
        s.codebook_samples = parse_number<long long>("codebook.samples", *v);
    if (s.codebook_samples <= 0) throw ConfigError("codebook.samples must be positive");
    if (const auto* v = get("explore.saccades"))
        s.explore_saccades = parse_number<long long>("explore.saccades", *v);
    if (s.explore_saccades <= 0) throw ConfigError("explore.saccades must be positive");
    if (const auto* v = get("explore.event_log")) s.event_log = *v;
    if (const auto* v = get("analyze.epsilon"))
        s.epsilon = parse_number<double>("analyze.epsilon", *v);
    if (!(s.epsilon > 0.0)) throw ConfigError("analyze.epsilon must be positive");

    if (const auto* v = get("output.dir")) {
        s.out_dir = *v;
    } else if (const char* env = std::getenv("VFIELD_OUT")) {
        s.out_dir = env;
    } else {
        s.out_dir = "vfield_out";
    }

    // Geometry is fixed; the keys exist for reporting and to catch attempts
    // to change it.
    if (const auto* v = get("retina.fov"))
        if (parse_number<int>("retina.fov", *v) != kFovSize)
            throw ConfigError("retina.fov is fixed at 30");
    if (const auto* v = get("retina.field"))
        if (parse_number<int>("retina.field", *v) != kFieldSize)
            throw ConfigError("retina.field is fixed at 10");
    if (const auto* v = get("retina.mask_stride"))
        if (parse_number<int>("retina.mask_stride", *v) != kMaskStride)
            throw ConfigError("retina.mask_stride is fixed at 2");

    return s;
}

nlohmann::json settings_to_json(const Settings& s) {
    nlohmann::json j;
    j["seed"] = s.master_seed;
    j["scene.source"] = s.scene_source;
    j["scene.count"] = s.scene_count;
    j["scene.saccades_per_scene"] = s.saccades_per_scene;
    j["scene.seed"] = s.scene_seed;
    j["scene.path"] = s.scene_path.string();
    j["scene.width"] = s.scene_width;
    j["scene.height"] = s.scene_height;
    j["codebook.samples"] = s.codebook_samples;
    j["codebook.seed"] = s.codebook_seed;
    j["codebook.scene_seed"] = s.codebook_scene_seed;
    j["explore.saccades"] = s.explore_saccades;
    j["explore.seed"] = s.explore_seed;
    j["explore.event_log"] = s.event_log.string();
    j["analyze.epsilon"] = s.epsilon;
    j["output.dir"] = s.out_dir.string();
    j["retina.fov"] = kFovSize;
    j["retina.field"] = kFieldSize;
    j["retina.mask_stride"] = kMaskStride;
    return j;
}

nlohmann::json settings_core_json(const Settings& s) {
    nlohmann::json j = settings_to_json(s);
    j.erase("output.dir");
    j.erase("explore.event_log");
    return j;
}

Settings settings_from_json(const nlohmann::json& j) {
    Settings s;
    s.master_seed = j.at("seed").get<std::uint64_t>();
    s.scene_source = j.at("scene.source").get<std::string>();
    s.scene_count = j.at("scene.count").get<int>();
    s.saccades_per_scene = j.at("scene.saccades_per_scene").get<long long>();
    s.scene_seed = j.at("scene.seed").get<std::uint64_t>();
    s.scene_path = j.at("scene.path").get<std::string>();
    s.scene_width = j.at("scene.width").get<int>();
    s.scene_height = j.at("scene.height").get<int>();
    s.codebook_samples = j.at("codebook.samples").get<long long>();
    s.codebook_seed = j.at("codebook.seed").get<std::uint64_t>();
    s.codebook_scene_seed = j.at("codebook.scene_seed").get<std::uint64_t>();
    s.explore_saccades = j.at("explore.saccades").get<long long>();
    s.explore_seed = j.at("explore.seed").get<std::uint64_t>();
    s.event_log = j.at("explore.event_log").get<std::string>();
    s.epsilon = j.at("analyze.epsilon").get<double>();
    s.out_dir = j.at("output.dir").get<std::string>();
    return s;
}

SceneSchedule make_schedule(const Settings& s, bool training_stream) {
    SceneSchedule schedule;
    schedule.scene_count = s.scene_count;
    schedule.saccades_per_scene = s.saccades_per_scene;
    if (s.scene_source == "random") {
        schedule.source = SceneSchedule::Source::Random;
        schedule.seed = training_stream ? s.codebook_scene_seed : s.scene_seed;
        schedule.width = s.scene_width;
        schedule.height = s.scene_height;
    } else {
        schedule.source = SceneSchedule::Source::Directory;
        schedule.directory = s.scene_path;
    }
    return schedule;
}

}  // namespace vfield

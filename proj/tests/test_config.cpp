#include <doctest.h>

#include <fstream>

#include "test_util.hpp"
#include "vfield/config.hpp"
#include "vfield/errors.hpp"
#include "vfield/manifest.hpp"
#include "vfield/rng.hpp"

using namespace vfield;

TEST_CASE("config files parse key=value lines with comments") {
    ScratchDir dir("config_parse");
    {
        std::ofstream f(dir.path / "run.conf");
        f << "# a comment\n";
        f << "seed = 42\n";
        f << "scene.count=7\n";
        f << "\n";
        f << "explore.saccades = 1234\n";
    }
    const KeyValues kv = parse_config_file(dir.path / "run.conf");
    CHECK(kv.at("seed") == "42");
    CHECK(kv.at("scene.count") == "7");
    CHECK(kv.at("explore.saccades") == "1234");
}

TEST_CASE("config files reject unknown keys and bad syntax") {
    ScratchDir dir("config_bad");
    {
        std::ofstream f(dir.path / "bad1.conf");
        f << "scene.colour = blue\n";
    }
    CHECK_THROWS_AS(parse_config_file(dir.path / "bad1.conf"), ConfigError);
    {
        std::ofstream f(dir.path / "bad2.conf");
        f << "just words\n";
    }
    CHECK_THROWS_AS(parse_config_file(dir.path / "bad2.conf"), ConfigError);
    CHECK_THROWS_AS(parse_config_file(dir.path / "missing.conf"), ConfigError);
}

TEST_CASE("flag overrides beat file values which beat defaults") {
    KeyValues file{{"scene.count", "10"}, {"explore.saccades", "5000"}};
    KeyValues flags{{"explore.saccades", "7000"}};
    const Settings s = resolve_settings(file, flags);
    CHECK(s.scene_count == 10);
    CHECK(s.explore_saccades == 7000);
    CHECK(s.saccades_per_scene == 10000);  // untouched default
}

TEST_CASE("unset seeds derive deterministically from the master seed") {
    const Settings s = resolve_settings({{"seed", "9"}}, {});
    CHECK(s.master_seed == 9);
    CHECK(s.scene_seed == derive_seed(9, 1));
    CHECK(s.codebook_scene_seed == derive_seed(9, 2));
    CHECK(s.codebook_seed == derive_seed(9, 3));
    CHECK(s.explore_seed == derive_seed(9, 4));
    CHECK(s.scene_seed != s.codebook_scene_seed);

    const Settings t = resolve_settings({{"seed", "9"}, {"scene.seed", "123"}}, {});
    CHECK(t.scene_seed == 123);
    CHECK(t.codebook_seed == derive_seed(9, 3));
}

TEST_CASE("settings validation catches contract violations") {
    CHECK_THROWS_AS(resolve_settings({{"scene.source", "webcam"}}, {}), ConfigError);
    CHECK_THROWS_AS(resolve_settings({{"scene.count", "0"}}, {}), ConfigError);
    CHECK_THROWS_AS(resolve_settings({{"scene.count", "ten"}}, {}), ConfigError);
    CHECK_THROWS_AS(resolve_settings({{"analyze.epsilon", "0"}}, {}), ConfigError);
    CHECK_THROWS_AS(resolve_settings({{"scene.source", "directory"}}, {}), ConfigError);
    CHECK_THROWS_AS(resolve_settings({{"retina.fov", "40"}}, {}), ConfigError);
    CHECK_NOTHROW(resolve_settings({{"retina.fov", "30"}}, {}));
    CHECK_THROWS_AS(resolve_settings({}, {{"not.a.key", "1"}}), ConfigError);
}

TEST_CASE("settings survive the json round trip used by manifests") {
    Settings s = resolve_settings({{"seed", "31"}, {"scene.count", "12"}}, {});
    s.epsilon = 0.25;
    const Settings back = settings_from_json(settings_to_json(s));
    CHECK(back.master_seed == s.master_seed);
    CHECK(back.scene_count == s.scene_count);
    CHECK(back.scene_seed == s.scene_seed);
    CHECK(back.codebook_seed == s.codebook_seed);
    CHECK(back.explore_seed == s.explore_seed);
    CHECK(back.epsilon == s.epsilon);

    const nlohmann::json core = settings_core_json(s);
    CHECK_FALSE(core.contains("output.dir"));
    CHECK_FALSE(core.contains("explore.event_log"));
}

TEST_CASE("manifests round trip through disk") {
    ScratchDir dir("manifest_io");
    nlohmann::json m;
    m["command"] = "train";
    m["geometry"] = geometry_json();
    write_manifest(dir.path / "m.json", m);
    const nlohmann::json back = read_manifest(dir.path / "m.json");
    CHECK(back == m);
    CHECK(back["geometry"]["fov"] == 30);
}

TEST_CASE("geometry hash is stable within a build") {
    CHECK(geometry_hash() == geometry_hash());
    CHECK(geometry_json()["hash"] == geometry_json()["hash"]);
}

TEST_CASE("training and exploration schedules differ only in the stream seed") {
    const Settings s = resolve_settings({{"seed", "5"}}, {});
    const SceneSchedule main = make_schedule(s, false);
    const SceneSchedule train = make_schedule(s, true);
    CHECK(main.source == SceneSchedule::Source::Random);
    CHECK(main.scene_count == train.scene_count);
    CHECK(main.saccades_per_scene == train.saccades_per_scene);
    CHECK(main.seed != train.seed);
}

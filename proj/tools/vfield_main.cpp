#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "vfield/acceptance.hpp"
#include "vfield/errors.hpp"
#include "vfield/pipeline.hpp"
#include "vfield/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonArgs {
    std::string config_file;
    vfield::KeyValues overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_file, "key=value configuration file");
    auto set = [&args](const char* key) {
        return [&args, key](const std::string& v) { args.overrides[key] = v; };
    };
    cmd->add_option_function<std::string>("--seed", set("seed"), "master seed; unset seeds derive from it");
    cmd->add_option_function<std::string>("--scenes", set("scene.count"), "scenes in the schedule");
    cmd->add_option_function<std::string>("--per-scene", set("scene.saccades_per_scene"),
                                          "saccades before each scene change");
    cmd->add_option_function<std::string>("--scene-source", set("scene.source"),
                                          "'random' or 'directory'");
    cmd->add_option_function<std::string>("--scene-path", set("scene.path"),
                                          "image directory for the directory source");
    cmd->add_option_function<std::string>("--scene-width", set("scene.width"),
                                          "random scene width");
    cmd->add_option_function<std::string>("--scene-height", set("scene.height"),
                                          "random scene height");
    cmd->add_option_function<std::string>("--saccades", set("explore.saccades"),
                                          "total saccades to execute");
    cmd->add_option_function<std::string>("--samples", set("codebook.samples"),
                                          "training samples per receptive field");
    cmd->add_option_function<std::string>("--epsilon", set("analyze.epsilon"),
                                          "similarity threshold");
    cmd->add_option_function<std::string>("--event-log", set("explore.event_log"),
                                          "write the transition event log here");
    cmd->add_option_function<std::string>("--out", set("output.dir"),
                                          "output root (default $VFIELD_OUT or ./vfield_out)");
}

vfield::Settings resolve(const CommonArgs& args) {
    vfield::KeyValues file;
    if (!args.config_file.empty()) file = vfield::parse_config_file(args.config_file);
    return vfield::resolve_settings(file, args.overrides);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"visual-field discovery toolkit: saccadic exploration of images with a "
                 "foveated sensor, transition-model estimation, and entropy analysis"};
    app.set_version_flag("--version", vfield::kVersion);
    app.require_subcommand(1);

    CommonArgs train_args, explore_args, analyze_args;
    std::string explore_codebooks, analyze_codebooks, analyze_tensor;
    bool analyze_verify = false, analyze_all_anchors = false;
    std::string verify_scale = "desk", verify_work;

    CLI::App* train = app.add_subcommand("train", "collect samples and train the 9 codebooks");
    add_common(train, train_args);

    CLI::App* explore = app.add_subcommand("explore", "run the saccade walk and accumulate the "
                                                      "transition tensor");
    add_common(explore, explore_args);
    explore->add_option("--codebooks", explore_codebooks, "codebook directory (default <out>/codebooks)");

    CLI::App* analyze = app.add_subcommand("analyze", "export entropy matrices, page heatmaps, "
                                                      "block ranking and similarity sets");
    add_common(analyze, analyze_args);
    analyze->add_option("--tensor", analyze_tensor, "tensor file (default <out>/tensor.vft)");
    analyze->add_option("--codebooks", analyze_codebooks, "codebook directory for galleries");
    analyze->add_flag("--verify", analyze_verify,
                      "exit non-zero unless coupled blocks rank lowest for every saccade");
    analyze->add_flag("--all-anchors", analyze_all_anchors,
                      "similarity sets for every field, not only the fovea");

    CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
    verify->add_option("--scale", verify_scale, "desk (default) or paper");
    verify->add_option("--work", verify_work, "working directory for verification runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (train->parsed()) {
            const auto settings = resolve(train_args);
            const auto result = vfield::run_train(settings, std::cerr);
            std::cout << "codebooks written to " << result.codebook_dir.string() << "\n";
            return kExitOk;
        }
        if (explore->parsed()) {
            const auto settings = resolve(explore_args);
            const auto result = vfield::run_explore(settings, explore_codebooks, std::cerr);
            std::cout << "tensor written to " << result.tensor_path.string() << " ("
                      << result.events << " events)\n";
            return kExitOk;
        }
        if (analyze->parsed()) {
            const auto settings = resolve(analyze_args);
            vfield::AnalyzeOptions options;
            options.tensor_path = analyze_tensor;
            options.codebook_dir = analyze_codebooks;
            options.anchors_all = analyze_all_anchors;
            const auto result = vfield::run_analyze(settings, options, std::cerr);
            std::cout << "analysis written to " << result.analysis_dir.string() << "\n";
            if (analyze_verify && !result.verified) {
                std::cerr << "verification failed: coupled blocks do not occupy the lowest "
                             "entropy ranks\n";
                return kExitData;
            }
            return kExitOk;
        }
        if (verify->parsed()) {
            vfield::AcceptanceOptions options;
            if (verify_scale == "paper") {
                options.scale = vfield::AcceptanceScale::Paper;
            } else if (verify_scale != "desk") {
                std::cerr << "--scale must be desk or paper\n";
                return kExitUsage;
            }
            options.work_dir = verify_work;
            const auto results = vfield::run_acceptance(options, std::cout);
            return vfield::all_passed(results) ? kExitOk : kExitData;
        }
    } catch (const vfield::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

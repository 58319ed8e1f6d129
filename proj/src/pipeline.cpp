#include "vfield/pipeline.hpp"

#include <fstream>
#include <ostream>

#include "vfield/errors.hpp"
#include "vfield/explorer.hpp"
#include "vfield/exports.hpp"
#include "vfield/hash.hpp"
#include "vfield/image_io.hpp"
#include "vfield/manifest.hpp"
#include "vfield/rng.hpp"
#include "vfield/version.hpp"

namespace vfield {

namespace {

nlohmann::json base_manifest(const char* command, const Settings& settings,
                             const SceneStream& stream) {
    nlohmann::json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["geometry"] = geometry_json();
    m["scene_source"] = stream.source_description();
    m["settings"] = settings_to_json(settings);
    return m;
}

void require_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string() + ": cannot create directory");
}

}  // namespace

std::filesystem::path codebooks_dir(const Settings& s) { return s.out_dir / "codebooks"; }
std::filesystem::path tensor_path(const Settings& s) { return s.out_dir / "tensor.vft"; }
std::filesystem::path run_log_path(const Settings& s) { return s.out_dir / "run_log.json"; }
std::filesystem::path analysis_dir(const Settings& s) { return s.out_dir / "analysis"; }

TrainResult run_train(const Settings& settings, std::ostream& log) {
    SceneStream stream(make_schedule(settings, /*training_stream=*/true));
    log << "collecting " << settings.codebook_samples << " samples per field from "
        << stream.source_description() << "\n";
    auto samples = collect_training_samples(stream, settings.codebook_samples,
                                            derive_seed(settings.codebook_scene_seed, 99));

    std::array<Codebook, kFieldCount> books;
    for (int f = 1; f <= kFieldCount; ++f) {
        const int k = default_state_count(f);
        const std::uint64_t seed = derive_seed(settings.codebook_seed, static_cast<std::uint64_t>(f));
        books[f - 1] = train_codebook(samples[f - 1], k, seed);
        log << "field " << f << ": k=" << k << " trained in " << books[f - 1].meta.iterations
            << " iterations, inertia " << books[f - 1].meta.inertia << "\n";
    }

    TrainResult result;
    result.codebook_dir = codebooks_dir(settings);
    require_dir(result.codebook_dir);

    nlohmann::json manifest = base_manifest("train", settings, stream);
    nlohmann::json hashes;
    nlohmann::json outputs = nlohmann::json::array();
    for (int f = 1; f <= kFieldCount; ++f) {
        result.hashes[f - 1] = codebook_hash(books[f - 1]);
        hashes["field_" + std::to_string(f)] = hash_hex(result.hashes[f - 1]);
        outputs.push_back((result.codebook_dir / codebook_filename(f)).string());
        outputs.push_back((result.codebook_dir / ("field_" + std::to_string(f) + ".png")).string());
    }
    manifest["codebook_hashes"] = hashes;
    manifest["outputs"] = outputs;
    write_manifest(result.codebook_dir / "manifest.json", manifest);

    for (int f = 1; f <= kFieldCount; ++f) {
        save_codebook(books[f - 1], result.codebook_dir / codebook_filename(f));
        save_png(render_prototype_gallery(books[f - 1]),
                 result.codebook_dir / ("field_" + std::to_string(f) + ".png"));
    }
    return result;
}

namespace {

std::array<std::uint64_t, kFieldCount> hash_codebook_set(
    const std::array<Codebook, kFieldCount>& books) {
    std::array<std::uint64_t, kFieldCount> hashes{};
    for (int f = 0; f < kFieldCount; ++f) hashes[f] = codebook_hash(books[f]);
    return hashes;
}

void check_hashes_against_manifest(const std::filesystem::path& manifest_path,
                                   const std::array<std::uint64_t, kFieldCount>& hashes) {
    const nlohmann::json m = read_manifest(manifest_path);
    if (!m.contains("codebook_hashes")) return;
    for (int f = 1; f <= kFieldCount; ++f) {
        const std::string key = "field_" + std::to_string(f);
        const std::string recorded = m["codebook_hashes"].at(key).get<std::string>();
        if (parse_hash_hex(recorded) != hashes[f - 1])
            throw IntegrityError("codebook for field " + std::to_string(f) +
                                 " does not match the hash recorded in " +
                                 manifest_path.string());
    }
}

}  // namespace

ExploreResult run_explore(const Settings& settings, const std::filesystem::path& codebook_dir,
                          std::ostream& log) {
    const auto dir = codebook_dir.empty() ? codebooks_dir(settings) : codebook_dir;
    const auto books = load_codebook_set(dir);
    const auto hashes = hash_codebook_set(books);
    if (std::filesystem::exists(dir / "manifest.json"))
        check_hashes_against_manifest(dir / "manifest.json", hashes);

    SceneStream stream(make_schedule(settings, /*training_stream=*/false));
    log << "exploring " << settings.explore_saccades << " saccades over "
        << stream.source_description() << "\n";

    ExploreResult result;
    result.tensor_path = tensor_path(settings);
    require_dir(settings.out_dir);

    // The schedule fixes the event count up front: one transition per slot
    // except the slots that coincide with a scene change.
    const long long boundaries =
        (settings.explore_saccades - 1) / settings.saccades_per_scene;
    const long long expected_events = settings.explore_saccades - boundaries;

    nlohmann::json manifest = base_manifest("explore", settings, stream);
    nlohmann::json hashes_json;
    for (int f = 1; f <= kFieldCount; ++f)
        hashes_json["field_" + std::to_string(f)] = hash_hex(hashes[f - 1]);
    manifest["codebook_hashes"] = hashes_json;
    manifest["codebook_dir"] = dir.string();

    manifest["event_count"] = expected_events;
    manifest["suppressed_transitions"] = boundaries;
    manifest["outputs"] = nlohmann::json::array(
        {result.tensor_path.string(), run_log_path(settings).string()});
    write_manifest(settings.out_dir / "explore_manifest.json", manifest);

    // Artifact headers carry the location-free settings so reruns into a
    // different directory still produce byte-identical files.
    nlohmann::json artifact_header;
    artifact_header["version"] = kVersion;
    artifact_header["geometry"] = geometry_json();
    artifact_header["scene_source"] = stream.source_description();
    artifact_header["settings"] = settings_core_json(settings);
    artifact_header["codebook_hashes"] = hashes_json;
    artifact_header["event_count"] = expected_events;
    artifact_header["suppressed_transitions"] = boundaries;

    TransitionTensor tensor;
    std::optional<EventLogWriter> event_log;
    if (!settings.event_log.empty())
        event_log.emplace(settings.event_log, artifact_header.dump());

    ExplorationConfig config;
    config.total_saccades = settings.explore_saccades;
    config.walk_seed = settings.explore_seed;
    const RunLog run = explore(stream, books, config, [&](const TransitionEvent& e) {
        tensor.accumulate(e);
        if (event_log) event_log->write(e);
    });
    if (event_log) event_log->close();

    if (tensor.total() != static_cast<std::uint64_t>(run.events) * kFieldCount * kFieldCount)
        throw std::logic_error("count conservation violated");
    if (run.events != expected_events || run.suppressed != boundaries)
        throw std::logic_error("scheduling contract violated");

    result.events = run.events;
    result.suppressed = run.suppressed;
    log << "emitted " << run.events << " events (" << run.suppressed
        << " suppressed at scene changes)\n";

    tensor.save(result.tensor_path, artifact_header.dump());

    nlohmann::json run_json;
    run_json["steps"] = run.steps;
    run_json["events"] = run.events;
    run_json["suppressed"] = run.suppressed;
    run_json["scenes_used"] = run.scenes_used;
    run_json["interior_steps"] = run.interior_steps;
    run_json["draw_histogram"] = run.draw_histogram;
    run_json["interior_histogram"] = run.interior_histogram;
    write_manifest(run_log_path(settings), run_json);
    return result;
}

AnalyzeResult run_analyze(const Settings& settings, const AnalyzeOptions& options,
                          std::ostream& log) {
    const auto tpath = options.tensor_path.empty() ? tensor_path(settings) : options.tensor_path;
    auto loaded = TransitionTensor::load(tpath);
    const TransitionTensor& tensor = loaded.tensor;
    nlohmann::json tensor_header;
    try {
        tensor_header = nlohmann::json::parse(loaded.header_json);
    } catch (const nlohmann::json::exception&) {
        throw IoError(tpath.string() + ": tensor header is not valid JSON");
    }
    if (tensor_header.contains("geometry") &&
        tensor_header["geometry"].value("hash", "") != hash_hex(geometry_hash()))
        throw IntegrityError(tpath.string() + ": tensor was built with a different geometry");

    // Codebooks are optional; without them prototype galleries are skipped.
    std::optional<std::array<Codebook, kFieldCount>> books;
    auto cb_dir = options.codebook_dir.empty() ? codebooks_dir(settings) : options.codebook_dir;
    if (std::filesystem::exists(cb_dir / codebook_filename(1))) {
        books = load_codebook_set(cb_dir);
        const auto hashes = hash_codebook_set(*books);
        if (tensor_header.contains("codebook_hashes")) {
            for (int f = 1; f <= kFieldCount; ++f) {
                const std::string key = "field_" + std::to_string(f);
                const std::string recorded =
                    tensor_header["codebook_hashes"].at(key).get<std::string>();
                if (parse_hash_hex(recorded) != hashes[f - 1])
                    throw IntegrityError("codebooks in " + cb_dir.string() +
                                         " do not match the tensor's recorded hashes");
            }
        }
    } else {
        log << "no codebooks at " << cb_dir.string() << "; galleries skipped\n";
    }

    AnalyzeResult result;
    result.analysis_dir = analysis_dir(settings);
    require_dir(result.analysis_dir);

    SceneStream stream(make_schedule(settings, false));
    nlohmann::json manifest = base_manifest("analyze", settings, stream);
    manifest["tensor"] = tpath.string();
    manifest["tensor_hash"] = hash_hex(hash_file(tpath));
    manifest["epsilon"] = settings.epsilon;
    write_manifest(result.analysis_dir / "analyze_manifest.json", manifest);

    const EntropyReport entropy = compute_entropy_report(tensor);
    for (int q = 1; q <= kSaccadeCount; ++q) {
        const std::string suffix = "_q" + std::to_string(q) + ".csv";
        write_entropy_csv(entropy, q, result.analysis_dir / ("entropy" + suffix));
        write_entropy_counts_csv(entropy, q, result.analysis_dir / ("entropy_counts" + suffix));
        write_page_csv(tensor, q, result.analysis_dir / ("tpage" + suffix));
        save_png(render_page(tensor, q),
                 result.analysis_dir / ("tpage_q" + std::to_string(q) + ".png"));
    }

    result.report = block_report(tensor);
    write_block_report_csv(result.report, result.analysis_dir / "block_report.csv");
    {
        std::ofstream txt(result.analysis_dir / "block_report.txt", std::ios::binary);
        txt << block_report_summary(result.report);
    }
    result.verified = result.report.all_match;

    std::vector<SimilaritySet> sets;
    const int a_lo = options.anchors_all ? 1 : kFoveaField;
    const int a_hi = options.anchors_all ? kFieldCount : kFoveaField;
    std::size_t total_members = 0;
    for (int a = a_lo; a <= a_hi; ++a)
        for (int i = 1; i <= tensor.state_count(a); ++i) {
            sets.push_back(similarity_set(tensor, a, i, settings.epsilon));
            total_members += sets.back().members.size();
        }
    write_similarity_csv(sets, result.analysis_dir / "similarity.csv");
    if (total_members == 0)
        log << "warning: every similarity set is empty at epsilon=" << settings.epsilon << "\n";
    if (books) {
        for (const SimilaritySet& set : sets) {
            if (set.anchor_field != kFoveaField) continue;
            save_png(render_similarity_gallery(set, *books),
                     result.analysis_dir /
                         ("similarity_a5_i" + std::to_string(set.anchor_state) + ".png"));
        }
    }

    log << block_report_summary(result.report);
    return result;
}

}  // namespace vfield

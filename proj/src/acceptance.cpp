#include "vfield/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "vfield/errors.hpp"
#include "vfield/explorer.hpp"
#include "vfield/image_io.hpp"
#include "vfield/manifest.hpp"
#include "vfield/model.hpp"
#include "vfield/pipeline.hpp"
#include "vfield/rng.hpp"
#include "vfield/stats.hpp"
#include "vfield/walk.hpp"

namespace vfield {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// --- A1: deterministic tile world ---------------------------------------------

std::vector<std::uint8_t> downsample_tile(const std::array<std::uint8_t, 100>& tile) {
    std::vector<std::uint8_t> out;
    out.reserve(25);
    for (int r = 0; r < kFieldSize; r += kMaskStride)
        for (int c = 0; c < kFieldSize; c += kMaskStride)
            out.push_back(tile[static_cast<std::size_t>(r) * kFieldSize + c]);
    return out;
}

CriterionResult a1_tile_world() {
    CriterionResult res{"A1", false, ""};
    constexpr int kSymbols = 12;
    constexpr int kSceneSide = 1030;  // center position (500,500) is tile-aligned
    constexpr long long kSaccades = 10000;

    std::mt19937_64 rng(0x11E1D);
    std::array<std::array<std::uint8_t, 100>, kSymbols> tiles;
    for (auto& tile : tiles)
        for (auto& v : tile) v = static_cast<std::uint8_t>(rng() & 0xFF);
    // The construction needs distinct downsampled patterns too.
    for (int a = 0; a < kSymbols; ++a)
        for (int b = a + 1; b < kSymbols; ++b)
            if (downsample_tile(tiles[a]) == downsample_tile(tiles[b])) {
                res.detail = "degenerate tile alphabet";
                return res;
            }

    GrayImage scene(kSceneSide, kSceneSide);
    const int cells = kSceneSide / kFieldSize;
    for (int cy = 0; cy < cells; ++cy)
        for (int cx = 0; cx < cells; ++cx) {
            const auto& tile = tiles[bounded_uniform(rng, kSymbols)];
            for (int r = 0; r < kFieldSize; ++r)
                for (int c = 0; c < kFieldSize; ++c)
                    scene.at(cx * kFieldSize + c, cy * kFieldSize + r) =
                        tile[static_cast<std::size_t>(r) * kFieldSize + c];
        }

    std::array<Codebook, kFieldCount> books;
    for (int f = 1; f <= kFieldCount; ++f) {
        std::vector<double> protos;
        if (f == kFoveaField) {
            for (const auto& tile : tiles)
                for (std::uint8_t v : tile) protos.push_back(static_cast<double>(v));
            books[f - 1] = make_codebook(f, kFoveaDim, std::move(protos));
        } else {
            for (const auto& tile : tiles)
                for (std::uint8_t v : downsample_tile(tile)) protos.push_back(static_cast<double>(v));
            books[f - 1] = make_codebook(f, kPeripheralDim, std::move(protos));
        }
    }

    SceneSchedule schedule;
    schedule.source = SceneSchedule::Source::Fixed;
    schedule.fixed = std::make_shared<const std::vector<GrayImage>>(1, scene);
    schedule.scene_count = 1;
    schedule.saccades_per_scene = kSaccades;
    SceneStream stream(schedule);

    std::array<int, kFieldCount> counts;
    counts.fill(kSymbols);
    TransitionTensor tensor(counts);
    ExplorationConfig config;
    config.total_saccades = kSaccades;
    config.walk_seed = 0x1A1B2;
    const RunLog run =
        explore(stream, books, config, [&](const TransitionEvent& e) { tensor.accumulate(e); });
    if (run.events != kSaccades) {
        res.detail = "expected 10000 events, got " + std::to_string(run.events);
        return res;
    }

    double max_h = 0.0;
    bool rows_ok = true;
    for (int q = 1; q <= kSaccadeCount; ++q) {
        for (const auto& [a, b] : coupling_oracle(saccade(q))) {
            if (a == kFoveaField || b == kFoveaField) continue;
            const double h = conditional_entropy(tensor, a, b, q);
            max_h = std::max(max_h, h);
            for (int i = 1; i <= kSymbols; ++i) {
                const auto probs = tensor.row_probabilities(q, a, i, b);
                if (!probs) continue;
                if (*std::max_element(probs->begin(), probs->end()) != 1.0) rows_ok = false;
            }
        }
    }

    bool sets_ok = true;
    for (int a = 1; a <= kFieldCount && sets_ok; ++a) {
        std::set<int> coupled_fields;
        for (int q = 1; q <= kSaccadeCount; ++q)
            for (const auto& [ca, cb] : coupling_oracle(saccade(q)))
                if (ca == a) coupled_fields.insert(cb);
        for (int i = 1; i <= kSymbols && sets_ok; ++i) {
            const SimilaritySet set = similarity_set(tensor, a, i, 0.5);
            std::set<int> member_fields;
            for (const SimilarityMember& m : set.members) {
                if (m.state != i || member_fields.count(m.field)) sets_ok = false;
                member_fields.insert(m.field);
            }
            if (member_fields != coupled_fields) sets_ok = false;
        }
    }

    res.pass = (max_h <= 1e-9) && rows_ok && sets_ok;
    res.detail = "max coupled peripheral H=" + fmt(max_h) +
                 (rows_ok ? ", all observed rows peak at 1" : ", row peak below 1") +
                 (sets_ok ? ", similarity sets exact" : ", similarity sets wrong");
    return res;
}

// --- A2/A3: statistical runs ---------------------------------------------------

struct RunOutputs {
    Settings settings;
    AnalyzeResult analysis;
    EntropyReport entropy;
    long long events = 0;
    std::uint64_t total_counts = 0;
    double seconds = 0.0;
};

RunOutputs full_run(const Settings& settings, std::ostream& log) {
    Timer timer;
    RunOutputs out;
    out.settings = settings;
    run_train(settings, log);
    const ExploreResult ex = run_explore(settings, {}, log);
    out.analysis = run_analyze(settings, {}, log);
    out.events = ex.events;
    const auto loaded = TransitionTensor::load(tensor_path(settings));
    out.total_counts = loaded.tensor.total();
    out.entropy = compute_entropy_report(loaded.tensor);
    out.seconds = timer.seconds();
    return out;
}

std::vector<double> all_entropies(const EntropyReport& report) {
    std::vector<double> values;
    for (int q = 1; q <= kSaccadeCount; ++q)
        for (int a = 1; a <= kFieldCount; ++a)
            for (int b = 1; b <= kFieldCount; ++b)
                if (!std::isnan(report.h[q - 1][a - 1][b - 1]))
                    values.push_back(report.h[q - 1][a - 1][b - 1]);
    return values;
}

CriterionResult a2_random_structure(const RunOutputs& run) {
    CriterionResult res{"A2", false, ""};
    const long long expected_events =
        run.settings.explore_saccades -
        (run.settings.explore_saccades - 1) / run.settings.saccades_per_scene;
    const bool counts_ok =
        run.events == expected_events &&
        run.total_counts == static_cast<std::uint64_t>(expected_events) * 81;

    bool ranking_ok = true;
    double min_gap = 1.0, min_uncoupled = 1.0;
    for (const SaccadeBlockReport& sr : run.analysis.report.per_saccade) {
        ranking_ok = ranking_ok && sr.ranking_matches;
        min_gap = std::min(min_gap, sr.mean_uncoupled_h - sr.mean_coupled_h);
        for (const BlockRank& r : sr.ranked)
            if (!r.coupled) min_uncoupled = std::min(min_uncoupled, r.h);
    }
    res.pass = counts_ok && ranking_ok && (min_gap >= 0.05) && (min_uncoupled >= 0.9);
    res.detail = std::string(counts_ok ? "counts exact" : "COUNT MISMATCH") +
                 ", ranking " + (ranking_ok ? "matches oracle" : "MISMATCH") +
                 ", min gap=" + fmt(min_gap) + ", min uncoupled H=" + fmt(min_uncoupled);
    return res;
}

GrayImage structured_scene(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int g1 = 17, g2 = 65;
    std::vector<double> c1(static_cast<std::size_t>(g1) * g1), c2(static_cast<std::size_t>(g2) * g2);
    for (auto& v : c1) v = uniform_unit(rng) * 255.0;
    for (auto& v : c2) v = uniform_unit(rng) * 255.0;
    auto sample = [](const std::vector<double>& c, int g, double fx, double fy) {
        const double u = fx * (g - 1);
        const double v = fy * (g - 1);
        const int x0 = std::min(static_cast<int>(u), g - 2);
        const int y0 = std::min(static_cast<int>(v), g - 2);
        const double ax = u - x0, ay = v - y0;
        const double* r0 = c.data() + static_cast<std::size_t>(y0) * g + x0;
        const double* r1 = r0 + g;
        return (r0[0] * (1 - ax) + r0[1] * ax) * (1 - ay) + (r1[0] * (1 - ax) + r1[1] * ax) * ay;
    };
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        const double fy = static_cast<double>(y) / (height - 1);
        for (int x = 0; x < width; ++x) {
            const double fx = static_cast<double>(x) / (width - 1);
            const double v = 0.6 * sample(c1, g1, fx, fy) + 0.4 * sample(c2, g2, fx, fy);
            img.at(x, y) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
        }
    }
    return img;
}

RgbImage tinted(const GrayImage& g) {
    RgbImage out(g.width, g.height);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) {
        const int v = g.pixels[i];
        out.pixels[3 * i] = static_cast<std::uint8_t>(std::min(255, v + 8));
        out.pixels[3 * i + 1] = static_cast<std::uint8_t>(v);
        out.pixels[3 * i + 2] = static_cast<std::uint8_t>(std::max(0, v - 8));
    }
    return out;
}

void generate_structured_scenes(const std::filesystem::path& dir, int count,
                                std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    for (int k = 0; k < count; ++k) {
        const int width = 512 + 64 * (k % 3);  // exercises the center crop
        const GrayImage g = structured_scene(width, 512, derive_seed(seed, static_cast<std::uint64_t>(k)));
        char name[32];
        std::snprintf(name, sizeof(name), "scene_%03d.png", k);
        save_png(tinted(g), dir / name);
    }
}

CriterionResult a3_natural_comparison(const RunOutputs& natural, const RunOutputs& random_run) {
    CriterionResult res{"A3", false, ""};

    bool ranking_ok = true;
    std::vector<double> coupled_pp, coupled_b5;
    for (const SaccadeBlockReport& sr : natural.analysis.report.per_saccade) {
        ranking_ok = ranking_ok && sr.ranking_matches;
        for (const BlockRank& r : sr.ranked) {
            if (!r.coupled) continue;
            if (r.b == kFoveaField)
                coupled_b5.push_back(r.h);
            else if (r.a != kFoveaField)
                coupled_pp.push_back(r.h);
        }
    }

    const std::vector<double> nat_all = all_entropies(natural.entropy);
    const std::vector<double> rnd_all = all_entropies(random_run.entropy);
    const double mean_nat = mean(nat_all), mean_rnd = mean(rnd_all);
    const double p_overall = rank_sum_p_less(nat_all, rnd_all);
    const bool overall_ok = (mean_nat < mean_rnd) && (p_overall < 0.01);

    const double mean_pp = mean(coupled_pp), mean_b5 = mean(coupled_b5);
    const double p_fovea = rank_sum_p_less(coupled_pp, coupled_b5);
    const bool fovea_ok = (mean_b5 > mean_pp) && (p_fovea < 0.01);

    res.pass = ranking_ok && overall_ok && fovea_ok;
    res.detail = "mean H natural=" + fmt(mean_nat) + " vs random=" + fmt(mean_rnd) +
                 " (p=" + fmt(p_overall) + "), ranking " +
                 (ranking_ok ? "matches" : "MISMATCH") + ", coupled b=5 mean=" + fmt(mean_b5) +
                 " vs peripheral=" + fmt(mean_pp) + " (p=" + fmt(p_fovea) + ")";
    return res;
}

// --- A4: estimator and formula oracles ----------------------------------------

CriterionResult a4_oracles() {
    CriterionResult res{"A4", false, ""};
    std::ostringstream why;
    bool ok = true;

    {
        TransitionTensor t;
        for (int i = 1; i <= 20; ++i) t.increment(1, 1, i, 2, (i * 7) % 20 + 1, 5 + i);
        const double h = conditional_entropy(t, 1, 2, 1);
        if (!(std::abs(h) <= 1e-12)) { ok = false; why << "deterministic H=" << h << "; "; }
    }
    {
        TransitionTensor t;
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) t.increment(3, 2, i, 4, j, 3);
        const double h = conditional_entropy(t, 2, 4, 3);
        if (!(std::abs(h - 1.0) <= 1e-12)) { ok = false; why << "uniform H=" << h << "; "; }
    }
    {
        TransitionTensor t;
        for (int i = 1; i <= 20; ++i) {
            t.increment(2, 1, i, 3, 1, 7);
            t.increment(2, 1, i, 3, 2, 7);
        }
        const double expected = std::log(2.0) / std::log(20.0);
        const double h = conditional_entropy(t, 1, 3, 2);
        if (!(std::abs(h - expected) <= 1e-12)) { ok = false; why << "two-outcome H=" << h << "; "; }
    }
    {
        // Row stochasticity on randomized counts.
        TransitionTensor t;
        std::mt19937_64 rng(0xA4A4);
        for (int n = 0; n < 20000; ++n) {
            const int q = 1 + static_cast<int>(bounded_uniform(rng, 8));
            const int a = 1 + static_cast<int>(bounded_uniform(rng, 9));
            const int b = 1 + static_cast<int>(bounded_uniform(rng, 9));
            const int i = 1 + static_cast<int>(bounded_uniform(rng, static_cast<std::uint32_t>(t.state_count(a))));
            const int j = 1 + static_cast<int>(bounded_uniform(rng, static_cast<std::uint32_t>(t.state_count(b))));
            t.increment(q, a, i, b, j, 1 + bounded_uniform(rng, 9));
        }
        for (int q = 1; q <= 8 && ok; ++q)
            for (int a = 1; a <= 9 && ok; ++a)
                for (int b = 1; b <= 9 && ok; ++b)
                    for (int i = 1; i <= t.state_count(a) && ok; ++i) {
                        const auto probs = t.row_probabilities(q, a, i, b);
                        if (!probs) continue;
                        double sum = 0.0;
                        for (double p : *probs) sum += p;
                        if (std::abs(sum - 1.0) > 1e-9) { ok = false; why << "row sum " << sum << "; "; }
                    }
    }
    {
        // Count conservation through event accumulation.
        TransitionTensor t;
        std::mt19937_64 rng(0x5151);
        for (int n = 0; n < 500; ++n) {
            TransitionEvent e;
            e.saccade = static_cast<std::uint8_t>(1 + bounded_uniform(rng, 8));
            for (int f = 1; f <= 9; ++f) {
                e.pre[f - 1] = static_cast<std::uint16_t>(
                    1 + bounded_uniform(rng, static_cast<std::uint32_t>(t.state_count(f))));
                e.post[f - 1] = static_cast<std::uint16_t>(
                    1 + bounded_uniform(rng, static_cast<std::uint32_t>(t.state_count(f))));
            }
            t.accumulate(e);
        }
        if (t.total() != 500ull * 81 || t.events() != 500) { ok = false; why << "count conservation; "; }
    }
    {
        // Similarity-set threshold monotonicity, 1000 randomized trials.
        std::mt19937_64 rng(0xE55);
        for (int trial = 0; trial < 50 && ok; ++trial) {
            TransitionTensor t;
            for (int n = 0; n < 3000; ++n) {
                const int q = 1 + static_cast<int>(bounded_uniform(rng, 8));
                const int a = 1 + static_cast<int>(bounded_uniform(rng, 9));
                const int b = 1 + static_cast<int>(bounded_uniform(rng, 9));
                const int i = 1 + static_cast<int>(bounded_uniform(rng, static_cast<std::uint32_t>(t.state_count(a))));
                const int j = 1 + static_cast<int>(bounded_uniform(rng, static_cast<std::uint32_t>(t.state_count(b))));
                t.increment(q, a, i, b, j, 1 + bounded_uniform(rng, 30));
            }
            for (int inner = 0; inner < 20 && ok; ++inner) {
                const int a = 1 + static_cast<int>(bounded_uniform(rng, 9));
                const int i = 1 + static_cast<int>(bounded_uniform(rng, static_cast<std::uint32_t>(t.state_count(a))));
                double e1 = 0.05 + 0.9 * uniform_unit(rng);
                double e2 = 0.05 + 0.9 * uniform_unit(rng);
                if (e1 > e2) std::swap(e1, e2);
                const SimilaritySet g1 = similarity_set(t, a, i, e1);
                const SimilaritySet g2 = similarity_set(t, a, i, e2);
                std::set<std::pair<int, int>> s1, s2;
                for (const auto& m : g1.members) s1.insert({m.field, m.state});
                for (const auto& m : g2.members) s2.insert({m.field, m.state});
                if (!std::includes(s1.begin(), s1.end(), s2.begin(), s2.end())) {
                    ok = false;
                    why << "monotonicity violated; ";
                }
            }
        }
    }

    res.pass = ok;
    res.detail = ok ? "entropy oracles exact, rows stochastic, counts conserved, G monotone"
                    : why.str();
    return res;
}

// --- A5: coupling oracle vs pixel tracking ------------------------------------

// Independent route: tag every pixel of a virtual scene uniquely, read tile
// contents through plain nested loops, and call (a,b) coupled when b's tile
// after the translation carries exactly the tags a's tile carried before.
CriterionResult a5_coupling_equivalence() {
    CriterionResult res{"A5", false, ""};
    const int side = 90;
    std::vector<int> tags(static_cast<std::size_t>(side) * side);
    for (std::size_t i = 0; i < tags.size(); ++i) tags[i] = static_cast<int>(i);
    auto tag_at = [&](int x, int y) { return tags[static_cast<std::size_t>(y) * side + x]; };
    auto tile_tags = [&](int px, int py, int field) {
        const int tr = (field - 1) / 3;
        const int tc = (field - 1) % 3;
        std::vector<int> out;
        out.reserve(100);
        for (int r = 0; r < 10; ++r)
            for (int c = 0; c < 10; ++c) out.push_back(tag_at(px + tc * 10 + c, py + tr * 10 + r));
        return out;
    };

    bool ok = true;
    std::ostringstream why;
    const Position p0{30, 30};
    for (const Saccade& s : saccades()) {
        std::vector<std::pair<int, int>> brute;
        for (int a = 1; a <= kFieldCount; ++a)
            for (int b = 1; b <= kFieldCount; ++b)
                if (tile_tags(p0.x, p0.y, a) == tile_tags(p0.x + s.dx, p0.y + s.dy, b))
                    brute.emplace_back(a, b);
        auto oracle = coupling_oracle(s);
        std::sort(oracle.begin(), oracle.end());
        std::sort(brute.begin(), brute.end());
        if (oracle != brute) {
            ok = false;
            why << "q=" << s.q << " oracle/brute-force disagree; ";
        }
        const std::size_t expected = (s.dx != 0 && s.dy != 0) ? 4 : 6;
        if (oracle.size() != expected) {
            ok = false;
            why << "q=" << s.q << " pair count " << oracle.size() << "; ";
        }
    }

    // Cited couplings: the rightward translation couples (2,1), (8,7), (5,4),
    // (6,5); (2,4) and (8,4) each belong to exactly one translation.
    {
        auto right = coupling_oracle(*std::find_if(saccades().begin(), saccades().end(),
                                                   [](const Saccade& s) {
                                                       return s.dx == kFieldSize && s.dy == 0;
                                                   }));
        for (const auto need : {std::pair{2, 1}, std::pair{8, 7}, std::pair{5, 4}, std::pair{6, 5}})
            if (std::find(right.begin(), right.end(), need) == right.end()) {
                ok = false;
                why << "rightward saccade missing (" << need.first << "," << need.second << "); ";
            }
        int n24 = 0, n84 = 0;
        for (const Saccade& s : saccades()) {
            const auto pairs = coupling_oracle(s);
            n24 += std::count(pairs.begin(), pairs.end(), std::pair{2, 4});
            n84 += std::count(pairs.begin(), pairs.end(), std::pair{8, 4});
        }
        if (n24 != 1 || n84 != 1) {
            ok = false;
            why << "(2,4) in " << n24 << " saccades, (8,4) in " << n84 << "; ";
        }
    }

    res.pass = ok;
    res.detail = ok ? "oracle equals pixel tracking on all 8 saccades; cited pairs present"
                    : why.str();
    return res;
}

// --- A6: reproducibility and performance --------------------------------------

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

CriterionResult a6_reproducibility(const std::filesystem::path& work, double paper_seconds,
                                   AcceptanceScale scale, std::ostream& log) {
    CriterionResult res{"A6", false, ""};

    Settings base;
    base.master_seed = 0xA6;
    base.scene_source = "random";
    base.scene_count = 10;
    base.saccades_per_scene = 2000;
    base.explore_saccades = 20000;
    base.scene_width = 256;
    base.scene_height = 256;
    base.codebook_samples = 30000;
    base.out_dir = work / "a6_run1";
    base.scene_seed = derive_seed(base.master_seed, 1);
    base.codebook_scene_seed = derive_seed(base.master_seed, 2);
    base.codebook_seed = derive_seed(base.master_seed, 3);
    base.explore_seed = derive_seed(base.master_seed, 4);

    run_train(base, log);
    run_explore(base, {}, log);
    run_analyze(base, {}, log);

    // Second run resolved from the first run's manifest.
    const nlohmann::json manifest = read_manifest(base.out_dir / "explore_manifest.json");
    Settings again = settings_from_json(manifest.at("settings"));
    again.out_dir = work / "a6_run2";
    run_train(again, log);
    run_explore(again, {}, log);
    run_analyze(again, {}, log);

    int compared = 0;
    bool identical = true;
    std::string first_diff;
    for (auto it = std::filesystem::recursive_directory_iterator(base.out_dir);
         it != std::filesystem::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        const auto rel = std::filesystem::relative(it->path(), base.out_dir);
        if (rel.filename().string().find("manifest") != std::string::npos) continue;
        ++compared;
        if (!same_bytes(it->path(), again.out_dir / rel)) {
            identical = false;
            if (first_diff.empty()) first_diff = rel.string();
        }
    }

    bool perf_ok = true;
    std::string perf_note;
    if (scale == AcceptanceScale::Paper) {
        perf_ok = paper_seconds < 1200.0;
        perf_note = ", paper-scale run " + fmt(paper_seconds) + " s (budget 1200)";
    } else {
        perf_note = ", desk-scale random run took " + fmt(paper_seconds) +
                    " s (20 min budget applies to the paper-scale protocol)";
    }

    res.pass = identical && compared > 0 && perf_ok;
    res.detail = (identical ? std::to_string(compared) + " artifacts byte-identical"
                            : "DIFFERENT bytes in " + first_diff) +
                 perf_note;
    return res;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.pass; });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log) {
    const bool paper = options.scale == AcceptanceScale::Paper;
    const std::filesystem::path work =
        options.work_dir.empty() ? std::filesystem::path("acceptance_work") : options.work_dir;
    std::filesystem::create_directories(work);

    std::vector<CriterionResult> results;
    auto emit = [&](CriterionResult r) {
        log << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.detail << "\n";
        results.push_back(std::move(r));
    };

    emit(a1_tile_world());

    // A2: random-scene structure discovery.
    Settings a2;
    a2.master_seed = 0xA2;
    a2.scene_source = "random";
    a2.scene_count = 100;
    a2.saccades_per_scene = paper ? 10000 : 1000;
    a2.explore_saccades = paper ? 1000000 : 100000;
    a2.scene_width = paper ? 1024 : 256;
    a2.scene_height = paper ? 1024 : 256;
    a2.codebook_samples = paper ? 1000000 : 200000;
    a2.scene_seed = derive_seed(a2.master_seed, 1);
    a2.codebook_scene_seed = derive_seed(a2.master_seed, 2);
    a2.codebook_seed = derive_seed(a2.master_seed, 3);
    a2.explore_seed = derive_seed(a2.master_seed, 4);
    a2.out_dir = work / "a2_random";
    log << "A2: running " << (paper ? "paper" : "desk") << "-scale random pipeline...\n";
    const RunOutputs random_run = full_run(a2, log);
    emit(a2_random_structure(random_run));

    // A3: natural-scene comparison over ingested images.
    const auto scenes_dir = work / "a3_scenes";
    generate_structured_scenes(scenes_dir, 100, 0x5CE11E5);
    Settings a3 = a2;
    a3.master_seed = 0xA3;
    a3.scene_source = "directory";
    a3.scene_path = scenes_dir;
    a3.scene_seed = derive_seed(a3.master_seed, 1);
    a3.codebook_scene_seed = derive_seed(a3.master_seed, 2);
    a3.codebook_seed = derive_seed(a3.master_seed, 3);
    a3.explore_seed = derive_seed(a3.master_seed, 4);
    a3.out_dir = work / "a3_natural";
    log << "A3: running " << (paper ? "paper" : "desk") << "-scale natural pipeline...\n";
    const RunOutputs natural_run = full_run(a3, log);
    emit(a3_natural_comparison(natural_run, random_run));

    emit(a4_oracles());
    emit(a5_coupling_equivalence());
    emit(a6_reproducibility(work, random_run.seconds, options.scale, log));

    log << (all_passed(results) ? "acceptance: all criteria passed\n"
                                : "acceptance: FAILURES present\n");
    return results;
}

}  // namespace vfield

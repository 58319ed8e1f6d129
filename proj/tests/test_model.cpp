#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "test_util.hpp"
#include "vfield/errors.hpp"
#include "vfield/model.hpp"
#include "vfield/rng.hpp"

using namespace vfield;

namespace {

TransitionEvent event_with(std::uint8_t q, std::uint16_t pre_all, std::uint16_t post_all) {
    TransitionEvent e;
    e.saccade = q;
    e.pre.fill(pre_all);
    e.post.fill(post_all);
    return e;
}

// Reference entropy: the normalized conditional entropy evaluated directly
// on a count matrix, independent of the tensor indexing code.
double reference_entropy(const std::vector<std::vector<long long>>& counts, int nb) {
    long long block = 0;
    for (const auto& row : counts)
        for (long long c : row) block += c;
    double acc = 0.0;
    for (const auto& row : counts) {
        long long row_total = 0;
        for (long long c : row) row_total += c;
        if (row_total == 0) continue;
        for (long long c : row) {
            if (c == 0) continue;
            const double joint = static_cast<double>(c) / block;
            const double cond = static_cast<double>(c) / row_total;
            acc -= joint * std::log(cond);
        }
    }
    return acc / std::log(static_cast<double>(nb));
}

}  // namespace

TEST_CASE("accumulate adds exactly 81 unit counts per event") {
    TransitionTensor t;
    const TransitionEvent e = event_with(3, 2, 7);
    t.accumulate(e);
    CHECK(t.total() == 81);
    CHECK(t.events() == 1);
    CHECK(t.count(3, 1, 2, 1, 7) == 1);
    CHECK(t.count(3, 5, 2, 9, 7) == 1);
    CHECK(t.count(3, 1, 2, 1, 6) == 0);
    CHECK(t.count(2, 1, 2, 1, 7) == 0);

    for (int n = 0; n < 9; ++n) t.accumulate(e);
    CHECK(t.total() == 810);
    CHECK(t.count(3, 4, 2, 4, 7) == 10);
}

TEST_CASE("accumulate rejects out-of-range events") {
    TransitionTensor t;
    TransitionEvent e = event_with(1, 1, 1);
    e.saccade = 9;
    CHECK_THROWS_AS(t.accumulate(e), CorruptEvent);
    e = event_with(1, 1, 1);
    e.pre[0] = 21;  // field 1 has 20 states
    CHECK_THROWS_AS(t.accumulate(e), CorruptEvent);
    e = event_with(1, 1, 1);
    e.post[4] = 51;  // the fovea has 50
    CHECK_THROWS_AS(t.accumulate(e), CorruptEvent);
    CHECK(t.total() == 0);  // failed accumulations leave no partial counts
}

TEST_CASE("row normalization is counts over total; empty rows stay flagged") {
    TransitionTensor t;
    t.increment(1, 1, 1, 2, 1, 3);
    t.increment(1, 1, 1, 2, 2, 1);
    const auto probs = t.row_probabilities(1, 1, 1, 2);
    REQUIRE(probs.has_value());
    CHECK((*probs)[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK((*probs)[1] == doctest::Approx(0.25).epsilon(1e-12));
    for (std::size_t j = 2; j < probs->size(); ++j) CHECK((*probs)[j] == 0.0);
    CHECK_FALSE(t.row_probabilities(1, 1, 2, 2).has_value());
    CHECK_FALSE(t.row_observed(2, 1, 1, 2));
}

TEST_CASE("conditional entropy: exact values for canonical blocks") {
    {
        TransitionTensor t;
        for (int i = 1; i <= 20; ++i) t.increment(1, 1, i, 2, (i % 20) + 1, 10 + i);
        CHECK(conditional_entropy(t, 1, 2, 1) == doctest::Approx(0.0).epsilon(1e-12));
    }
    {
        TransitionTensor t;
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) t.increment(1, 1, i, 2, j, 2);
        CHECK(conditional_entropy(t, 1, 2, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        TransitionTensor t;
        for (int i = 1; i <= 20; ++i) {
            t.increment(1, 1, i, 2, 5, 4);
            t.increment(1, 1, i, 2, 11, 4);
        }
        const double expected = std::log(2.0) / std::log(20.0);
        CHECK(conditional_entropy(t, 1, 2, 1) == doctest::Approx(expected).epsilon(1e-12));
    }
    {
        TransitionTensor t;
        CHECK_THROWS_AS(conditional_entropy(t, 1, 2, 1), UnobservedBlock);
    }
}

TEST_CASE("conditional entropy matches an independent evaluation on random blocks") {
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        TransitionTensor t;
        const int a = 1 + static_cast<int>(bounded_uniform(rng, 9));
        const int b = 1 + static_cast<int>(bounded_uniform(rng, 9));
        const int q = 1 + static_cast<int>(bounded_uniform(rng, 8));
        std::vector<std::vector<long long>> counts(
            t.state_count(a), std::vector<long long>(t.state_count(b), 0));
        for (int n = 0; n < 400; ++n) {
            const int i = 1 + static_cast<int>(bounded_uniform(rng, t.state_count(a)));
            const int j = 1 + static_cast<int>(bounded_uniform(rng, t.state_count(b)));
            const std::uint32_t by = 1 + bounded_uniform(rng, 5);
            counts[i - 1][j - 1] += by;
            t.increment(q, a, i, b, j, by);
        }
        const double got = conditional_entropy(t, a, b, q);
        const double want = reference_entropy(counts, t.state_count(b));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("merging two outcome columns never increases block entropy") {
    std::mt19937_64 rng(910);
    for (int trial = 0; trial < 200; ++trial) {
        const int na = 6, nb = 8;
        std::vector<std::vector<long long>> counts(na, std::vector<long long>(nb, 0));
        for (int n = 0; n < 100; ++n)
            counts[bounded_uniform(rng, na)][bounded_uniform(rng, nb)] += 1 + bounded_uniform(rng, 4);
        const double before = reference_entropy(counts, nb);
        const int j1 = static_cast<int>(bounded_uniform(rng, nb));
        int j2 = static_cast<int>(bounded_uniform(rng, nb - 1));
        if (j2 >= j1) ++j2;
        for (int i = 0; i < na; ++i) {
            counts[i][j1] += counts[i][j2];
            counts[i][j2] = 0;
        }
        const double after = reference_entropy(counts, nb);
        CHECK(after <= before + 1e-12);
    }
}

TEST_CASE("estimated probabilities converge to the sampling distribution") {
    // Known conditional distribution per row; the plug-in estimate must land
    // within 3*sqrt(p(1-p)/n) of every true cell probability.
    std::mt19937_64 rng(2718);
    TransitionTensor t;
    const int q = 4, a = 2, b = 6;
    const int nb = t.state_count(b);
    const int rows_tested = 5;
    std::vector<std::vector<double>> truth(rows_tested, std::vector<double>(nb, 0.0));
    for (auto& row : truth) {
        double sum = 0.0;
        for (double& p : row) {
            p = 0.05 + uniform_unit(rng);
            sum += p;
        }
        for (double& p : row) p /= sum;
    }
    const int n_per_row = 20000;
    for (int i = 1; i <= rows_tested; ++i) {
        const auto& row = truth[i - 1];
        for (int n = 0; n < n_per_row; ++n) {
            double u = uniform_unit(rng);
            int j = 1;
            for (int c = 0; c < nb; ++c) {
                if (u < row[c] || c == nb - 1) {
                    j = c + 1;
                    break;
                }
                u -= row[c];
            }
            t.increment(q, a, i, b, j);
        }
    }
    for (int i = 1; i <= rows_tested; ++i) {
        const auto probs = t.row_probabilities(q, a, i, b);
        REQUIRE(probs.has_value());
        double sum = 0.0;
        for (int j = 0; j < nb; ++j) {
            const double p = truth[i - 1][j];
            const double bound = 3.0 * std::sqrt(p * (1 - p) / n_per_row);
            CHECK(std::abs((*probs)[j] - p) <= bound);
            sum += (*probs)[j];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("similarity sets collect exactly the states above threshold") {
    TransitionTensor t;
    // From anchor (1,3), one certain transition per saccade, each to a
    // different field; plus sub-threshold noise elsewhere.
    const int targets[8] = {2, 3, 4, 5, 6, 7, 8, 9};
    for (int q = 1; q <= 8; ++q) t.increment(q, 1, 3, targets[q - 1], q, 10);
    // Noise: another anchor state, never crossing the threshold for (1,3).
    for (int j = 1; j <= 10; ++j) t.increment(1, 1, 4, 2, j, 1);

    const SimilaritySet set = similarity_set(t, 1, 3, 0.5);
    REQUIRE(set.members.size() == 8);
    std::set<int> fields;
    for (const auto& m : set.members) {
        fields.insert(m.field);
        CHECK(m.best_prob == 1.0);
        CHECK(m.witnesses == 1);
    }
    CHECK(fields == std::set<int>{2, 3, 4, 5, 6, 7, 8, 9});

    // Threshold above 1 empties every set; exactly 1.0 keeps certain ones.
    CHECK(similarity_set(t, 1, 3, 1.0 + 1e-9).members.empty());
    CHECK(similarity_set(t, 1, 3, 1.0).members.size() == 8);
    CHECK_THROWS_AS(similarity_set(t, 1, 3, 0.0), std::invalid_argument);
}

TEST_CASE("similarity member records the best witnessing saccade") {
    TransitionTensor t;
    // (1,1) -> (2,5) with probability 1 under q=3 and probability 0.6 under q=6.
    t.increment(3, 1, 1, 2, 5, 10);
    t.increment(6, 1, 1, 2, 5, 6);
    t.increment(6, 1, 1, 2, 6, 4);
    const SimilaritySet set = similarity_set(t, 1, 1, 0.5);
    REQUIRE(set.members.size() == 1);
    CHECK(set.members[0].field == 2);
    CHECK(set.members[0].state == 5);
    CHECK(set.members[0].best_saccade == 3);
    CHECK(set.members[0].best_prob == 1.0);
    CHECK(set.members[0].witnesses == 2);
}

TEST_CASE("block report ranks ideal deterministic couplings first") {
    TransitionTensor t;
    std::mt19937_64 rng(515);
    // Coupled blocks: identity mapping (entropy 0). Uncoupled blocks:
    // uniform rows (entropy 1).
    for (int q = 1; q <= 8; ++q) {
        const auto coupled = coupling_oracle(saccade(q));
        for (int a = 1; a <= 9; ++a)
            for (int b = 1; b <= 9; ++b) {
                const bool is_coupled =
                    std::find(coupled.begin(), coupled.end(), std::make_pair(a, b)) !=
                    coupled.end();
                for (int i = 1; i <= t.state_count(a); ++i) {
                    if (is_coupled) {
                        t.increment(q, a, i, b, 1 + (i - 1) % t.state_count(b), 8);
                    } else {
                        for (int j = 1; j <= t.state_count(b); ++j) t.increment(q, a, i, b, j, 1);
                    }
                }
            }
    }
    const BlockReport report = block_report(t);
    CHECK(report.all_match);
    for (const auto& sr : report.per_saccade) {
        CHECK(sr.ranking_matches);
        CHECK(sr.coupled_count == static_cast<int>(coupling_oracle(saccade(sr.q)).size()));
        CHECK(sr.mean_coupled_h == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(sr.mean_uncoupled_h == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("block report requires every block observed") {
    TransitionTensor t;
    t.increment(1, 1, 1, 2, 1, 5);
    CHECK_THROWS_AS(block_report(t), UnobservedBlock);
}

TEST_CASE("tensor persistence round-trips counts and header") {
    ScratchDir dir("tensor_io");
    TransitionTensor t;
    std::mt19937_64 rng(33);
    for (int n = 0; n < 5000; ++n) {
        TransitionEvent e;
        e.saccade = static_cast<std::uint8_t>(1 + bounded_uniform(rng, 8));
        for (int f = 1; f <= 9; ++f) {
            e.pre[f - 1] = static_cast<std::uint16_t>(1 + bounded_uniform(rng, t.state_count(f)));
            e.post[f - 1] = static_cast<std::uint16_t>(1 + bounded_uniform(rng, t.state_count(f)));
        }
        t.accumulate(e);
    }
    t.save(dir.path / "t.vft", R"({"note":"roundtrip"})");
    const LoadedTensor loaded = TransitionTensor::load(dir.path / "t.vft");
    CHECK(loaded.header_json == R"({"note":"roundtrip"})");
    CHECK(loaded.tensor == t);
    CHECK(loaded.tensor.total() == 5000u * 81u);

    // Corruption is detected via the stored totals.
    auto bytes = [&] {
        std::ifstream in(dir.path / "t.vft", std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }();
    bytes[bytes.size() - 1] = static_cast<char>(bytes[bytes.size() - 1] ^ 0x01);
    {
        std::ofstream out(dir.path / "bad.vft", std::ios::binary);
        out << bytes;
    }
    CHECK_THROWS_AS(TransitionTensor::load(dir.path / "bad.vft"), IoError);
}

TEST_CASE("tensor page layout is q-major with (a,i) rows and (b,j) columns") {
    TransitionTensor t;
    CHECK(t.rows() == 8 * 20 + 50);
    CHECK(t.row_index(1, 1) == 0);
    CHECK(t.row_index(1, 20) == 19);
    CHECK(t.row_index(2, 1) == 20);
    CHECK(t.row_index(5, 1) == 80);
    CHECK(t.row_index(6, 1) == 130);
    CHECK(t.row_index(9, 20) == 209);
    t.increment(2, 5, 3, 6, 4, 9);
    const auto page = t.page(2);
    CHECK(page[static_cast<std::size_t>(t.row_index(5, 3)) * t.cols() + t.col_index(6, 4)] == 9);
    CHECK(t.page(1)[static_cast<std::size_t>(t.row_index(5, 3)) * t.cols() + t.col_index(6, 4)] ==
          0);
}

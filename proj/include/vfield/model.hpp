#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfield/explorer.hpp"
#include "vfield/retina.hpp"

namespace vfield {

// Transition counts indexed by (q, a, i, b, j): saccade, pre-saccadic field
// and state, post-saccadic field and state. Stored dense, q-major, then a, i,
// b, j — each saccade page is the block matrix T of stacked per-(a,b)
// tables, rows (a,i), columns (b,j). Probabilities are raw count ratios;
// rows with no observations stay flagged as unobserved rather than falling
// back to a uniform row.
struct LoadedTensor;

class TransitionTensor {
  public:
    TransitionTensor();  // default state counts: 50 foveal, 20 peripheral
    explicit TransitionTensor(const std::array<int, kFieldCount>& state_counts);

    int state_count(int field) const { return n_[check_field(field) - 1]; }
    int rows() const { return side_; }
    int cols() const { return side_; }
    int row_index(int a, int i) const { return offset_[check_field(a) - 1] + check_state(a, i) - 1; }
    int col_index(int b, int j) const { return row_index(b, j); }

    void increment(int q, int a, int i, int b, int j, std::uint32_t by = 1);
    void accumulate(const TransitionEvent& event);

    std::uint32_t count(int q, int a, int i, int b, int j) const;
    std::uint64_t total() const { return total_; }
    long long events() const { return events_; }

    std::uint64_t row_total(int q, int a, int i, int b) const;
    std::uint64_t block_total(int q, int a, int b) const;
    bool row_observed(int q, int a, int i, int b) const { return row_total(q, a, i, b) > 0; }

    // Probabilities of one (q,a,i,b) row; nullopt when the row is unobserved.
    std::optional<std::vector<double>> row_probabilities(int q, int a, int i, int b) const;

    std::span<const std::uint32_t> page(int q) const;

    void save(const std::filesystem::path& path, const std::string& header_json) const;
    static LoadedTensor load(const std::filesystem::path& path);

    bool operator==(const TransitionTensor&) const = default;

  private:
    static int check_field(int f);
    int check_state(int f, int i) const;
    std::size_t cell(int q, int a, int i, int b, int j) const;

    std::array<int, kFieldCount> n_{};
    std::array<int, kFieldCount> offset_{};
    int side_ = 0;
    std::uint64_t total_ = 0;
    long long events_ = 0;
    std::vector<std::uint32_t> counts_;
};

struct LoadedTensor {
    TransitionTensor tensor;
    std::string header_json;
};

// Normalized conditional entropy of field b's post-saccadic state given
// field a's pre-saccadic state under saccade q, in [0, 1]: the plug-in
// conditional entropy of the block's count table divided by log of the
// column state count. Zero-probability terms contribute nothing. Throws
// UnobservedBlock when the block has no observations.
double conditional_entropy(const TransitionTensor& tensor, int a, int b, int q);

struct EntropyReport {
    // h[q-1][a-1][b-1]; NaN when the block is unobserved.
    std::array<std::array<std::array<double, kFieldCount>, kFieldCount>, kSaccadeCount> h{};
    std::array<std::array<std::array<std::uint64_t, kFieldCount>, kFieldCount>, kSaccadeCount>
        observations{};
};

EntropyReport compute_entropy_report(const TransitionTensor& tensor);

struct SimilarityMember {
    int field = 0;
    int state = 0;
    int best_saccade = 0;    // q of the highest-probability witness
    double best_prob = 0.0;
    int witnesses = 0;       // saccades meeting the threshold
};

// All states reachable from the anchor with probability >= epsilon under
// some saccade — the model's own notion of "same visual feature".
struct SimilaritySet {
    int anchor_field = 0;
    int anchor_state = 0;
    double epsilon = 0.0;
    std::vector<SimilarityMember> members;
};

SimilaritySet similarity_set(const TransitionTensor& tensor, int a, int i, double epsilon);

struct BlockRank {
    int a = 0;
    int b = 0;
    double h = 0.0;
    bool coupled = false;
    std::uint64_t observations = 0;
};

struct SaccadeBlockReport {
    int q = 0;
    std::vector<BlockRank> ranked;  // ascending entropy
    int coupled_count = 0;
    double mean_coupled_h = 0.0;
    double mean_uncoupled_h = 0.0;
    bool ranking_matches = false;  // the lowest-entropy blocks are exactly the coupled ones
};

struct BlockReport {
    std::array<SaccadeBlockReport, kSaccadeCount> per_saccade{};
    bool all_match = false;
};

// Ranks every block by entropy per saccade and annotates ground-truth
// coupling. Requires every block observed.
BlockReport block_report(const TransitionTensor& tensor);

}  // namespace vfield

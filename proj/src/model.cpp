#include "vfield/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "vfield/errors.hpp"

namespace vfield {

namespace {
std::array<int, kFieldCount> default_counts() {
    std::array<int, kFieldCount> n{};
    for (int f = 1; f <= kFieldCount; ++f) n[f - 1] = (f == kFoveaField) ? 50 : 20;
    return n;
}
}  // namespace

TransitionTensor::TransitionTensor() : TransitionTensor(default_counts()) {}

TransitionTensor::TransitionTensor(const std::array<int, kFieldCount>& state_counts)
    : n_(state_counts) {
    int off = 0;
    for (int f = 0; f < kFieldCount; ++f) {
        if (n_[f] <= 0 || n_[f] > 0xFFFF)
            throw std::invalid_argument("state count out of range for field " +
                                        std::to_string(f + 1));
        offset_[f] = off;
        off += n_[f];
    }
    side_ = off;
    counts_.assign(static_cast<std::size_t>(kSaccadeCount) * side_ * side_, 0);
}

int TransitionTensor::check_field(int f) {
    if (f < 1 || f > kFieldCount)
        throw CorruptEvent("field id " + std::to_string(f) + " outside 1..9");
    return f;
}

int TransitionTensor::check_state(int f, int i) const {
    if (i < 1 || i > n_[f - 1])
        throw CorruptEvent("state " + std::to_string(i) + " outside 1.." +
                           std::to_string(n_[f - 1]) + " for field " + std::to_string(f));
    return i;
}

std::size_t TransitionTensor::cell(int q, int a, int i, int b, int j) const {
    if (q < 1 || q > kSaccadeCount)
        throw CorruptEvent("saccade index " + std::to_string(q) + " outside 1..8");
    const std::size_t page = static_cast<std::size_t>(q - 1) * side_ * side_;
    const std::size_t row = static_cast<std::size_t>(row_index(a, i));
    const std::size_t col = static_cast<std::size_t>(col_index(b, j));
    return page + row * static_cast<std::size_t>(side_) + col;
}

void TransitionTensor::increment(int q, int a, int i, int b, int j, std::uint32_t by) {
    counts_[cell(q, a, i, b, j)] += by;
    total_ += by;
}

void TransitionTensor::accumulate(const TransitionEvent& event) {
    const int q = event.saccade;
    if (q < 1 || q > kSaccadeCount)
        throw CorruptEvent("event saccade " + std::to_string(q) + " outside 1..8");
    for (int a = 1; a <= kFieldCount; ++a) {
        check_state(a, event.pre[static_cast<std::size_t>(a - 1)]);
        check_state(a, event.post[static_cast<std::size_t>(a - 1)]);
    }
    for (int a = 1; a <= kFieldCount; ++a) {
        const int i = event.pre[static_cast<std::size_t>(a - 1)];
        for (int b = 1; b <= kFieldCount; ++b) {
            const int j = event.post[static_cast<std::size_t>(b - 1)];
            counts_[cell(q, a, i, b, j)] += 1;
        }
    }
    total_ += kFieldCount * kFieldCount;
    ++events_;
}

std::uint32_t TransitionTensor::count(int q, int a, int i, int b, int j) const {
    return counts_[cell(q, a, i, b, j)];
}

std::uint64_t TransitionTensor::row_total(int q, int a, int i, int b) const {
    const std::size_t first = cell(q, a, i, b, 1);
    std::uint64_t sum = 0;
    for (int j = 0; j < n_[b - 1]; ++j) sum += counts_[first + static_cast<std::size_t>(j)];
    return sum;
}

std::uint64_t TransitionTensor::block_total(int q, int a, int b) const {
    std::uint64_t sum = 0;
    for (int i = 1; i <= n_[a - 1]; ++i) sum += row_total(q, a, i, b);
    return sum;
}

std::optional<std::vector<double>> TransitionTensor::row_probabilities(int q, int a, int i,
                                                                       int b) const {
    const std::uint64_t totals = row_total(q, a, i, b);
    if (totals == 0) return std::nullopt;
    const std::size_t first = cell(q, a, i, b, 1);
    std::vector<double> probs(static_cast<std::size_t>(n_[b - 1]));
    for (int j = 0; j < n_[b - 1]; ++j)
        probs[static_cast<std::size_t>(j)] =
            static_cast<double>(counts_[first + static_cast<std::size_t>(j)]) /
            static_cast<double>(totals);
    return probs;
}

std::span<const std::uint32_t> TransitionTensor::page(int q) const {
    if (q < 1 || q > kSaccadeCount)
        throw std::invalid_argument("saccade index outside 1..8");
    const std::size_t sz = static_cast<std::size_t>(side_) * side_;
    return {counts_.data() + static_cast<std::size_t>(q - 1) * sz, sz};
}

// --- persistence -------------------------------------------------------------

namespace {
constexpr char kTensorMagic[8] = {'V', 'F', 'T', 'E', 'N', 'S', '0', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    std::uint8_t b[4] = {static_cast<std::uint8_t>(v & 0xFF),
                         static_cast<std::uint8_t>((v >> 8) & 0xFF),
                         static_cast<std::uint8_t>((v >> 16) & 0xFF),
                         static_cast<std::uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in, const std::filesystem::path& path) {
    std::uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw IoError(path.string() + ": truncated tensor file");
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v & 0xFFFFFFFFull));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

std::uint64_t get_u64(std::istream& in, const std::filesystem::path& path) {
    const std::uint64_t lo = get_u32(in, path);
    const std::uint64_t hi = get_u32(in, path);
    return lo | (hi << 32);
}
}  // namespace

void TransitionTensor::save(const std::filesystem::path& path,
                            const std::string& header_json) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out.write(kTensorMagic, sizeof(kTensorMagic));
    put_u32(out, static_cast<std::uint32_t>(header_json.size()));
    out.write(header_json.data(), static_cast<std::streamsize>(header_json.size()));
    for (int f = 0; f < kFieldCount; ++f) put_u32(out, static_cast<std::uint32_t>(n_[f]));
    put_u64(out, total_);
    put_u64(out, static_cast<std::uint64_t>(events_));
    // Counts in (q, a, i, b, j) order, little-endian u32.
    for (std::uint32_t c : counts_) put_u32(out, c);
    out.flush();
    if (!out) throw IoError(path.string() + ": write failed");
}

LoadedTensor TransitionTensor::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open");
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8 || std::memcmp(magic, kTensorMagic, 8) != 0)
        throw IoError(path.string() + ": not a transition tensor file");
    const std::uint32_t len = get_u32(in, path);
    std::string header(len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(len));
    if (static_cast<std::uint32_t>(in.gcount()) != len)
        throw IoError(path.string() + ": truncated header");
    std::array<int, kFieldCount> n{};
    for (int f = 0; f < kFieldCount; ++f) n[f] = static_cast<int>(get_u32(in, path));
    TransitionTensor t(n);
    t.total_ = get_u64(in, path);
    t.events_ = static_cast<long long>(get_u64(in, path));
    for (auto& c : t.counts_) c = get_u32(in, path);
    std::uint64_t check = 0;
    for (std::uint32_t c : t.counts_) check += c;
    if (check != t.total_) throw IoError(path.string() + ": count total mismatch");
    return {std::move(t), std::move(header)};
}

// --- analyses ----------------------------------------------------------------

double conditional_entropy(const TransitionTensor& tensor, int a, int b, int q) {
    const std::uint64_t block = tensor.block_total(q, a, b);
    if (block == 0)
        throw UnobservedBlock("block (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                              ", q=" + std::to_string(q) + ") has no observations");
    const int na = tensor.state_count(a);
    const int nb = tensor.state_count(b);
    double acc = 0.0;
    for (int i = 1; i <= na; ++i) {
        const std::uint64_t row = tensor.row_total(q, a, i, b);
        if (row == 0) continue;
        for (int j = 1; j <= nb; ++j) {
            const std::uint32_t c = tensor.count(q, a, i, b, j);
            if (c == 0) continue;
            const double joint = static_cast<double>(c) / static_cast<double>(block);
            acc += joint * std::log(static_cast<double>(c) / static_cast<double>(row));
        }
    }
    return -acc / std::log(static_cast<double>(nb));
}

EntropyReport compute_entropy_report(const TransitionTensor& tensor) {
    EntropyReport report;
    for (int q = 1; q <= kSaccadeCount; ++q)
        for (int a = 1; a <= kFieldCount; ++a)
            for (int b = 1; b <= kFieldCount; ++b) {
                const std::uint64_t obs = tensor.block_total(q, a, b);
                report.observations[q - 1][a - 1][b - 1] = obs;
                report.h[q - 1][a - 1][b - 1] =
                    obs == 0 ? std::numeric_limits<double>::quiet_NaN()
                             : conditional_entropy(tensor, a, b, q);
            }
    return report;
}

SimilaritySet similarity_set(const TransitionTensor& tensor, int a, int i, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    tensor.state_count(a);  // validates a
    SimilaritySet set;
    set.anchor_field = a;
    set.anchor_state = i;
    set.epsilon = epsilon;
    for (int b = 1; b <= kFieldCount; ++b) {
        const int nb = tensor.state_count(b);
        for (int j = 1; j <= nb; ++j) {
            SimilarityMember m;
            for (int q = 1; q <= kSaccadeCount; ++q) {
                const std::uint64_t row = tensor.row_total(q, a, i, b);
                if (row == 0) continue;
                const double p = static_cast<double>(tensor.count(q, a, i, b, j)) /
                                 static_cast<double>(row);
                if (p >= epsilon) {
                    ++m.witnesses;
                    if (p > m.best_prob) {
                        m.best_prob = p;
                        m.best_saccade = q;
                    }
                }
            }
            if (m.witnesses > 0) {
                m.field = b;
                m.state = j;
                set.members.push_back(m);
            }
        }
    }
    return set;
}

BlockReport block_report(const TransitionTensor& tensor) {
    BlockReport report;
    report.all_match = true;
    for (int q = 1; q <= kSaccadeCount; ++q) {
        SaccadeBlockReport& sr = report.per_saccade[q - 1];
        sr.q = q;
        const auto coupled_pairs = coupling_oracle(saccade(q));
        auto is_coupled = [&](int a, int b) {
            return std::find(coupled_pairs.begin(), coupled_pairs.end(), std::make_pair(a, b)) !=
                   coupled_pairs.end();
        };
        double sum_c = 0.0, sum_u = 0.0;
        int n_c = 0, n_u = 0;
        for (int a = 1; a <= kFieldCount; ++a)
            for (int b = 1; b <= kFieldCount; ++b) {
                BlockRank r;
                r.a = a;
                r.b = b;
                r.observations = tensor.block_total(q, a, b);
                r.h = conditional_entropy(tensor, a, b, q);  // throws on empty block
                r.coupled = is_coupled(a, b);
                if (r.coupled) {
                    sum_c += r.h;
                    ++n_c;
                } else {
                    sum_u += r.h;
                    ++n_u;
                }
                sr.ranked.push_back(r);
            }
        std::stable_sort(sr.ranked.begin(), sr.ranked.end(),
                         [](const BlockRank& x, const BlockRank& y) { return x.h < y.h; });
        sr.coupled_count = n_c;
        sr.mean_coupled_h = n_c ? sum_c / n_c : 0.0;
        sr.mean_uncoupled_h = n_u ? sum_u / n_u : 0.0;
        sr.ranking_matches = true;
        for (int r = 0; r < n_c; ++r)
            if (!sr.ranked[static_cast<std::size_t>(r)].coupled) sr.ranking_matches = false;
        report.all_match = report.all_match && sr.ranking_matches;
    }
    return report;
}

}  // namespace vfield

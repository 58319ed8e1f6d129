#include "vfield/exports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vfield/errors.hpp"

namespace vfield {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    return out;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_entropy_csv(const EntropyReport& report, int q, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "a\\b";
    for (int b = 1; b <= kFieldCount; ++b) out << ",b" << b;
    out << "\n";
    for (int a = 1; a <= kFieldCount; ++a) {
        out << "a" << a;
        for (int b = 1; b <= kFieldCount; ++b) {
            const double h = report.h[q - 1][a - 1][b - 1];
            out << "," << (std::isnan(h) ? std::string("NA") : fmt(h));
        }
        out << "\n";
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

void write_entropy_counts_csv(const EntropyReport& report, int q,
                              const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "a\\b";
    for (int b = 1; b <= kFieldCount; ++b) out << ",b" << b;
    out << "\n";
    for (int a = 1; a <= kFieldCount; ++a) {
        out << "a" << a;
        for (int b = 1; b <= kFieldCount; ++b) out << "," << report.observations[q - 1][a - 1][b - 1];
        out << "\n";
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

void write_page_csv(const TransitionTensor& tensor, int q, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "row";
    for (int b = 1; b <= kFieldCount; ++b)
        for (int j = 1; j <= tensor.state_count(b); ++j) out << ",b" << b << "_j" << j;
    out << "\n";
    for (int a = 1; a <= kFieldCount; ++a) {
        const int na = tensor.state_count(a);
        for (int i = 1; i <= na; ++i) {
            out << "a" << a << "_i" << i;
            for (int b = 1; b <= kFieldCount; ++b) {
                const auto probs = tensor.row_probabilities(q, a, i, b);
                const int nb = tensor.state_count(b);
                for (int j = 0; j < nb; ++j) {
                    if (probs)
                        out << "," << fmt((*probs)[static_cast<std::size_t>(j)]);
                    else
                        out << ",NA";
                }
            }
            out << "\n";
        }
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

GrayImage render_page(const TransitionTensor& tensor, int q, int cell_scale) {
    const int side = tensor.rows();
    const int sep = 1;
    const int size = side * cell_scale + (kFieldCount - 1) * sep;
    GrayImage img(size, size, 255);

    // Pixel offset of a tensor row/col index, accounting for block gridlines.
    auto pix = [&](int rc) {
        int block = 0, acc = 0;
        for (int f = 1; f <= kFieldCount; ++f) {
            if (rc < acc + tensor.state_count(f)) {
                block = f - 1;
                break;
            }
            acc += tensor.state_count(f);
        }
        return rc * cell_scale + block * sep;
    };

    for (int a = 1; a <= kFieldCount; ++a) {
        const int na = tensor.state_count(a);
        for (int i = 1; i <= na; ++i) {
            const int row = tensor.row_index(a, i);
            for (int b = 1; b <= kFieldCount; ++b) {
                const auto probs = tensor.row_probabilities(q, a, i, b);
                const int nb = tensor.state_count(b);
                for (int j = 1; j <= nb; ++j) {
                    const int col = tensor.col_index(b, j);
                    const double p = probs ? (*probs)[static_cast<std::size_t>(j - 1)] : 0.0;
                    const auto v = static_cast<std::uint8_t>(std::lround(255.0 * p));
                    const int px = pix(col), py = pix(row);
                    for (int dy = 0; dy < cell_scale; ++dy)
                        for (int dx = 0; dx < cell_scale; ++dx) img.at(px + dx, py + dy) = v;
                }
            }
        }
    }
    return img;
}

void write_block_report_csv(const BlockReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "q,rank,a,b,entropy,coupled,observations\n";
    for (const SaccadeBlockReport& sr : report.per_saccade) {
        int rank = 1;
        for (const BlockRank& r : sr.ranked) {
            out << sr.q << "," << rank++ << "," << r.a << "," << r.b << "," << fmt(r.h) << ","
                << (r.coupled ? 1 : 0) << "," << r.observations << "\n";
        }
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

std::string block_report_summary(const BlockReport& report) {
    std::ostringstream out;
    for (const SaccadeBlockReport& sr : report.per_saccade) {
        const Saccade& s = saccade(sr.q);
        out << "q=" << sr.q << " (" << (s.dx > 0 ? "+" : "") << s.dx << ","
            << (s.dy > 0 ? "+" : "") << s.dy << "): coupled blocks " << sr.coupled_count
            << ", mean H coupled " << fmt(sr.mean_coupled_h) << ", uncoupled "
            << fmt(sr.mean_uncoupled_h) << ", lowest ranks "
            << (sr.ranking_matches ? "match coupling" : "DO NOT match coupling") << "\n";
    }
    out << "overall: " << (report.all_match ? "coupled blocks rank lowest for every saccade"
                                            : "ranking mismatch present")
        << "\n";
    return out.str();
}

void write_similarity_csv(const std::vector<SimilaritySet>& sets,
                          const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "anchor_field,anchor_state,member_field,member_state,best_prob,best_q,best_dx,best_dy,"
           "witnesses\n";
    for (const SimilaritySet& set : sets) {
        if (set.members.empty()) {
            out << set.anchor_field << "," << set.anchor_state << ",,,,,,,0\n";
            continue;
        }
        for (const SimilarityMember& m : set.members) {
            const Saccade& s = saccade(m.best_saccade);
            out << set.anchor_field << "," << set.anchor_state << "," << m.field << "," << m.state
                << "," << fmt(m.best_prob) << "," << m.best_saccade << "," << s.dx << "," << s.dy
                << "," << m.witnesses << "\n";
        }
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

GrayImage render_similarity_gallery(const SimilaritySet& set,
                                    const std::array<Codebook, kFieldCount>& codebooks) {
    const int scale = 8;
    const int pad = 4;
    const int cell = kFieldSize * scale;  // largest tile (fovea)
    // Columns: anchor, separator, fields 1..9.
    GrayImage img(pad + (kFieldCount + 1) * (cell + pad) + pad, cell + 2 * pad, 32);

    auto draw_tile = [&](const Codebook& cb, int state, int slot) {
        const int tile = (cb.field == kFoveaField) ? kFieldSize : kFieldSize / kMaskStride;
        const int tscale = cell / tile;
        const int gx = pad + slot * (cell + pad) + (slot > 0 ? pad : 0);
        const int gy = pad;
        const double* row = cb.prototypes.data() + static_cast<std::size_t>(state - 1) * cb.dim;
        for (int py = 0; py < cell; ++py)
            for (int px = 0; px < cell; ++px) {
                const double v = row[(py / tscale) * tile + (px / tscale)];
                img.at(gx + px, gy + py) =
                    static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
    };

    draw_tile(codebooks[static_cast<std::size_t>(set.anchor_field - 1)], set.anchor_state, 0);
    for (const SimilarityMember& m : set.members)
        draw_tile(codebooks[static_cast<std::size_t>(m.field - 1)], m.state, m.field);
    return img;
}

}  // namespace vfield

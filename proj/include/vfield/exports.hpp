#pragma once

#include <filesystem>
#include <vector>

#include "vfield/codebook.hpp"
#include "vfield/model.hpp"

namespace vfield {

// Analysis artifacts: CSV tables and raster renderings of the model. All
// output is deterministic byte-for-byte given the same inputs.

void write_entropy_csv(const EntropyReport& report, int q, const std::filesystem::path& path);
void write_entropy_counts_csv(const EntropyReport& report, int q,
                              const std::filesystem::path& path);

// Full probability page for one saccade: rows (a,i), columns (b,j);
// unobserved rows export as NA.
void write_page_csv(const TransitionTensor& tensor, int q, const std::filesystem::path& path);

// Grayscale heatmap of one probability page, blocks separated by gridlines,
// laid out exactly like the CSV.
GrayImage render_page(const TransitionTensor& tensor, int q, int cell_scale = 2);

void write_block_report_csv(const BlockReport& report, const std::filesystem::path& path);
std::string block_report_summary(const BlockReport& report);

void write_similarity_csv(const std::vector<SimilaritySet>& sets,
                          const std::filesystem::path& path);

// One anchor's similarity set rendered as prototype tiles: anchor on the
// left, then one column per field 1..9 (blank where no member matched).
GrayImage render_similarity_gallery(const SimilaritySet& set,
                                    const std::array<Codebook, kFieldCount>& codebooks);

}  // namespace vfield

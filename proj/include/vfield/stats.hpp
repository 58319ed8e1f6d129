#pragma once

#include <vector>

namespace vfield {

double mean(const std::vector<double>& v);

// One-sided Wilcoxon-Mann-Whitney rank-sum test: p-value for the alternative
// that x values are stochastically smaller than y values. Normal
// approximation with tie correction and continuity correction.
double rank_sum_p_less(const std::vector<double>& x, const std::vector<double>& y);

// Pearson chi-square statistic against a uniform expectation over bins.
double chi_square_uniform(const std::vector<long long>& bin_counts);

}  // namespace vfield

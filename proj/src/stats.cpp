#include "vfield/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vfield {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double rank_sum_p_less(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n1 = x.size(), n2 = y.size();
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("rank-sum test needs non-empty samples");
    struct Tagged {
        double v;
        bool from_x;
    };
    std::vector<Tagged> all;
    all.reserve(n1 + n2);
    for (double v : x) all.push_back({v, true});
    for (double v : y) all.push_back({v, false});
    std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.v < b.v; });

    const std::size_t n = n1 + n2;
    double rank_sum_x = 0.0;
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && all[j].v == all[i].v) ++j;
        const double t = static_cast<double>(j - i);
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].from_x) rank_sum_x += avg_rank;
        tie_term += t * t * t - t;
        i = j;
    }
    const double fn1 = static_cast<double>(n1), fn2 = static_cast<double>(n2),
                 fn = static_cast<double>(n);
    const double u = rank_sum_x - fn1 * (fn1 + 1.0) / 2.0;
    const double mu = fn1 * fn2 / 2.0;
    double var = fn1 * fn2 / 12.0 * ((fn + 1.0) - tie_term / (fn * (fn - 1.0)));
    if (var <= 0.0) return u < mu ? 0.0 : 1.0;  // all values tied
    const double z = (u - mu + 0.5) / std::sqrt(var);
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double chi_square_uniform(const std::vector<long long>& bin_counts) {
    if (bin_counts.empty()) throw std::invalid_argument("chi-square needs bins");
    long long total = 0;
    for (long long c : bin_counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(bin_counts.size());
    if (expected <= 0.0) throw std::invalid_argument("chi-square needs observations");
    double stat = 0.0;
    for (long long c : bin_counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

}  // namespace vfield

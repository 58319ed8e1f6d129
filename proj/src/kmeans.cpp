#include "vfield/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>

#include "vfield/errors.hpp"
#include "vfield/rng.hpp"
#include "vfield/threading.hpp"

namespace vfield {

namespace {

constexpr std::size_t kChunk = 8192;

struct BytesHash {
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

bool has_k_distinct(const std::uint8_t* data, std::size_t n, int dim, int k) {
    std::unordered_set<std::string_view, BytesHash> seen;
    seen.reserve(static_cast<std::size_t>(k) * 2);
    for (std::size_t i = 0; i < n; ++i) {
        seen.insert(std::string_view(reinterpret_cast<const char*>(data) + i * dim,
                                     static_cast<std::size_t>(dim)));
        if (static_cast<int>(seen.size()) >= k) return true;
    }
    return false;
}

double sq_dist(const double* x, const double* c, int dim) {
    double acc = 0.0;
    for (int j = 0; j < dim; ++j) {
        const double d = x[j] - c[j];
        acc += d * d;
    }
    return acc;
}

void to_double(const std::uint8_t* row, double* out, int dim) {
    for (int j = 0; j < dim; ++j) out[j] = static_cast<double>(row[j]);
}

// Per-sample squared distance to the nearest centroid, plus the argmin.
// Ties resolve to the lowest centroid index.
void assign_all(const std::uint8_t* data, std::size_t n, int dim, int k,
                const std::vector<double>& centroids, std::vector<std::int32_t>& assign,
                std::vector<double>& min_dist) {
    parallel_chunks(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (std::size_t i = begin; i < end; ++i) {
            to_double(data + i * dim, x.data(), dim);
            double best = sq_dist(x.data(), centroids.data(), dim);
            int best_c = 0;
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(x.data(), centroids.data() + static_cast<std::size_t>(c) * dim, dim);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            assign[i] = best_c;
            min_dist[i] = best;
        }
    });
}

double ordered_sum(const std::vector<double>& chunk_partials) {
    double total = 0.0;
    for (double v : chunk_partials) total += v;
    return total;
}

}  // namespace

KMeansResult kmeans(const std::uint8_t* data, std::size_t n, int dim, int k, std::uint64_t seed,
                    const KMeansOptions& options) {
    if (dim <= 0) throw std::invalid_argument("kmeans: dim must be positive");
    if (k <= 0) throw std::invalid_argument("kmeans: k must be positive");
    if (n == 0) throw DegenerateData("kmeans: no samples");
    if (!has_k_distinct(data, n, dim, k))
        throw DegenerateData("kmeans: fewer than k=" + std::to_string(k) + " distinct samples");

    const std::size_t kd = static_cast<std::size_t>(k) * dim;
    std::mt19937_64 rng(seed);
    std::vector<double> centroids(kd, 0.0);
    std::vector<double> min_dist(n, 0.0);

    // k-means++ seeding.
    {
        const std::size_t first = bounded_uniform(rng, static_cast<std::uint32_t>(n));
        to_double(data + first * dim, centroids.data(), dim);
        parallel_chunks(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t) {
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (std::size_t i = begin; i < end; ++i) {
                to_double(data + i * dim, x.data(), dim);
                min_dist[i] = sq_dist(x.data(), centroids.data(), dim);
            }
        });
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) total += min_dist[i];
            // With >= k distinct samples some mass is always left.
            const double r = uniform_unit(rng) * total;
            std::size_t pick = n;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (min_dist[i] <= 0.0) continue;
                cum += min_dist[i];
                pick = i;
                if (cum >= r) break;
            }
            if (pick == n) throw DegenerateData("kmeans: seeding ran out of mass");
            double* row = centroids.data() + static_cast<std::size_t>(c) * dim;
            to_double(data + pick * dim, row, dim);
            parallel_chunks(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t) {
                std::vector<double> x(static_cast<std::size_t>(dim));
                for (std::size_t i = begin; i < end; ++i) {
                    to_double(data + i * dim, x.data(), dim);
                    const double d = sq_dist(x.data(), row, dim);
                    if (d < min_dist[i]) min_dist[i] = d;
                }
            });
        }
    }

    const std::size_t chunks = chunk_count(n, kChunk);
    std::vector<std::int32_t> assign(n, 0);
    std::vector<double> chunk_inertia(chunks, 0.0);
    // Sample values are integers, so coordinate sums are exact in int64 and
    // the reduction order cannot affect the result.
    std::vector<std::int64_t> chunk_sums(chunks * kd);
    std::vector<std::int64_t> chunk_counts(chunks * static_cast<std::size_t>(k));

    auto assign_and_measure = [&]() -> double {
        assign_all(data, n, dim, k, centroids, assign, min_dist);
        parallel_chunks(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
            double acc = 0.0;
            for (std::size_t i = begin; i < end; ++i) acc += min_dist[i];
            chunk_inertia[chunk] = acc;
        });
        return ordered_sum(chunk_inertia);
    };

    auto update_centroids = [&]() {
        std::fill(chunk_sums.begin(), chunk_sums.end(), 0);
        std::fill(chunk_counts.begin(), chunk_counts.end(), 0);
        parallel_chunks(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
            std::int64_t* sums = chunk_sums.data() + chunk * kd;
            std::int64_t* counts = chunk_counts.data() + chunk * k;
            for (std::size_t i = begin; i < end; ++i) {
                const int c = assign[i];
                const std::uint8_t* row = data + i * dim;
                std::int64_t* dst = sums + static_cast<std::size_t>(c) * dim;
                for (int j = 0; j < dim; ++j) dst[j] += row[j];
                ++counts[c];
            }
        });
        std::vector<std::int64_t> sums(kd, 0);
        std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t ch = 0; ch < chunks; ++ch) {
            const std::int64_t* s = chunk_sums.data() + ch * kd;
            const std::int64_t* c = chunk_counts.data() + ch * k;
            for (std::size_t j = 0; j < kd; ++j) sums[j] += s[j];
            for (int j = 0; j < k; ++j) counts[j] += c[j];
        }
        std::vector<int> empties;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                empties.push_back(c);
                continue;
            }
            double* row = centroids.data() + static_cast<std::size_t>(c) * dim;
            const std::int64_t* s = sums.data() + static_cast<std::size_t>(c) * dim;
            for (int j = 0; j < dim; ++j)
                row[j] = static_cast<double>(s[j]) / static_cast<double>(counts[c]);
        }
        // Reseed each empty cluster to the unclaimed sample farthest from its
        // assigned centroid.
        std::vector<std::size_t> used;
        for (int c : empties) {
            std::size_t far_idx = n;
            double far_dist = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (min_dist[i] > far_dist &&
                    std::find(used.begin(), used.end(), i) == used.end()) {
                    far_dist = min_dist[i];
                    far_idx = i;
                }
            }
            if (far_idx == n) break;
            used.push_back(far_idx);
            to_double(data + far_idx * dim,
                      centroids.data() + static_cast<std::size_t>(c) * dim, dim);
        }
    };

    auto count_empties = [&]() {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];
        int empties = 0;
        for (int c = 0; c < k; ++c)
            if (counts[c] == 0) ++empties;
        return empties;
    };

    KMeansResult result;
    result.k = k;
    result.dim = dim;
    double inertia = assign_and_measure();
    result.init_inertia = inertia;
    int iterations = 0;
    while (iterations < options.max_iterations) {
        update_centroids();
        const double next = assign_and_measure();
        ++iterations;
        const double prev = inertia;
        inertia = next;
        if (prev <= 0.0) break;
        if ((prev - next) / prev < options.rel_tolerance) break;
    }
    for (int guard = 0; guard < 16 && count_empties() > 0; ++guard) {
        update_centroids();
        inertia = assign_and_measure();
        ++iterations;
    }
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (std::memcmp(centroids.data() + static_cast<std::size_t>(a) * dim,
                            centroids.data() + static_cast<std::size_t>(b) * dim,
                            sizeof(double) * static_cast<std::size_t>(dim)) == 0)
                throw DegenerateData("kmeans: duplicate centroids at convergence");
    result.iterations = iterations;
    result.inertia = inertia;
    result.centroids = std::move(centroids);
    return result;
}

}  // namespace vfield

#pragma once

#include <cstdint>
#include <vector>

namespace vfield {

struct KMeansOptions {
    double rel_tolerance = 1e-4;  // stop when relative inertia improvement falls below this
    int max_iterations = 300;
};

struct KMeansResult {
    int k = 0;
    int dim = 0;
    std::vector<double> centroids;  // k * dim, row-major
    int iterations = 0;
    double init_inertia = 0.0;  // inertia of the k-means++ initialization
    double inertia = 0.0;       // final inertia
};

// Lloyd's algorithm with k-means++ seeding over byte-valued samples.
// Squared-Euclidean distortion; ties in assignment go to the lowest centroid
// index; clusters that empty out are reseeded to the sample farthest from
// its assigned centroid. Deterministic for a fixed seed regardless of the
// number of worker threads.
//
// Throws DegenerateData when the data holds fewer than k distinct samples.
KMeansResult kmeans(const std::uint8_t* data, std::size_t n, int dim, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace vfield

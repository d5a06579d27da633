#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kerrtda/kernels.hpp"

namespace kerrtda::kernels::omp {

namespace {

struct Candidate {
    double gap;
    std::size_t index;
};

// Larger gap wins; equal gaps go to the lower index, so the merged result does
// not depend on how iterations were split across threads.
bool better(const Candidate& a, const Candidate& b) {
    return a.gap > b.gap || (a.gap == b.gap && a.index < b.index);
}

}  // namespace

std::vector<double> pairwise_distances(const PointCloud& cloud) {
    const auto n = static_cast<std::int64_t>(cloud.size());
    std::vector<double> out(static_cast<std::size_t>(n * n), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) {
            if (j == i) continue;
            out[static_cast<std::size_t>(i * n + j)] =
                std::sqrt(squared_distance(cloud, static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        }
    }
    return out;
}

std::vector<std::size_t> farthest_point_order(const PointCloud& cloud, std::size_t k, std::size_t start) {
    const std::size_t n = cloud.size();
    std::vector<std::size_t> order;
    if (n == 0 || k == 0) return order;
    const std::size_t target = std::min(k, n);
    order.reserve(target);
    std::vector<double> gap(n, std::numeric_limits<double>::infinity());
    std::size_t current = start;
    const auto count = static_cast<std::int64_t>(n);
    while (true) {
        order.push_back(current);
        gap[current] = -1.0;
        if (order.size() == target) break;
        Candidate best{-1.0, n};
#pragma omp parallel
        {
            Candidate local{-1.0, n};
#pragma omp for schedule(static) nowait
            for (std::int64_t ii = 0; ii < count; ++ii) {
                const auto i = static_cast<std::size_t>(ii);
                if (gap[i] < 0.0) continue;
                const double d = squared_distance(cloud, i, current);
                if (d < gap[i]) gap[i] = d;
                const Candidate c{gap[i], i};
                if (better(c, local)) local = c;
            }
#pragma omp critical(kerrtda_fps_argmax)
            if (better(local, best)) best = local;
        }
        current = best.index;
    }
    return order;
}

std::vector<Neighbor> nearest_neighbors(const PointCloud& cloud, double exclude_within) {
    const std::size_t n = cloud.size();
    std::vector<Neighbor> out(n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t ii = 0; ii < count; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        Neighbor best{n, std::numeric_limits<double>::infinity()};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = squared_distance(cloud, i, j);
            if (d <= exclude_within) continue;
            if (d < best.squared_distance) best = {j, d};
        }
        out[i] = best;
    }
    return out;
}

}  // namespace kerrtda::kernels::omp

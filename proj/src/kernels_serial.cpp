#include <algorithm>
#include <cmath>
#include <limits>

#include "kerrtda/kernels.hpp"

namespace kerrtda::kernels {

double squared_distance(const PointCloud& cloud, std::size_t i, std::size_t j) {
    const auto p = cloud.point(i);
    const auto q = cloud.point(j);
    double acc = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        const double diff = p[c] - q[c];
        acc += diff * diff;
    }
    return acc;
}

namespace serial {

std::vector<double> pairwise_distances(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::sqrt(squared_distance(cloud, i, j));
            out[i * n + j] = d;
            out[j * n + i] = d;
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
    // Selected points carry −1 so they never win the argmax.
    std::vector<double> gap(n, std::numeric_limits<double>::infinity());
    std::size_t current = start;
    while (true) {
        order.push_back(current);
        gap[current] = -1.0;
        if (order.size() == target) break;
        std::size_t best = n;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (gap[i] < 0.0) continue;
            const double d = squared_distance(cloud, i, current);
            if (d < gap[i]) gap[i] = d;
            if (gap[i] > best_gap) {
                best_gap = gap[i];
                best = i;
            }
        }
        current = best;
    }
    return order;
}

std::vector<Neighbor> nearest_neighbors(const PointCloud& cloud, double exclude_within) {
    const std::size_t n = cloud.size();
    std::vector<Neighbor> out(n);
    for (std::size_t i = 0; i < n; ++i) {
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

}  // namespace serial
}  // namespace kerrtda::kernels

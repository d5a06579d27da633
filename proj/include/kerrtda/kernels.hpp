#pragma once

#include <cstddef>
#include <vector>

#include "kerrtda/point_cloud.hpp"

// Data-parallel inner loops of the pipeline. Every kernel has a serial
// reference and an OpenMP version; the two must agree bit-for-bit (the
// reductions are order-independent by construction), which the unit tests
// and the benchmark both rely on.
namespace kerrtda::kernels {

struct Neighbor {
    std::size_t index = 0;
    double squared_distance = 0.0;
};

double squared_distance(const PointCloud& cloud, std::size_t i, std::size_t j);

namespace serial {

// Full n×n Euclidean distance matrix, row-major.
std::vector<double> pairwise_distances(const PointCloud& cloud);

// Greedy farthest-point order of min(k, n) indices starting at `start`;
// ties go to the lowest index.
std::vector<std::size_t> farthest_point_order(const PointCloud& cloud, std::size_t k, std::size_t start);

// Nearest other point for each point; ties go to the lowest index. Points
// at squared distance <= exclude_within are not candidates; a point with no
// candidate gets index == cloud.size() and an infinite distance.
std::vector<Neighbor> nearest_neighbors(const PointCloud& cloud, double exclude_within = -1.0);

}  // namespace serial

namespace omp {

std::vector<double> pairwise_distances(const PointCloud& cloud);
std::vector<std::size_t> farthest_point_order(const PointCloud& cloud, std::size_t k, std::size_t start);
std::vector<Neighbor> nearest_neighbors(const PointCloud& cloud, double exclude_within = -1.0);

}  // namespace omp

}  // namespace kerrtda::kernels

#pragma once

#include <cstddef>
#include <cstdint>

#include "kerrtda/point_cloud.hpp"
#include "kerrtda/rng.hpp"

namespace support {

inline kerrtda::PointCloud random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
    kerrtda::Rng rng(seed);
    std::vector<double> coords;
    for (std::size_t i = 0; i < n * dim; ++i) coords.push_back(rng.uniform());
    return kerrtda::PointCloud(dim, std::move(coords));
}

// Points on a small integer lattice: many exactly tied distances.
inline kerrtda::PointCloud lattice_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
    kerrtda::Rng rng(seed);
    std::vector<double> coords;
    for (std::size_t i = 0; i < n * dim; ++i) coords.push_back(static_cast<double>(static_cast<int>(rng.uniform() * 4.0)));
    return kerrtda::PointCloud(dim, std::move(coords));
}

// The 200-cloud mix used for oracle equivalence: sizes 1..20, dimensions
// 1..3, one in four on a lattice.
inline kerrtda::PointCloud oracle_cloud(std::size_t index) {
    const std::size_t n = 1 + index % 20;
    const std::size_t dim = 1 + (index / 20) % 3;
    const std::uint64_t seed = kerrtda::derive_seed(0xC10D, index);
    return index % 4 == 3 ? lattice_cloud(n, dim, seed) : random_cloud(n, dim, seed);
}

}  // namespace support

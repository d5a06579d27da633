#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "kerrtda/point_cloud.hpp"

namespace kerrtda {

// Symmetric Euclidean distances with a zero diagonal, stored densely.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    // Takes an n×n row-major matrix; throws std::invalid_argument unless it is
    // square, symmetric, non-negative and has a zero diagonal.
    DistanceMatrix(std::size_t n, std::vector<double> values);

    static DistanceMatrix from_cloud(const PointCloud& cloud);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    const double* row(std::size_t i) const { return values_.data() + i * n_; }
    double max_distance() const;
    DistanceMatrix scaled(double factor) const;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

struct Feature {
    int dim = 0;
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();

    bool essential() const { return death == std::numeric_limits<double>::infinity(); }
    double lifetime() const { return death - birth; }
    friend auto operator<=>(const Feature&, const Feature&) = default;
};

struct PersistenceDiagram {
    std::vector<Feature> features;

    std::vector<Feature> of_dim(int dim) const;
    std::size_t count(int dim) const;
    // Features sorted by (dim, birth, death); diagrams compare as multisets.
    PersistenceDiagram canonical() const;
};

struct Subsample {
    PointCloud cloud;
    std::vector<std::size_t> indices;  // into the input cloud, in selection order
};

// Greedy farthest-point landmarks: starts at start_index and repeatedly adds
// the point farthest from those already chosen (lowest index on ties).
Subsample maxmin_landmarks(const PointCloud& cloud, std::size_t k, std::size_t start_index = 0);
PointCloud maxmin_subsample(const PointCloud& cloud, std::size_t k, std::size_t start_index = 0);

inline constexpr std::size_t kDefaultSubsampleCap = 400;

struct RipsOptions {
    // Memory budget: SizeCap is raised when the filtration would hold more
    // edges than this.
    std::size_t max_edges = 20'000'000;
};

// Vietoris–Rips persistence over Z/2 up to max_dim (0 or 1). Edges enter at
// their length, triangles at their longest edge, vertices at 0; simplices up
// to max_radius (default: the largest pairwise distance) are included, ties
// ordered by dimension then vertex lexicographic order.
//
// H0 is read off a union-find sweep over the edges. H1 comes from reducing
// the coboundary matrix (the anti-transpose of the boundary matrix) over the
// edges that survive clearing; this yields the same persistence pairs as the
// boundary reduction. Zero-length H1 pairs are dropped; every H0 pair is
// kept, so H0 has exactly one feature per point.
PersistenceDiagram rips_persistence(const DistanceMatrix& dm, int max_dim = 1,
                                    std::optional<double> max_radius = std::nullopt,
                                    const RipsOptions& options = {});

// Mean of death − birth over the finite features of one dimension; 0 when
// there are none. Essential features are skipped.
double average_lifetime(const PersistenceDiagram& diagram, int dim);

}  // namespace kerrtda

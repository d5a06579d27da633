#include "kerrtda/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "kerrtda/errors.hpp"
#include "kerrtda/kernels.hpp"

namespace kerrtda {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
    if (values_.size() != n_ * n_) throw std::invalid_argument("distance matrix must be n*n");
    for (std::size_t i = 0; i < n_; ++i) {
        if (values_[i * n_ + i] != 0.0) throw std::invalid_argument("distance matrix diagonal must be 0");
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double d = values_[i * n_ + j];
            if (!(d >= 0.0) || d != values_[j * n_ + i]) {
                throw std::invalid_argument("distance matrix must be symmetric and non-negative");
            }
        }
    }
}

DistanceMatrix DistanceMatrix::from_cloud(const PointCloud& cloud) {
    return DistanceMatrix(cloud.size(), kernels::omp::pairwise_distances(cloud));
}

double DistanceMatrix::max_distance() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return DistanceMatrix(n_, std::move(v));
}

std::vector<Feature> PersistenceDiagram::of_dim(int dim) const {
    std::vector<Feature> out;
    for (const auto& f : features) {
        if (f.dim == dim) out.push_back(f);
    }
    return out;
}

std::size_t PersistenceDiagram::count(int dim) const {
    return static_cast<std::size_t>(
        std::count_if(features.begin(), features.end(), [dim](const Feature& f) { return f.dim == dim; }));
}

PersistenceDiagram PersistenceDiagram::canonical() const {
    PersistenceDiagram out{features};
    std::sort(out.features.begin(), out.features.end());
    return out;
}

Subsample maxmin_landmarks(const PointCloud& cloud, std::size_t k, std::size_t start_index) {
    if (cloud.empty()) throw EmptyCloud("cannot subsample an empty cloud");
    if (k < 1) throw std::invalid_argument("subsample size must be >= 1");
    if (start_index >= cloud.size()) throw std::invalid_argument("start_index out of range");
    Subsample out;
    out.indices = kernels::omp::farthest_point_order(cloud, k, start_index);
    out.cloud = PointCloud(cloud.dim());
    out.cloud.reserve(out.indices.size());
    for (std::size_t i : out.indices) out.cloud.push_back(cloud.point(i));
    return out;
}

PointCloud maxmin_subsample(const PointCloud& cloud, std::size_t k, std::size_t start_index) {
    return maxmin_landmarks(cloud, k, start_index).cloud;
}

namespace {

using Index = std::uint32_t;

struct Edge {
    double value;
    Index a, b;  // a < b
};

bool edge_less(const Edge& x, const Edge& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
}

struct Triangle {
    double value;
    Index a, b, c;  // a < b < c

    std::uint64_t key() const {
        // Combinatorial number system; unique per vertex triple.
        const auto c3 = static_cast<std::uint64_t>(c) * (c - 1) * (c - 2) / 6;
        const auto b2 = static_cast<std::uint64_t>(b) * (b - 1) / 2;
        return c3 + b2 + a;
    }
    friend bool operator==(const Triangle& x, const Triangle& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
};

bool triangle_less(const Triangle& x, const Triangle& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
}

struct TriangleAfter {
    bool operator()(const Triangle& x, const Triangle& y) const { return triangle_less(y, x); }
};

Triangle make_triangle(Index i, Index j, Index k, double value) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    return {value, i, j, k};
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), Index{0}); }
    Index find(Index x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(Index x, Index y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (x < y) std::swap(x, y);
        parent_[x] = y;
        return true;
    }

private:
    std::vector<Index> parent_;
};

// Coboundary reduction for the 1-cochains of a Rips complex.
class CoboundaryReducer {
public:
    CoboundaryReducer(const DistanceMatrix& dm, double radius, const std::vector<Edge>& edges)
        : dm_(dm), radius_(radius), edges_(edges) {}

    template <typename Visit>
    void for_each_cofacet(const Edge& e, Visit&& visit) const {
        const std::size_t n = dm_.size();
        const double* row_a = dm_.row(e.a);
        const double* row_b = dm_.row(e.b);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == e.a || k == e.b) continue;
            const double da = row_a[k];
            const double db = row_b[k];
            if (da > radius_ || db > radius_) continue;
            visit(make_triangle(e.a, e.b, static_cast<Index>(k), std::max({e.value, da, db})));
        }
    }

    // Reduces the column of edge `column` (an index into edges_), returning
    // its pivot triangle or nothing when the column reduces to zero.
    std::optional<Triangle> reduce(std::size_t column) {
        const Edge& e = edges_[column];

        // Apparent-pair shortcut: if the smallest cofacet is not yet a pivot,
        // the unreduced column is already reduced.
        std::optional<Triangle> smallest;
        for_each_cofacet(e, [&](const Triangle& t) {
            if (!smallest || triangle_less(t, *smallest)) smallest = t;
        });
        if (!smallest) return std::nullopt;
        if (!pivot_owner_.contains(smallest->key())) {
            claim(*smallest, column, {static_cast<Index>(column)});
            return smallest;
        }

        Heap heap;
        std::vector<Index> combination{static_cast<Index>(column)};
        push_coboundary(heap, e);
        while (true) {
            const auto pivot = pop_pivot(heap);
            if (!pivot) return std::nullopt;
            const auto owner = pivot_owner_.find(pivot->key());
            if (owner == pivot_owner_.end()) {
                claim(*pivot, column, std::move(combination));
                return pivot;
            }
            heap.push(*pivot);
            for (Index f : reductions_[owner->second]) {
                push_coboundary(heap, edges_[f]);
                combination.push_back(f);
            }
        }
    }

private:
    using Heap = std::priority_queue<Triangle, std::vector<Triangle>, TriangleAfter>;

    void push_coboundary(Heap& heap, const Edge& e) const {
        for_each_cofacet(e, [&](const Triangle& t) { heap.push(t); });
    }

    // Smallest triangle with an odd count in the heap.
    static std::optional<Triangle> pop_pivot(Heap& heap) {
        while (!heap.empty()) {
            const Triangle t = heap.top();
            heap.pop();
            if (!heap.empty() && heap.top() == t) {
                heap.pop();
                continue;
            }
            return t;
        }
        return std::nullopt;
    }

    void claim(const Triangle& pivot, std::size_t column, std::vector<Index> combination) {
        // Keep the reduction column in Z/2 normal form.
        std::sort(combination.begin(), combination.end());
        std::vector<Index> normal;
        for (std::size_t i = 0; i < combination.size();) {
            std::size_t j = i;
            while (j < combination.size() && combination[j] == combination[i]) ++j;
            if ((j - i) % 2 == 1) normal.push_back(combination[i]);
            i = j;
        }
        pivot_owner_.emplace(pivot.key(), static_cast<Index>(column));
        reductions_.emplace(static_cast<Index>(column), std::move(normal));
    }

    const DistanceMatrix& dm_;
    double radius_;
    const std::vector<Edge>& edges_;
    std::unordered_map<std::uint64_t, Index> pivot_owner_;
    std::unordered_map<Index, std::vector<Index>> reductions_;
};

}  // namespace

PersistenceDiagram rips_persistence(const DistanceMatrix& dm, int max_dim, std::optional<double> max_radius,
                                    const RipsOptions& options) {
    if (max_dim < 0 || max_dim > 1) throw std::invalid_argument("max_dim must be 0 or 1");
    if (max_radius && !(*max_radius > 0.0)) {
        throw RadiusNonPositive("max_radius must be > 0, got " + std::to_string(*max_radius));
    }
    const std::size_t n = dm.size();
    PersistenceDiagram diagram;
    if (n == 0) return diagram;
    if (n > std::numeric_limits<Index>::max() / 2) throw SizeCap("too many points");
    const double radius = max_radius.value_or(dm.max_distance());

    const std::size_t candidate_edges = n * (n - 1) / 2;
    std::vector<Edge> edges;
    if (candidate_edges > options.max_edges) {
        std::size_t kept = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) kept += dm(i, j) <= radius;
        }
        if (kept > options.max_edges) {
            throw SizeCap("Rips filtration would hold " + std::to_string(kept) + " edges (budget " +
                          std::to_string(options.max_edges) + "); subsample first");
        }
    }
    edges.reserve(candidate_edges);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dm(i, j) <= radius) edges.push_back({dm(i, j), static_cast<Index>(i), static_cast<Index>(j)});
        }
    }
    std::sort(edges.begin(), edges.end(), edge_less);

    // H0, and the clearing mask: an edge that merges two components is the
    // pivot of a 0-dimensional column and needs no reduction in dimension 1.
    UnionFind components(n);
    std::vector<bool> cleared(edges.size(), false);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (components.unite(edges[e].a, edges[e].b)) {
            diagram.features.push_back({0, 0.0, edges[e].value});
            cleared[e] = true;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (components.find(static_cast<Index>(v)) == v) diagram.features.push_back({0, 0.0});
    }
    if (max_dim < 1) return diagram;

    CoboundaryReducer reducer(dm, radius, edges);
    for (std::size_t e = edges.size(); e-- > 0;) {
        if (cleared[e]) continue;
        const auto pivot = reducer.reduce(e);
        if (!pivot) {
            diagram.features.push_back({1, edges[e].value});
        } else if (pivot->value > edges[e].value) {
            diagram.features.push_back({1, edges[e].value, pivot->value});
        }
    }
    return diagram;
}

double average_lifetime(const PersistenceDiagram& diagram, int dim) {
    if (dim < 0 || dim > 1) throw std::invalid_argument("dim must be 0 or 1");
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& f : diagram.features) {
        if (f.dim != dim || f.essential()) continue;
        total += f.lifetime();
        ++count;
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

}  // namespace kerrtda

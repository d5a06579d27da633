#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace kerrtda {

// Ordered points of a common dimension, stored row-major.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::invalid_argument("point dimension must be >= 1");
    }
    PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
        if (dim == 0) throw std::invalid_argument("point dimension must be >= 1");
        if (coords_.size() % dim != 0) throw std::invalid_argument("coordinate count not a multiple of dim");
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    double operator()(std::size_t i, std::size_t c) const { return coords_[i * dim_ + c]; }

    void push_back(std::span<const double> p) {
        if (p.size() != dim_) throw std::invalid_argument("point dimension mismatch");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }
    void reserve(std::size_t points) { coords_.reserve(points * dim_); }

    const std::vector<double>& coords() const { return coords_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t dim_ = 1;
    std::vector<double> coords_;
};

}  // namespace kerrtda

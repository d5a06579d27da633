#include "kerrtda/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kerrtda/errors.hpp"
#include "kerrtda/kernels.hpp"

namespace kerrtda {

PointCloud delay_embed(const TimeSeries& series, std::size_t tau, std::size_t dim) {
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    if (dim < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    const std::size_t span = (dim - 1) * tau;
    const std::size_t n = series.size();
    if (n <= span) {
        throw SeriesTooShort("series of length " + std::to_string(n) + " cannot be embedded with tau=" +
                             std::to_string(tau) + ", d=" + std::to_string(dim));
    }
    std::vector<double> coords;
    coords.reserve((n - span) * dim);
    for (std::size_t i = span; i < n; ++i) {
        for (std::size_t c = 0; c < dim; ++c) coords.push_back(series.values[i - c * tau]);
    }
    return PointCloud(dim, std::move(coords));
}

std::vector<std::size_t> quantile_bins(const std::vector<double>& values, std::size_t n_bins) {
    if (n_bins < 1) throw std::invalid_argument("n_bins must be >= 1");
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::size_t> bins(n);
    std::size_t rank = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (r == 0 || values[order[r]] != values[order[r - 1]]) rank = r;
        bins[order[r]] = rank * n_bins / n;
    }
    return bins;
}

std::vector<double> delayed_mutual_information(const TimeSeries& series, std::size_t max_tau,
                                               std::size_t n_bins) {
    if (max_tau < 2) throw std::invalid_argument("max_tau must be >= 2");
    if (series.size() < 4 * max_tau) {
        throw SeriesTooShort("mutual information needs at least 4*max_tau samples");
    }
    const auto bins = quantile_bins(series.values, n_bins);
    const std::size_t n = series.size();
    std::vector<double> mi(max_tau + 1, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> joint(n_bins * n_bins), left(n_bins), right(n_bins);
    for (std::size_t tau = 1; tau <= max_tau; ++tau) {
        std::fill(joint.begin(), joint.end(), 0.0);
        std::fill(left.begin(), left.end(), 0.0);
        std::fill(right.begin(), right.end(), 0.0);
        const std::size_t pairs = n - tau;
        for (std::size_t t = tau; t < n; ++t) {
            const std::size_t a = bins[t];
            const std::size_t b = bins[t - tau];
            joint[a * n_bins + b] += 1.0;
            left[a] += 1.0;
            right[b] += 1.0;
        }
        double acc = 0.0;
        const double inv = 1.0 / static_cast<double>(pairs);
        for (std::size_t a = 0; a < n_bins; ++a) {
            for (std::size_t b = 0; b < n_bins; ++b) {
                const double c = joint[a * n_bins + b];
                if (c == 0.0) continue;
                acc += c * inv * std::log(c * static_cast<double>(pairs) / (left[a] * right[b]));
            }
        }
        mi[tau] = acc;
    }
    return mi;
}

std::size_t estimate_delay_mi(const TimeSeries& series, std::size_t max_tau, std::size_t n_bins) {
    const auto mi = delayed_mutual_information(series, max_tau, n_bins);
    for (std::size_t tau = 2; tau < max_tau; ++tau) {
        if (!(mi[tau - 1] > mi[tau])) continue;
        std::size_t end = tau;
        while (end + 1 <= max_tau && mi[end + 1] == mi[tau]) ++end;
        if (end + 1 <= max_tau && mi[end + 1] > mi[tau]) return tau;
    }
    std::size_t best = 1;
    for (std::size_t tau = 2; tau <= max_tau; ++tau) {
        if (mi[tau] < mi[best]) best = tau;
    }
    return best;
}

double false_neighbor_fraction(const TimeSeries& series, std::size_t tau, std::size_t dim, double r_tol) {
    if (tau < 1 || dim < 1) throw std::invalid_argument("tau and dim must be >= 1");
    const std::size_t n = series.size();
    const std::size_t lag = dim * tau;
    if (n < lag + 2) throw SeriesTooShort("series too short for false-nearest-neighbour test");

    // Embed the suffix that also has a (d+1)-th coordinate.
    TimeSeries tail;
    tail.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(lag - (dim - 1) * tau),
                       series.values.end());
    const PointCloud cloud = delay_embed(tail, tau, dim);

    // Points closer than round-off are repeats of the same state (an exactly
    // periodic orbit revisits its samples); they say nothing about whether
    // the embedding unfolds the attractor, so the nearest *distinct* point is
    // tested instead. A point with no distinct neighbour counts as true.
    const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
    const double floor = kFnnRoundoff * std::max(std::abs(*lo), std::abs(*hi));
    const auto neighbors = kernels::omp::nearest_neighbors(cloud, floor * floor * static_cast<double>(dim));

    std::size_t false_count = 0;
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        if (neighbors[p].index == cloud.size()) continue;
        const std::size_t i = lag + p;
        const std::size_t j = lag + neighbors[p].index;
        const double extra = std::abs(series.values[i - lag] - series.values[j - lag]);
        const double dist = std::sqrt(neighbors[p].squared_distance);
        if (extra > r_tol * dist) ++false_count;
    }
    return static_cast<double>(false_count) / static_cast<double>(cloud.size());
}

std::size_t estimate_dimension_fnn(const TimeSeries& series, std::size_t tau, std::size_t max_d,
                                   double r_tol, double threshold) {
    if (max_d < 2) throw std::invalid_argument("max_d must be >= 2");
    if (series.size() <= (max_d - 1) * tau + 1) {
        throw SeriesTooShort("series too short to embed at max_d");
    }
    for (std::size_t d = 1; d < max_d; ++d) {
        if (false_neighbor_fraction(series, tau, d, r_tol) < threshold) return d;
    }
    return max_d;
}

}  // namespace kerrtda

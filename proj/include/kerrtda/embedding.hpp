#pragma once

#include <cstddef>
#include <vector>

#include "kerrtda/point_cloud.hpp"
#include "kerrtda/time_series.hpp"

namespace kerrtda {

// Delay-coordinate reconstruction. Point i (for i >= (d−1)τ) is
// (x[i], x[i−τ], ..., x[i−(d−1)τ]); τ counts samples, so the delay in time
// units is τ·series.dt. Throws SeriesTooShort unless len > (d−1)τ.
PointCloud delay_embed(const TimeSeries& series, std::size_t tau, std::size_t dim);

inline constexpr std::size_t kDefaultMiBins = 16;
inline constexpr double kDefaultFnnRatio = 15.0;
inline constexpr double kDefaultFnnThreshold = 0.01;
// Relative size (against max |x|) below which two FNN points count as the same state.
inline constexpr double kFnnRoundoff = 1e-9;

// Equal-count bin index of every sample; equal values share a bin.
std::vector<std::size_t> quantile_bins(const std::vector<double>& values, std::size_t n_bins);

// I(x_t; x_{t−τ}) for τ = 0..max_tau (entry 0 is unused and set to NaN),
// from the joint histogram of quantile bins.
std::vector<double> delayed_mutual_information(const TimeSeries& series, std::size_t max_tau,
                                               std::size_t n_bins = kDefaultMiBins);

// First τ in [1, max_tau] at a strict local minimum of the mutual information
// (a flat bottom resolves to its smallest τ); falls back to the global argmin.
std::size_t estimate_delay_mi(const TimeSeries& series, std::size_t max_tau,
                              std::size_t n_bins = kDefaultMiBins);

// Fraction of points whose nearest neighbour in d dimensions separates by
// more than r_tol times their distance once the (d+1)-th delay coordinate is
// added. Neighbours closer than kFnnRoundoff·max|x| per coordinate are
// repeats of the same state and are skipped in favour of the nearest distinct
// point.
double false_neighbor_fraction(const TimeSeries& series, std::size_t tau, std::size_t dim,
                               double r_tol = kDefaultFnnRatio);

// Smallest d <= max_d with false_neighbor_fraction < threshold; max_d if none.
std::size_t estimate_dimension_fnn(const TimeSeries& series, std::size_t tau, std::size_t max_d,
                                   double r_tol = kDefaultFnnRatio,
                                   double threshold = kDefaultFnnThreshold);

}  // namespace kerrtda

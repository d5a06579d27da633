#pragma once

#include <cstddef>
#include <vector>

namespace kerrtda {

// Uniformly sampled scalar observations: values[i] was taken at t0 + i*dt.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

}  // namespace kerrtda

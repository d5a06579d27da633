#pragma once

// Shared fixtures for comparing the quantum-jump ensemble with the
// master-equation oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kerrtda/master_equation.hpp"
#include "kerrtda/quantum.hpp"
#include "kerrtda/rng.hpp"

namespace support {

// N = 5, weak pulsed drive, vacuum start; samples every period from t = T.
struct WeakDriveCase {
    kerrtda::QuantumParams params;
    kerrtda::DriveProfile drive{0.1, 8.0};
    kerrtda::IntegrationWindow window{80.0, 0.02, 8.0, 8.0};

    WeakDriveCase() {
        params.chi = 0.008;
        params.gamma = 0.05;
        params.n_trunc = 5;
        params.truncation_guard_levels = 0;
    }
};

struct EnsembleStats {
    std::vector<double> mean;
    std::vector<double> standard_error;
};

inline EnsembleStats trajectory_ensemble(const WeakDriveCase& c, std::size_t members, std::uint64_t base_seed) {
    std::vector<double> sum, sum_sq;
    for (std::size_t m = 0; m < members; ++m) {
        const auto run = kerrtda::evolve_trajectory(kerrtda::fock_state(c.params.n_trunc, 0), c.params, c.drive,
                                                    c.window, kerrtda::derive_seed(base_seed, m));
        const auto& n = run.photons.values;
        sum.resize(n.size(), 0.0);
        sum_sq.resize(n.size(), 0.0);
        for (std::size_t i = 0; i < n.size(); ++i) {
            sum[i] += n[i];
            sum_sq[i] += n[i] * n[i];
        }
    }
    EnsembleStats out;
    const double count = static_cast<double>(members);
    for (std::size_t i = 0; i < sum.size(); ++i) {
        const double mean = sum[i] / count;
        const double var = std::max(0.0, sum_sq[i] / count - mean * mean) * count / (count - 1.0);
        out.mean.push_back(mean);
        out.standard_error.push_back(std::sqrt(var / count));
    }
    return out;
}

inline std::vector<double> master_equation_photons(const WeakDriveCase& c) {
    const auto rho0 = kerrtda::pure_density(kerrtda::fock_state(c.params.n_trunc, 0));
    return kerrtda::integrate_master_equation(rho0, c.params, c.drive, c.window).photons.values;
}

inline double rms_error(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(acc / static_cast<double>(x.size()));
}

// Jump times of |1⟩ under pure decay (χ = 0, A = 0): one jump per seed, to |0⟩.
inline std::vector<double> single_photon_jump_times(std::size_t seeds, double gamma) {
    kerrtda::QuantumParams params;
    params.chi = 0.0;
    params.gamma = gamma;
    params.n_trunc = 2;
    params.truncation_guard_levels = 0;
    const kerrtda::DriveProfile drive{0.0, 8.0};
    const kerrtda::IntegrationWindow window{800.0, 0.04, 8.0, 0.0};
    std::vector<double> times;
    for (std::size_t s = 0; s < seeds; ++s) {
        const auto run = kerrtda::evolve_trajectory(kerrtda::fock_state(2, 1), params, drive, window, s + 1);
        if (!run.jumps.times.empty()) times.push_back(run.jumps.times.front());
    }
    return times;
}

// One-sample Kolmogorov–Smirnov statistic against Exp(rate).
inline double ks_statistic_exponential(std::vector<double> samples, double rate) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = 1.0 - std::exp(-rate * samples[i]);
        d = std::max({d, cdf - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - cdf});
    }
    return d;
}

// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace support

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "kerrtda/drive.hpp"
#include "kerrtda/time_series.hpp"

namespace kerrtda {

using complex = std::complex<double>;

// Mean-field Kerr oscillator: dξ/dt = −(γ/2)ξ + F(t) − iχ|ξ|²·ξ̂ where ξ̂ is ξ,
// or ξ* when nonlinear_conjugate is set.
struct ClassicalParams {
    double chi = 0.008;
    double gamma = 0.05;
    bool nonlinear_conjugate = false;

    void validate() const;
};

// Re ξ is position, Im ξ is momentum.
struct ClassicalState {
    complex xi{0.0, 0.0};
};

complex classical_rhs(const ClassicalState& state, double t, const ClassicalParams& params,
                      const DriveProfile& drive);

// Step layout shared by the classical and quantum integrators. Samples are
// taken at every multiple of sample_interval in [t_record, t_end].
struct IntegrationWindow {
    double t_end = 0.0;
    double dt = 0.0;
    double sample_interval = 0.0;
    double t_record = 0.0;
};

struct ClassicalTrajectory {
    TimeSeries position;  // Re ξ
    TimeSeries momentum;  // Im ξ
    ClassicalState final_state;
};

// |ξ| above this raises NonFiniteState.
inline constexpr double kClassicalOverflowGuard = 1e8;

// Fixed-step RK4. The step must divide T/2 and sample_interval.
ClassicalTrajectory integrate_classical(const ClassicalState& initial, const ClassicalParams& params,
                                        const DriveProfile& drive, const IntegrationWindow& window);

struct BifurcationColumn {
    double amplitude = 0.0;
    std::vector<double> samples;  // Re ξ(nT), n_min < n < n_max
    bool valid = true;
};

// Starts every column from ξ = 0. Columns that diverge are marked invalid and
// the scan continues.
std::vector<BifurcationColumn> bifurcation_scan(const std::vector<double>& amplitudes, double period,
                                                const ClassicalParams& params, int n_min, int n_max,
                                                std::int64_t steps_per_period = 2000);

// max − min of the stroboscopic samples.
double sample_spread(const BifurcationColumn& column);

}  // namespace kerrtda

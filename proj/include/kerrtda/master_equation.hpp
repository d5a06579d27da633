#pragma once

#include <Eigen/Dense>

#include "kerrtda/quantum.hpp"

namespace kerrtda {

using DensityMatrix = Eigen::MatrixXcd;

// Dense Lindblad integration is a desk-scale oracle for the trajectory
// ensemble; larger truncations are refused.
inline constexpr int kMasterEquationMaxDimension = 64;

struct MasterEquationResult {
    TimeSeries photons;   // tr(ρ n)
    TimeSeries position;  // tr(ρ x)
    TimeSeries purity;    // tr(ρ²)
    DensityMatrix final_density;
    double max_trace_error = 0.0;
};

// dρ/dt = −i[H, ρ] + LρL† − ½{L†L, ρ} with L = √γ a, fixed-step RK4 on the
// pulse grid. Throws TraceDrift when |tr ρ − 1| exceeds 1e-6.
MasterEquationResult integrate_master_equation(const DensityMatrix& initial, const QuantumParams& params,
                                               const DriveProfile& drive,
                                               const IntegrationWindow& window);

DensityMatrix pure_density(const WaveFunction& psi);

}  // namespace kerrtda

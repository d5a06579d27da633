#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kerrtda/classical.hpp"
#include "kerrtda/drive.hpp"
#include "kerrtda/time_series.hpp"

namespace kerrtda {

using SparseMatrix = Eigen::SparseMatrix<complex, Eigen::RowMajor>;
using WaveFunction = Eigen::VectorXcd;

// x = s(a + a†). Only the attractor's topology matters, so the scale is a
// convention; s = 1/√2 gives the usual quadrature.
inline constexpr double kPositionScale = 0.70710678118654752440;

// Ladder-operator algebra on the truncated Fock basis |0⟩..|N−1⟩.
struct FockOperators {
    int dimension = 0;
    SparseMatrix a;         // a[m−1, m] = √m
    SparseMatrix adag;      // conjugate transpose of a
    SparseMatrix number;    // diag(0..N−1)
    SparseMatrix kerr;      // a†²a² = diag(m(m−1))
    SparseMatrix position;  // s(a + a†)
};

FockOperators build_operators(int dimension, double position_scale = kPositionScale);

struct QuantumParams {
    double chi = 0.008;
    double gamma = 0.05;
    int n_trunc = 300;

    // TruncationBreach fires when the population of the top
    // truncation_guard_levels Fock states exceeds truncation_tolerance at a
    // sample. Zero levels disables the guard.
    int truncation_guard_levels = 5;
    double truncation_tolerance = 1e-6;
    // StepTooLarge fires when γ⟨n⟩dt reaches this bound.
    double max_jump_probability = 0.1;

    void validate() const;
};

// H = ½χ a†²a² + iF(a† − a), ħ = 1.
SparseMatrix hamiltonian(const FockOperators& ops, const QuantumParams& params, double drive);
// H_MC = H − (i/2)γ a†a.
SparseMatrix effective_hamiltonian(const FockOperators& ops, const QuantumParams& params, double drive);

WaveFunction fock_state(int dimension, int level);

struct JumpRecord {
    std::vector<double> times;  // strictly increasing
};

struct TrajectoryResult {
    TimeSeries position;  // ⟨x⟩
    TimeSeries re_a;      // Re⟨a⟩
    TimeSeries photons;   // ⟨n⟩
    TimeSeries norm;      // unnormalized ‖ψ̃‖² at each sample
    JumpRecord jumps;
    WaveFunction final_state;  // normalized

    // Largest relative per-step growth of ‖ψ̃‖² between jumps (<= 0 when
    // the non-Hermitian decay is resolved).
    double max_norm_increase = 0.0;
    double max_top_population = 0.0;
    double max_step_jump_probability = 0.0;
};

// One Monte Carlo wavefunction trajectory. ψ̃ is evolved under H_MC with
// fixed-step RK4 on the pulse grid; a jump a|ψ̃⟩ fires when ‖ψ̃‖² drops to a
// uniform draw r, located by bisection to dt/100 inside the bracketing step.
// Expectation values use the normalized state.
TrajectoryResult evolve_trajectory(const WaveFunction& initial, const QuantumParams& params,
                                   const DriveProfile& drive, const IntegrationWindow& window,
                                   std::uint64_t seed);

// Value k counts jumps in [t_start + k·stride, t_start + k·stride + width);
// only windows that fit inside [t_start, t_end) are emitted.
TimeSeries bin_jump_counts(const JumpRecord& record, double width, double stride, double t_start,
                           double t_end);

inline constexpr double kDefaultBinWidth = 9.0;

}  // namespace kerrtda

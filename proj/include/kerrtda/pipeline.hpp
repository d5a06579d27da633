#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kerrtda/config.hpp"
#include "kerrtda/persistence.hpp"
#include "kerrtda/quantum.hpp"
#include "kerrtda/time_series.hpp"

namespace kerrtda {

enum class CellStatus { ok, truncation_breach, diverged, failed };

std::string to_string(CellStatus status);
CellStatus parse_cell_status(const std::string& text);

struct CellDiagnostics {
    std::uint64_t seed = 0;
    std::size_t tau = 0;  // samples; τ·series.dt in time units
    std::size_t dim = 0;
    double series_dt = 0.0;
    std::size_t series_length = 0;
    std::size_t cloud_size = 0;
    std::size_t landmarks = 0;
    std::size_t h1_features = 0;
    double top_lifetime = 0.0;
    double second_lifetime = 0.0;
    double mean_photons = 0.0;  // quantum modes
    std::size_t jumps = 0;      // quantum modes
    double l_avg_std = 0.0;     // spread over trajectories when M > 1
    std::string message;
};

struct CellResult {
    double amplitude = 0.0;
    double period = 0.0;
    CellStatus status = CellStatus::ok;
    std::optional<double> l_avg;  // empty for flagged cells
    PersistenceDiagram diagram;
    TimeSeries series;
    CellDiagnostics diagnostics;
};

// Integration step count per period for a quantum run: the configured value,
// raised (to a multiple of the sample count) until γ(N−1)dt stays below the
// per-step jump-probability bound.
int quantum_steps_per_period(double period, const SweepConfig& config);

// Simulated observable for one (A, T) cell in the configured mode.
struct Observation {
    TimeSeries series;
    double mean_photons = 0.0;
    std::size_t jumps = 0;
};
Observation simulate_observable(double amplitude, double period, const SweepConfig& config,
                                std::uint64_t seed);

struct EmbeddingChoice {
    std::size_t tau = 0;
    std::size_t dim = 0;
};
EmbeddingChoice choose_embedding(const TimeSeries& series, const SweepConfig& config);

// Embedding → maxmin landmarks → Rips persistence. Fills the topological part
// of the diagnostics.
PersistenceDiagram series_persistence(const TimeSeries& series, const EmbeddingChoice& embedding,
                                      const SweepConfig& config, CellDiagnostics& diagnostics);

// Simulation → embedding → persistence → average H1 lifetime. Module errors
// become status flags; this never throws for a valid config.
CellResult run_cell(double amplitude, double period, const SweepConfig& config, std::uint64_t seed);

std::uint64_t cell_seed(const SweepConfig& config, std::size_t cell_index);

// Cells are stored T-major: index = iT * len(A) + iA.
struct PhaseDiagramGrid {
    std::vector<double> amplitudes;
    std::vector<double> periods;
    std::vector<CellResult> cells;

    const CellResult& at(std::size_t period_index, std::size_t amplitude_index) const {
        return cells[period_index * amplitudes.size() + amplitude_index];
    }
    std::size_t flagged() const;
};

PhaseDiagramGrid sweep_phase_diagram(const SweepConfig& config);

struct PhasePoint {
    double amplitude;
    double period;
};

struct RobustnessRow {
    std::string parameter;  // "tau" (dim fixed) or "dim" (tau fixed)
    std::size_t tau = 0;
    std::size_t dim = 0;
    double regular_mean = 0.0;
    double regular_std = 0.0;
    double chaotic_mean = 0.0;
    double chaotic_std = 0.0;
    std::size_t regular_count = 0;  // points that produced a value
    std::size_t chaotic_count = 0;
};

// Sweeps τ at dim = fixed_dim and d at τ = fixed_tau, reporting per-phase mean
// and population standard deviation of L_avg over the listed points. Each
// point is simulated once.
std::vector<RobustnessRow> robustness_study(const SweepConfig& config,
                                            const std::vector<PhasePoint>& regular_points,
                                            const std::vector<PhasePoint>& chaotic_points,
                                            const std::vector<std::size_t>& tau_values,
                                            const std::vector<std::size_t>& dim_values,
                                            std::size_t fixed_dim = 2, std::size_t fixed_tau = 7);

}  // namespace kerrtda

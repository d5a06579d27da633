#include "kerrtda/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "kerrtda/classical.hpp"
#include "kerrtda/embedding.hpp"
#include "kerrtda/errors.hpp"
#include "kerrtda/rng.hpp"
#include "kerrtda/stats.hpp"

namespace kerrtda {

std::string to_string(CellStatus status) {
    switch (status) {
        case CellStatus::ok: return "ok";
        case CellStatus::truncation_breach: return "truncation-breach";
        case CellStatus::diverged: return "diverged";
        case CellStatus::failed: return "failed";
    }
    return "failed";
}

CellStatus parse_cell_status(const std::string& text) {
    if (text == "ok") return CellStatus::ok;
    if (text == "truncation-breach") return CellStatus::truncation_breach;
    if (text == "diverged") return CellStatus::diverged;
    if (text == "failed") return CellStatus::failed;
    throw std::invalid_argument("unknown cell status '" + text + "'");
}

int quantum_steps_per_period(double period, const SweepConfig& config) {
    // Margin below the hard bound so ⟨n⟩ close to N−1 still passes.
    constexpr double kProbabilityBudget = 0.09;
    const int quantum = std::lcm(2, config.samples_per_period);
    const double needed = period * config.gamma * static_cast<double>(config.n_trunc - 1) / kProbabilityBudget;
    int steps = std::max(config.steps_per_period, static_cast<int>(std::ceil(needed)));
    steps = (steps + quantum - 1) / quantum * quantum;
    return steps;
}

Observation simulate_observable(double amplitude, double period, const SweepConfig& config,
                                std::uint64_t seed) {
    const DriveProfile drive{amplitude, period};
    Observation out;
    if (config.mode == Mode::classical) {
        const ClassicalParams params{config.chi, config.gamma, config.nonlinear_conjugate};
        const IntegrationWindow window{config.end_periods * period,
                                       period / config.steps_per_period,
                                       period / config.samples_per_period,
                                       config.transient_periods * period};
        out.series = integrate_classical(ClassicalState{}, params, drive, window).position;
        return out;
    }

    QuantumParams params;
    params.chi = config.chi;
    params.gamma = config.gamma;
    params.n_trunc = config.n_trunc;
    const int steps = quantum_steps_per_period(period, config);
    const IntegrationWindow window{config.end_periods * period, period / steps,
                                   period / config.samples_per_period,
                                   config.transient_periods * period};
    const auto trajectory = evolve_trajectory(fock_state(params.n_trunc, 0), params, drive, window, seed);
    out.mean_photons = stats::mean(trajectory.photons.values);
    out.jumps = trajectory.jumps.times.size();
    if (config.mode == Mode::quantum_x) {
        out.series = trajectory.position;
    } else {
        out.series = bin_jump_counts(trajectory.jumps, config.bin_width, config.bin_stride,
                                     window.t_record, window.t_end);
    }
    return out;
}

EmbeddingChoice choose_embedding(const TimeSeries& series, const SweepConfig& config) {
    if (config.embedding == EmbeddingPolicy::fixed) return {config.tau, config.dim};
    const std::size_t max_tau = std::min(config.max_tau, series.size() / 4);
    if (max_tau < 2) throw SeriesTooShort("series too short for delay estimation");
    const std::size_t tau = estimate_delay_mi(series, max_tau, config.mi_bins);
    const std::size_t dim = std::max(
        config.min_dim, estimate_dimension_fnn(series, tau, config.max_dim, config.fnn_ratio, config.fnn_threshold));
    return {tau, dim};
}

PersistenceDiagram series_persistence(const TimeSeries& series, const EmbeddingChoice& embedding,
                                      const SweepConfig& config, CellDiagnostics& diagnostics) {
    diagnostics.tau = embedding.tau;
    diagnostics.dim = embedding.dim;
    diagnostics.series_dt = series.dt;
    diagnostics.series_length = series.size();
    const PointCloud cloud = delay_embed(series, embedding.tau, embedding.dim);
    diagnostics.cloud_size = cloud.size();
    const PointCloud landmarks = maxmin_subsample(cloud, config.subsample, 0);
    diagnostics.landmarks = landmarks.size();
    PersistenceDiagram diagram = rips_persistence(DistanceMatrix::from_cloud(landmarks), 1);

    std::vector<double> lifetimes;
    for (const auto& f : diagram.features) {
        if (f.dim == 1 && !f.essential()) lifetimes.push_back(f.lifetime());
    }
    std::sort(lifetimes.rbegin(), lifetimes.rend());
    diagnostics.h1_features = lifetimes.size();
    diagnostics.top_lifetime = lifetimes.size() > 0 ? lifetimes[0] : 0.0;
    diagnostics.second_lifetime = lifetimes.size() > 1 ? lifetimes[1] : 0.0;
    return diagram;
}

CellResult run_cell(double amplitude, double period, const SweepConfig& config, std::uint64_t seed) {
    CellResult cell;
    cell.amplitude = amplitude;
    cell.period = period;
    cell.diagnostics.seed = seed;
    try {
        const int runs = config.mode == Mode::classical ? 1 : config.trajectories;
        std::vector<double> values;
        for (int m = 0; m < runs; ++m) {
            const std::uint64_t run_seed = m == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(m));
            const Observation obs = simulate_observable(amplitude, period, config, run_seed);
            CellDiagnostics diag;
            const auto embedding = choose_embedding(obs.series, config);
            PersistenceDiagram diagram = series_persistence(obs.series, embedding, config, diag);
            values.push_back(average_lifetime(diagram, 1));
            if (m == 0) {
                diag.seed = seed;
                diag.mean_photons = obs.mean_photons;
                diag.jumps = obs.jumps;
                cell.diagnostics = diag;
                cell.diagram = std::move(diagram);
                cell.series = obs.series;
            }
        }
        cell.l_avg = stats::mean(values);
        cell.diagnostics.l_avg_std = stats::stddev(values);
    } catch (const TruncationBreach& e) {
        cell.status = CellStatus::truncation_breach;
        cell.diagnostics.message = e.what();
    } catch (const NonFiniteState& e) {
        cell.status = CellStatus::diverged;
        cell.diagnostics.message = e.what();
    } catch (const std::exception& e) {
        cell.status = CellStatus::failed;
        cell.diagnostics.message = e.what();
    }
    if (cell.status != CellStatus::ok) {
        cell.l_avg.reset();
        cell.diagram = {};
    }
    return cell;
}

std::uint64_t cell_seed(const SweepConfig& config, std::size_t cell_index) {
    return derive_seed(config.seed, cell_index);
}

std::size_t PhaseDiagramGrid::flagged() const {
    return static_cast<std::size_t>(std::count_if(
        cells.begin(), cells.end(), [](const CellResult& c) { return c.status != CellStatus::ok; }));
}

PhaseDiagramGrid sweep_phase_diagram(const SweepConfig& config) {
    config.validate();
    PhaseDiagramGrid grid;
    grid.amplitudes = config.amplitude.values();
    grid.periods = config.period.values();
    const std::size_t na = grid.amplitudes.size();
    const auto total = static_cast<std::int64_t>(na * grid.periods.size());
    grid.cells.resize(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const auto i = static_cast<std::size_t>(idx);
        grid.cells[i] = run_cell(grid.amplitudes[i % na], grid.periods[i / na], config, cell_seed(config, i));
    }
    return grid;
}

std::vector<RobustnessRow> robustness_study(const SweepConfig& config,
                                            const std::vector<PhasePoint>& regular_points,
                                            const std::vector<PhasePoint>& chaotic_points,
                                            const std::vector<std::size_t>& tau_values,
                                            const std::vector<std::size_t>& dim_values,
                                            std::size_t fixed_dim, std::size_t fixed_tau) {
    config.validate();
    if (regular_points.empty() || chaotic_points.empty()) {
        throw std::invalid_argument("robustness study needs at least one point per phase");
    }
    std::vector<PhasePoint> points(regular_points);
    points.insert(points.end(), chaotic_points.begin(), chaotic_points.end());
    const std::size_t n_regular = regular_points.size();

    std::vector<std::optional<TimeSeries>> series(points.size());
    const auto count = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t p = 0; p < count; ++p) {
        const auto i = static_cast<std::size_t>(p);
        try {
            series[i] = simulate_observable(points[i].amplitude, points[i].period, config,
                                            derive_seed(config.seed, i))
                            .series;
        } catch (const std::exception&) {
            series[i].reset();
        }
    }

    auto evaluate = [&](const std::string& parameter, std::size_t tau, std::size_t dim) {
        std::vector<std::optional<double>> values(points.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t p = 0; p < count; ++p) {
            const auto i = static_cast<std::size_t>(p);
            if (!series[i]) continue;
            try {
                CellDiagnostics diag;
                values[i] = average_lifetime(series_persistence(*series[i], {tau, dim}, config, diag), 1);
            } catch (const std::exception&) {
                values[i].reset();
            }
        }
        std::vector<double> regular, chaotic;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!values[i]) continue;
            (i < n_regular ? regular : chaotic).push_back(*values[i]);
        }
        RobustnessRow row;
        row.parameter = parameter;
        row.tau = tau;
        row.dim = dim;
        row.regular_mean = stats::mean(regular);
        row.regular_std = stats::stddev(regular);
        row.chaotic_mean = stats::mean(chaotic);
        row.chaotic_std = stats::stddev(chaotic);
        row.regular_count = regular.size();
        row.chaotic_count = chaotic.size();
        return row;
    };

    std::vector<RobustnessRow> rows;
    for (std::size_t tau : tau_values) rows.push_back(evaluate("tau", tau, fixed_dim));
    for (std::size_t dim : dim_values) rows.push_back(evaluate("dim", fixed_tau, dim));
    return rows;
}

}  // namespace kerrtda

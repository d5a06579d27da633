#include "kerrtda/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kerrtda/errors.hpp"

namespace kerrtda {

namespace {

constexpr complex kI{0.0, 1.0};

complex rhs_with_drive(complex xi, double drive, const ClassicalParams& p) {
    const complex nonlinear = p.nonlinear_conjugate ? std::conj(xi) : xi;
    return -0.5 * p.gamma * xi + drive - kI * p.chi * std::norm(xi) * nonlinear;
}

complex rk4_step(complex xi, double drive, double dt, const ClassicalParams& p) {
    const complex k1 = rhs_with_drive(xi, drive, p);
    const complex k2 = rhs_with_drive(xi + 0.5 * dt * k1, drive, p);
    const complex k3 = rhs_with_drive(xi + 0.5 * dt * k2, drive, p);
    const complex k4 = rhs_with_drive(xi + dt * k3, drive, p);
    return xi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void guard(complex xi, double t) {
    if (!std::isfinite(xi.real()) || !std::isfinite(xi.imag()) ||
        std::abs(xi) > kClassicalOverflowGuard) {
        throw NonFiniteState("classical state diverged at t=" + std::to_string(t));
    }
}

}  // namespace

void ClassicalParams::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma) || !std::isfinite(chi)) {
        throw std::invalid_argument("classical params: need finite chi and gamma >= 0");
    }
}

complex classical_rhs(const ClassicalState& state, double t, const ClassicalParams& params,
                      const DriveProfile& drive) {
    return rhs_with_drive(state.xi, drive_value(drive, t), params);
}

ClassicalTrajectory integrate_classical(const ClassicalState& initial, const ClassicalParams& params,
                                        const DriveProfile& drive, const IntegrationWindow& window) {
    params.validate();
    const PulseGrid grid = PulseGrid::from_step(drive, window.dt);
    if (!(window.sample_interval > 0.0)) {
        throw std::invalid_argument("sample_interval must be > 0");
    }
    const std::int64_t total = grid.steps_in(window.t_end);
    const std::int64_t stride = grid.steps_in(window.sample_interval);
    if (stride <= 0) throw std::invalid_argument("sample_interval must be >= dt");
    const std::int64_t first = grid.steps_in(std::ceil(window.t_record / window.sample_interval) *
                                             window.sample_interval);

    ClassicalTrajectory out;
    out.position.t0 = out.momentum.t0 = grid.time(first);
    out.position.dt = out.momentum.dt = grid.time(stride);
    const auto expected = first <= total ? static_cast<std::size_t>((total - first) / stride + 1) : 0;
    out.position.values.reserve(expected);
    out.momentum.values.reserve(expected);

    complex xi = initial.xi;
    guard(xi, 0.0);
    for (std::int64_t step = 0;; ++step) {
        if (step >= first && (step - first) % stride == 0) {
            out.position.values.push_back(xi.real());
            out.momentum.values.push_back(xi.imag());
        }
        if (step == total) break;
        xi = rk4_step(xi, grid.value_on_step(step), grid.dt(), params);
        guard(xi, grid.time(step + 1));
    }
    out.final_state.xi = xi;
    return out;
}

std::vector<BifurcationColumn> bifurcation_scan(const std::vector<double>& amplitudes, double period,
                                                const ClassicalParams& params, int n_min, int n_max,
                                                std::int64_t steps_per_period) {
    if (n_min >= n_max || n_min < 0) throw std::invalid_argument("need 0 <= n_min < n_max");
    params.validate();
    std::vector<BifurcationColumn> columns(amplitudes.size());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < amplitudes.size(); ++c) {
        BifurcationColumn& column = columns[c];
        column.amplitude = amplitudes[c];
        const DriveProfile drive{amplitudes[c], period};
        const PulseGrid grid(drive, steps_per_period);
        complex xi{0.0, 0.0};
        try {
            for (int n = 0; n < n_max; ++n) {
                if (n > n_min) column.samples.push_back(xi.real());
                for (std::int64_t k = 0; k < steps_per_period; ++k) {
                    xi = rk4_step(xi, grid.value_on_step(k), grid.dt(), params);
                }
                guard(xi, (n + 1) * period);
            }
        } catch (const NonFiniteState&) {
            column.valid = false;
            column.samples.clear();
        }
    }
    return columns;
}

double sample_spread(const BifurcationColumn& column) {
    if (column.samples.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(column.samples.begin(), column.samples.end());
    return *hi - *lo;
}

}  // namespace kerrtda

#include "kerrtda/drive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kerrtda {

void DriveProfile::validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("drive period must be finite and > 0");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("drive amplitude must be finite and >= 0");
    }
}

double drive_value(const DriveProfile& profile, double t) {
    const double phase = t - profile.period * std::floor(t / profile.period);
    return phase < 0.5 * profile.period ? profile.amplitude : 0.0;
}

PulseGrid::PulseGrid(const DriveProfile& profile, std::int64_t steps_per_period)
    : profile_(profile), steps_per_period_(steps_per_period) {
    profile_.validate();
    if (steps_per_period <= 0 || steps_per_period % 2 != 0) {
        throw std::invalid_argument("steps_per_period must be positive and even");
    }
    dt_ = profile_.period / static_cast<double>(steps_per_period_);
}

PulseGrid PulseGrid::from_step(const DriveProfile& profile, double dt) {
    profile.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    const double half_steps = 0.5 * profile.period / dt;
    const double rounded = std::round(half_steps);
    if (rounded < 1.0 || std::abs(half_steps - rounded) > 1e-9 * rounded) {
        throw std::invalid_argument("dt must divide T/2 exactly");
    }
    return PulseGrid(profile, 2 * static_cast<std::int64_t>(rounded));
}

double PulseGrid::value_on_step(std::int64_t step) const {
    std::int64_t phase = step % steps_per_period_;
    if (phase < 0) phase += steps_per_period_;
    return phase < steps_per_period_ / 2 ? profile_.amplitude : 0.0;
}

std::int64_t PulseGrid::steps_in(double duration) const {
    if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
    const double steps = duration / dt_;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, rounded)) {
        throw std::invalid_argument("duration must be an integer multiple of dt");
    }
    return static_cast<std::int64_t>(rounded);
}

}  // namespace kerrtda

#pragma once

#include <cstdint>

namespace kerrtda {

// Rectangular pulse train F(t): amplitude A on [kT, kT + T/2), zero on
// [kT + T/2, (k+1)T).
struct DriveProfile {
    double amplitude = 0.0;
    double period = 1.0;

    void validate() const;
};

double drive_value(const DriveProfile& profile, double t);

// Fixed-step grid whose step boundaries land on every pulse edge. Time is
// tracked as an integer step index so the drive phase never drifts.
class PulseGrid {
public:
    // steps_per_period must be even and positive.
    PulseGrid(const DriveProfile& profile, std::int64_t steps_per_period);

    // Builds a grid from a requested step; throws std::invalid_argument unless
    // T/(2*dt) is an integer to 1e-9 relative.
    static PulseGrid from_step(const DriveProfile& profile, double dt);

    double dt() const { return dt_; }
    std::int64_t steps_per_period() const { return steps_per_period_; }
    double time(std::int64_t step) const { return static_cast<double>(step) * dt_; }

    // Drive amplitude held constant over [step*dt, (step+1)*dt).
    double value_on_step(std::int64_t step) const;

    // Number of whole steps in `duration`; throws unless it is an integer
    // multiple of dt to 1e-9 relative.
    std::int64_t steps_in(double duration) const;

private:
    DriveProfile profile_;
    std::int64_t steps_per_period_;
    double dt_;
};

}  // namespace kerrtda

#pragma once

#include <stdexcept>
#include <string>

namespace kerrtda {

// Base for every failure the library reports. Precondition violations on
// plain arguments (negative counts, misaligned grids) use
// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define KERRTDA_ERROR(Name)                  \
    class Name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    }

// classical_dynamics
KERRTDA_ERROR(NonFiniteState);
// quantum_trajectory
KERRTDA_ERROR(InvalidDimension);
KERRTDA_ERROR(TruncationBreach);
KERRTDA_ERROR(StepTooLarge);
KERRTDA_ERROR(TraceDrift);
KERRTDA_ERROR(DimensionTooLarge);
// delay_embedding
KERRTDA_ERROR(SeriesTooShort);
// persistent_homology
KERRTDA_ERROR(EmptyCloud);
KERRTDA_ERROR(RadiusNonPositive);
KERRTDA_ERROR(SizeCap);
// pipeline_cli
KERRTDA_ERROR(ConfigError);
KERRTDA_ERROR(IoError);

#undef KERRTDA_ERROR

}  // namespace kerrtda

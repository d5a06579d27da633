#include <doctest.h>

#include <cmath>

#include "kerrtda/errors.hpp"
#include "kerrtda/master_equation.hpp"
#include "support/ensemble.hpp"

using namespace kerrtda;

namespace {

QuantumParams params(int n, double chi, double gamma) {
    QuantumParams p;
    p.chi = chi;
    p.gamma = gamma;
    p.n_trunc = n;
    return p;
}

}  // namespace

TEST_CASE("amplitude damping of a Fock state") {
    const QuantumParams p = params(8, 0.008, 0.05);
    const auto result = integrate_master_equation(pure_density(fock_state(8, 3)), p, {0.0, 8.0},
                                                  {80.0, 0.04, 0.8, 0.0});
    REQUIRE(result.photons.size() == 101);
    for (std::size_t i = 0; i < result.photons.size(); ++i) {
        const double t = result.photons.time_at(i);
        CHECK(std::abs(result.photons.values[i] - 3.0 * std::exp(-0.05 * t)) < 1e-6);
    }
    CHECK(result.max_trace_error < 1e-10);
}

TEST_CASE("without damping or drive, photon number and purity are constant") {
    const QuantumParams p = params(6, 0.3, 0.0);
    WaveFunction psi = WaveFunction::Zero(6);
    psi[0] = 0.6;
    psi[2] = complex(0.0, 0.8);
    const auto result = integrate_master_equation(pure_density(psi), p, {0.0, 8.0}, {40.0, 0.01, 0.5, 0.0});
    for (std::size_t i = 0; i < result.photons.size(); ++i) {
        CHECK(result.photons.values[i] == doctest::Approx(1.28).epsilon(1e-10));
        CHECK(result.purity.values[i] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("master-equation preconditions") {
    const QuantumParams big = params(65, 0.008, 0.05);
    CHECK_THROWS_AS(integrate_master_equation(pure_density(fock_state(65, 0)), big, {0.0, 8.0}, {8.0, 0.04, 0.8, 0.0}),
                    DimensionTooLarge);
    const QuantumParams p = params(3, 0.008, 0.05);
    DensityMatrix not_hermitian = DensityMatrix::Zero(3, 3);
    not_hermitian(0, 0) = 1.0;
    not_hermitian(0, 1) = 0.3;
    CHECK_THROWS_AS(integrate_master_equation(not_hermitian, p, {0.0, 8.0}, {8.0, 0.04, 0.8, 0.0}),
                    std::invalid_argument);
    DensityMatrix not_unit = DensityMatrix::Identity(3, 3);
    CHECK_THROWS_AS(integrate_master_equation(not_unit, p, {0.0, 8.0}, {8.0, 0.04, 0.8, 0.0}),
                    std::invalid_argument);
    DensityMatrix negative = DensityMatrix::Zero(3, 3);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(integrate_master_equation(negative, p, {0.0, 8.0}, {8.0, 0.04, 0.8, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("trajectory ensemble matches the master equation within 3 standard errors") {
    const support::WeakDriveCase c;
    const auto oracle = support::master_equation_photons(c);
    const auto ensemble = support::trajectory_ensemble(c, 500, 2024);
    REQUIRE(oracle.size() == ensemble.mean.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        CAPTURE(i);
        CHECK(std::abs(ensemble.mean[i] - oracle[i]) <= 3.0 * ensemble.standard_error[i]);
    }
}

TEST_CASE("ensemble error shrinks like 1/sqrt(M)") {
    const support::WeakDriveCase c;
    const auto oracle = support::master_equation_photons(c);
    // Average the RMS error over independent ensembles to tame its spread.
    double small = 0.0, large = 0.0;
    constexpr int kRepeats = 8;
    for (int r = 0; r < kRepeats; ++r) {
        small += support::rms_error(support::trajectory_ensemble(c, 100, 1000 + r).mean, oracle);
        large += support::rms_error(support::trajectory_ensemble(c, 400, 5000 + r).mean, oracle);
    }
    const double ratio = small / large;
    CHECK(ratio > 1.5);
    CHECK(ratio < 2.7);
}

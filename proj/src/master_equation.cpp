#include "kerrtda/master_equation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kerrtda/errors.hpp"

namespace kerrtda {

namespace {

constexpr double kTraceTolerance = 1e-6;

struct Liouvillian {
    Eigen::MatrixXcd effective;  // −iH_MC
    Eigen::MatrixXcd jump;       // √γ a

    void apply(const DensityMatrix& rho, DensityMatrix& out) const {
        out.noalias() = effective * rho;
        out.noalias() += rho * effective.adjoint();
        out.noalias() += jump * rho * jump.adjoint();
    }
};

void check_density(const DensityMatrix& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("density operator is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-10) {
        throw std::invalid_argument("density operator must have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("density operator is not positive semidefinite");
    }
}

}  // namespace

DensityMatrix pure_density(const WaveFunction& psi) { return psi * psi.adjoint(); }

MasterEquationResult integrate_master_equation(const DensityMatrix& initial, const QuantumParams& params,
                                               const DriveProfile& drive,
                                               const IntegrationWindow& window) {
    params.validate();
    const int n = params.n_trunc;
    if (n > kMasterEquationMaxDimension) {
        throw DimensionTooLarge("master-equation oracle is capped at N=" +
                                std::to_string(kMasterEquationMaxDimension));
    }
    if (initial.rows() != n || initial.cols() != n) {
        throw std::invalid_argument("initial density size != n_trunc");
    }
    check_density(initial);

    const PulseGrid grid = PulseGrid::from_step(drive, window.dt);
    const std::int64_t total = grid.steps_in(window.t_end);
    const std::int64_t stride = grid.steps_in(window.sample_interval);
    if (stride <= 0) throw std::invalid_argument("sample_interval must be >= dt");
    const std::int64_t first = grid.steps_in(std::ceil(window.t_record / window.sample_interval) *
                                             window.sample_interval);

    const FockOperators ops = build_operators(n);
    const complex minus_i{0.0, -1.0};
    const Eigen::MatrixXcd jump = std::sqrt(params.gamma) * Eigen::MatrixXcd(ops.a);
    const Liouvillian on{minus_i * Eigen::MatrixXcd(effective_hamiltonian(ops, params, drive.amplitude)), jump};
    const Liouvillian off{minus_i * Eigen::MatrixXcd(effective_hamiltonian(ops, params, 0.0)), jump};
    const Eigen::MatrixXcd number(ops.number);
    const Eigen::MatrixXcd position(ops.position);

    MasterEquationResult out;
    for (TimeSeries* s : {&out.photons, &out.position, &out.purity}) {
        s->t0 = grid.time(first);
        s->dt = grid.time(stride);
    }

    DensityMatrix rho = initial;
    DensityMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    const double dt = grid.dt();
    for (std::int64_t step = 0;; ++step) {
        const double trace_error = std::abs(rho.trace().real() - 1.0);
        out.max_trace_error = std::max(out.max_trace_error, trace_error);
        if (trace_error > kTraceTolerance) {
            std::ostringstream msg;
            msg << "trace drifted by " << trace_error << " at t=" << grid.time(step);
            throw TraceDrift(msg.str());
        }
        if (step >= first && (step - first) % stride == 0) {
            out.photons.values.push_back((number * rho).trace().real());
            out.position.values.push_back((position * rho).trace().real());
            out.purity.values.push_back((rho * rho).trace().real());
        }
        if (step == total) break;
        const Liouvillian& l = grid.value_on_step(step) != 0.0 ? on : off;
        l.apply(rho, k1);
        tmp = rho + (0.5 * dt) * k1;
        l.apply(tmp, k2);
        tmp = rho + (0.5 * dt) * k2;
        l.apply(tmp, k3);
        tmp = rho + dt * k3;
        l.apply(tmp, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.final_density = rho;
    return out;
}

}  // namespace kerrtda

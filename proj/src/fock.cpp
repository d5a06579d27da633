#include "kerrtda/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrtda/errors.hpp"

namespace kerrtda {

namespace {

using Triplet = Eigen::Triplet<complex>;

SparseMatrix from_triplets(int n, const std::vector<Triplet>& entries) {
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

}  // namespace

FockOperators build_operators(int dimension, double position_scale) {
    if (dimension < 2) {
        throw InvalidDimension("Fock truncation must be >= 2, got " + std::to_string(dimension));
    }
    FockOperators ops;
    ops.dimension = dimension;

    std::vector<Triplet> lower, number, kerr;
    for (int m = 0; m < dimension; ++m) {
        if (m >= 1) lower.emplace_back(m - 1, m, std::sqrt(static_cast<double>(m)));
        number.emplace_back(m, m, static_cast<double>(m));
        if (m >= 2) kerr.emplace_back(m, m, static_cast<double>(m) * (m - 1));
    }
    ops.a = from_triplets(dimension, lower);
    ops.adag = SparseMatrix(ops.a.adjoint());
    ops.number = from_triplets(dimension, number);
    ops.kerr = from_triplets(dimension, kerr);
    ops.position = SparseMatrix(position_scale * (ops.a + ops.adag));
    return ops;
}

void QuantumParams::validate() const {
    if (n_trunc < 2) throw InvalidDimension("n_trunc must be >= 2");
    if (!(gamma >= 0.0) || !std::isfinite(gamma) || !std::isfinite(chi)) {
        throw std::invalid_argument("quantum params: need finite chi and gamma >= 0");
    }
    if (truncation_guard_levels < 0) throw std::invalid_argument("truncation_guard_levels < 0");
}

SparseMatrix hamiltonian(const FockOperators& ops, const QuantumParams& params, double drive) {
    const complex i{0.0, 1.0};
    return SparseMatrix(0.5 * params.chi * ops.kerr + (i * drive) * (ops.adag - ops.a));
}

SparseMatrix effective_hamiltonian(const FockOperators& ops, const QuantumParams& params,
                                   double drive) {
    const complex i{0.0, 1.0};
    return SparseMatrix(hamiltonian(ops, params, drive) - (0.5 * i * params.gamma) * ops.number);
}

WaveFunction fock_state(int dimension, int level) {
    if (level < 0 || level >= dimension) throw std::invalid_argument("Fock level out of range");
    WaveFunction psi = WaveFunction::Zero(dimension);
    psi[level] = 1.0;
    return psi;
}

}  // namespace kerrtda

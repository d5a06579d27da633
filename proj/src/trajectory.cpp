#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "kerrtda/errors.hpp"
#include "kerrtda/quantum.hpp"
#include "kerrtda/rng.hpp"

namespace kerrtda {

namespace {

// Plain complex product; std::complex operator* goes through the C99
// Annex G NaN/Inf recovery path, which dominates this inner loop.
inline complex mul(complex a, complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// Generator of the non-Hermitian Schrödinger equation, dψ/dt = Gψ with
// G = −iH_MC, split as G = L + C. L is the diagonal (Kerr phase and decay)
// and is integrated exactly; C is the nearest-neighbour drive coupling.
struct SplitGenerator {
    std::vector<complex> diag;
    std::vector<complex> lower;  // C(m, m−1)
    std::vector<complex> upper;  // C(m, m+1)
    bool coupled = false;

    // Cached exp(L·h/2) and exp(L·h) for the last step size.
    mutable double cached_h = std::numeric_limits<double>::quiet_NaN();
    mutable std::vector<complex> half, full;

    explicit SplitGenerator(const SparseMatrix& g)
        : diag(g.rows()), lower(g.rows()), upper(g.rows()) {
        for (int r = 0; r < g.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(g, r); it; ++it) {
                const auto row = it.row(), col = it.col();
                if (col == row) diag[row] = it.value();
                else if (col + 1 == row) lower[row] = it.value();
                else if (col == row + 1) upper[row] = it.value();
                else throw std::logic_error("effective Hamiltonian is not tridiagonal");
                if (col != row && it.value() != complex{}) coupled = true;
            }
        }
    }

    void prepare(double h) const {
        if (h == cached_h) return;
        half.resize(diag.size());
        full.resize(diag.size());
        for (std::size_t m = 0; m < diag.size(); ++m) {
            half[m] = std::exp(0.5 * h * diag[m]);
            full[m] = mul(half[m], half[m]);
        }
        cached_h = h;
    }

    // out = C·in
    void couple(const complex* in, complex* out) const {
        const std::size_t n = diag.size();
        out[0] = mul(upper[0], in[1]);
        for (std::size_t m = 1; m + 1 < n; ++m) out[m] = mul(lower[m], in[m - 1]) + mul(upper[m], in[m + 1]);
        out[n - 1] = mul(lower[n - 1], in[n - 2]);
    }
};

// Integrating-factor (Lawson) RK4: classical RK4 applied in the interaction
// picture of L. Exact when C = 0; the stiff Kerr phases of high Fock levels
// never enter the stability bound, which is set by the drive coupling alone.
class InteractionRk4 {
public:
    explicit InteractionRk4(int n)
        : k1_(static_cast<std::size_t>(n)), k2_(static_cast<std::size_t>(n)), k3_(static_cast<std::size_t>(n)),
          k4_(static_cast<std::size_t>(n)), tmp_(static_cast<std::size_t>(n)) {}

    void step(const SplitGenerator& g, const WaveFunction& psi, double h, WaveFunction& out) {
        g.prepare(h);
        const std::size_t n = k1_.size();
        const complex* p = psi.data();
        const complex* e = g.half.data();
        const complex* e2 = g.full.data();
        out.resize(psi.size());
        complex* o = out.data();
        if (!g.coupled) {
            for (std::size_t m = 0; m < n; ++m) o[m] = mul(e2[m], p[m]);
            return;
        }
        g.couple(p, k1_.data());
        for (std::size_t m = 0; m < n; ++m) tmp_[m] = mul(e[m], p[m] + (0.5 * h) * k1_[m]);
        g.couple(tmp_.data(), k2_.data());
        for (std::size_t m = 0; m < n; ++m) tmp_[m] = mul(e[m], p[m]) + (0.5 * h) * k2_[m];
        g.couple(tmp_.data(), k3_.data());
        for (std::size_t m = 0; m < n; ++m) tmp_[m] = mul(e2[m], p[m]) + h * mul(e[m], k3_[m]);
        g.couple(tmp_.data(), k4_.data());
        for (std::size_t m = 0; m < n; ++m) {
            o[m] = mul(e2[m], p[m]) +
                   (h / 6.0) * (mul(e2[m], k1_[m]) + 2.0 * mul(e[m], k2_[m] + k3_[m]) + k4_[m]);
        }
    }

private:
    std::vector<complex> k1_, k2_, k3_, k4_, tmp_;
};

double photon_number(const WaveFunction& psi) {
    double acc = 0.0;
    for (Eigen::Index m = 1; m < psi.size(); ++m) acc += static_cast<double>(m) * std::norm(psi[m]);
    return acc;
}

complex lowering_expectation(const WaveFunction& psi) {
    complex acc{0.0, 0.0};
    for (Eigen::Index m = 1; m < psi.size(); ++m) {
        acc += std::conj(psi[m - 1]) * std::sqrt(static_cast<double>(m)) * psi[m];
    }
    return acc;
}

double top_population(const WaveFunction& psi, int levels) {
    double acc = 0.0;
    const Eigen::Index n = psi.size();
    for (Eigen::Index m = std::max<Eigen::Index>(0, n - levels); m < n; ++m) acc += std::norm(psi[m]);
    return acc;
}

}  // namespace

TrajectoryResult evolve_trajectory(const WaveFunction& initial, const QuantumParams& params,
                                   const DriveProfile& drive, const IntegrationWindow& window,
                                   std::uint64_t seed) {
    params.validate();
    const int n = params.n_trunc;
    if (initial.size() != n) throw std::invalid_argument("initial state size != n_trunc");
    const double initial_norm = initial.squaredNorm();
    if (!(std::abs(initial_norm - 1.0) < 1e-10)) {
        throw std::invalid_argument("initial state must be normalized");
    }
    const PulseGrid grid = PulseGrid::from_step(drive, window.dt);
    if (!(window.sample_interval > 0.0)) throw std::invalid_argument("sample_interval must be > 0");
    const std::int64_t total = grid.steps_in(window.t_end);
    const std::int64_t stride = grid.steps_in(window.sample_interval);
    if (stride <= 0) throw std::invalid_argument("sample_interval must be >= dt");
    const std::int64_t first = grid.steps_in(std::ceil(window.t_record / window.sample_interval) *
                                             window.sample_interval);

    const FockOperators ops = build_operators(n);
    const complex minus_i{0.0, -1.0};
    const SplitGenerator pulse_on(SparseMatrix(minus_i * effective_hamiltonian(ops, params, drive.amplitude)));
    const SplitGenerator pulse_off(SparseMatrix(minus_i * effective_hamiltonian(ops, params, 0.0)));

    TrajectoryResult out;
    for (TimeSeries* s : {&out.position, &out.re_a, &out.photons, &out.norm}) {
        s->t0 = grid.time(first);
        s->dt = grid.time(stride);
    }

    Rng rng(seed);
    double threshold = rng.uniform();
    InteractionRk4 rk4(n);
    WaveFunction psi = initial;
    WaveFunction next(n), trial(n);
    double norm = initial_norm;
    const double dt = grid.dt();
    const double locate_tol = dt / 100.0;

    auto apply_jump = [&](WaveFunction& state, double t_jump) {
        WaveFunction jumped = WaveFunction::Zero(n);
        for (int m = 1; m < n; ++m) jumped[m - 1] = std::sqrt(static_cast<double>(m)) * state[m];
        const double jumped_norm = jumped.squaredNorm();
        if (!(jumped_norm > 0.0) || !std::isfinite(jumped_norm)) {
            throw NonFiniteState("jump from a state with no photons");
        }
        state = jumped / std::sqrt(jumped_norm);
        if (!out.jumps.times.empty() && !(t_jump > out.jumps.times.back())) {
            // Two jumps resolved to the same instant; keep the record strictly increasing.
            t_jump = std::nextafter(out.jumps.times.back(), INFINITY);
        }
        out.jumps.times.push_back(t_jump);
        threshold = rng.uniform();
    };

    for (std::int64_t step = 0;; ++step) {
        if (params.truncation_guard_levels > 0) {
            const double top = top_population(psi, params.truncation_guard_levels) / norm;
            out.max_top_population = std::max(out.max_top_population, top);
            if (top > params.truncation_tolerance) {
                std::ostringstream msg;
                msg << "top " << params.truncation_guard_levels << " Fock levels hold " << top
                    << " at t=" << grid.time(step) << " (N=" << n << " too small)";
                throw TruncationBreach(msg.str());
            }
        }
        if (step >= first && (step - first) % stride == 0) {
            const double photons = photon_number(psi) / norm;
            const double re_a = lowering_expectation(psi).real() / norm;
            out.position.values.push_back(2.0 * kPositionScale * re_a);
            out.re_a.values.push_back(re_a);
            out.photons.values.push_back(photons);
            out.norm.values.push_back(norm);
        }
        if (step == total) break;

        const double jump_probability = params.gamma * (photon_number(psi) / norm) * dt;
        out.max_step_jump_probability = std::max(out.max_step_jump_probability, jump_probability);
        if (jump_probability >= params.max_jump_probability) {
            std::ostringstream msg;
            msg << "per-step jump probability " << jump_probability << " at t=" << grid.time(step)
                << " exceeds " << params.max_jump_probability << "; reduce dt";
            throw StepTooLarge(msg.str());
        }

        const SplitGenerator& g = grid.value_on_step(step) != 0.0 ? pulse_on : pulse_off;
        rk4.step(g, psi, dt, next);
        double next_norm = next.squaredNorm();
        if (!std::isfinite(next_norm)) {
            throw NonFiniteState("wavefunction norm diverged at t=" + std::to_string(grid.time(step)));
        }

        if (next_norm > threshold) {
            out.max_norm_increase = std::max(out.max_norm_increase, (next_norm - norm) / norm);
            psi.swap(next);
            norm = next_norm;
            continue;
        }

        // One or more jumps inside [t, t + dt).
        double t_local = grid.time(step);
        double remaining = dt;
        while (true) {
            double lo = 0.0, hi = remaining;
            while (hi - lo > locate_tol) {
                const double mid = 0.5 * (lo + hi);
                rk4.step(g, psi, mid, trial);
                if (trial.squaredNorm() <= threshold) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            rk4.step(g, psi, hi, trial);
            t_local += hi;
            remaining -= hi;
            psi = trial;
            apply_jump(psi, t_local);
            norm = 1.0;
            if (remaining <= 0.0) break;
            rk4.step(g, psi, remaining, trial);
            const double trial_norm = trial.squaredNorm();
            if (trial_norm > threshold) {
                psi.swap(trial);
                norm = trial_norm;
                break;
            }
        }
    }

    out.final_state = psi / std::sqrt(norm);
    return out;
}

TimeSeries bin_jump_counts(const JumpRecord& record, double width, double stride, double t_start,
                           double t_end) {
    if (!(width > 0.0) || !(stride > 0.0) || !(t_end > t_start)) {
        throw std::invalid_argument("bin_jump_counts: need width > 0, stride > 0, t_end > t_start");
    }
    TimeSeries out;
    out.t0 = t_start;
    out.dt = stride;
    const double span = t_end - t_start;
    if (width > span) return out;
    const auto bins = static_cast<std::size_t>(std::floor((span - width) / stride + 1e-12)) + 1;
    out.values.assign(bins, 0.0);
    const auto& times = record.times;
    for (std::size_t k = 0; k < bins; ++k) {
        const double lo = t_start + static_cast<double>(k) * stride;
        const double hi = lo + width;
        const auto first = std::lower_bound(times.begin(), times.end(), lo);
        const auto last = std::lower_bound(first, times.end(), hi);
        out.values[k] = static_cast<double>(last - first);
    }
    return out;
}

}  // namespace kerrtda

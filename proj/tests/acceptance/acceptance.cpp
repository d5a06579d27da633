// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `kerrtda_acceptance 3 5` runs only the listed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kerrtda/classical.hpp"
#include "kerrtda/config.hpp"
#include "kerrtda/drive.hpp"
#include "kerrtda/embedding.hpp"
#include "kerrtda/export.hpp"
#include "kerrtda/persistence.hpp"
#include "kerrtda/pipeline.hpp"
#include "kerrtda/quantum.hpp"
#include "kerrtda/rng.hpp"
#include "kerrtda/stats.hpp"
#include "oracle/naive_persistence.hpp"
#include "support/clouds.hpp"
#include "support/ensemble.hpp"

using namespace kerrtda;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

SweepConfig desk(Mode mode = Mode::classical) {
    SweepConfig c;
    apply_preset(c, "desk");
    c.mode = mode;
    return c;
}

// Labeled phase points (A, T) for the robustness check. Labels come from the
// classical stroboscopic samples Re ξ(nT) over 100 periods after 200T:
// regular = a single period-1 value, chaotic = at least 90 distinct values.
const std::vector<PhasePoint> kRegularPoints{{1.0, 8.0}, {1.25, 12.5}, {3.75, 31.25}};
const std::vector<PhasePoint> kChaoticPoints{{4.5, 8.0}, {1.875, 12.5}, {3.125, 25.0}};

// 1. Rips persistence against the brute-force reduction.
void oracle_equivalence(Outcome& out) {
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        const auto dm = DistanceMatrix::from_cloud(support::oracle_cloud(i));
        if (rips_persistence(dm, 1).canonical().features != oracle::naive_rips_persistence(dm).canonical().features) {
            ++mismatches;
        }
    }
    out.detail << "200 clouds, " << mismatches << " mismatches ";
    out.require(mismatches == 0, "diagrams differ from the oracle");
}

// 2. Linear decay of the classical amplitude and the no-jump quantum norm.
void analytic_decay(Outcome& out) {
    const ClassicalParams classical{0.0, 0.05, false};
    const auto run = integrate_classical({complex{2.0, 0.0}}, classical, {0.0, 8.0}, {40.0, 0.004, 0.4, 0.0});
    const double classical_err = std::abs(run.final_state.xi - complex{2.0 * std::exp(-1.0), 0.0});
    out.detail << "classical |xi(40) - 2/e| = " << classical_err << "; ";
    out.require(classical_err < 1e-6, "classical decay");

    QuantumParams p;
    p.chi = 0.0;
    p.gamma = 0.05;
    p.n_trunc = 4;
    p.truncation_guard_levels = 0;
    // A seed whose first threshold lies below e^{-2.2}: no jump before t = 40.
    std::uint64_t seed = 1;
    while (Rng(seed).uniform() > 0.1) ++seed;
    const auto q = evolve_trajectory(fock_state(4, 1), p, {0.0, 8.0}, {40.0, 0.004, 0.4, 0.0}, seed);
    double norm_err = 0.0;
    for (std::size_t i = 0; i < q.norm.size(); ++i) {
        norm_err = std::max(norm_err, std::abs(q.norm.values[i] - std::exp(-p.gamma * q.norm.time_at(i))));
    }
    out.detail << "quantum max |norm - e^{-gt}| = " << norm_err << " over t in [0, 40]";
    out.require(q.jumps.times.empty(), "unexpected jump");
    out.require(norm_err < 1e-6, "quantum norm decay");
}

// 3. Trajectory ensemble vs master equation; jump-time distribution.
void unraveling(Outcome& out) {
    const support::WeakDriveCase c;
    const auto ensemble = support::trajectory_ensemble(c, 500, 2024);
    const auto exact = support::master_equation_photons(c);
    std::size_t outside = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double z = std::abs(ensemble.mean[i] - exact[i]) / std::max(ensemble.standard_error[i], 1e-300);
        worst = std::max(worst, z);
        outside += z > 3.0;
    }
    out.detail << exact.size() << " samples, worst |dev|/SE = " << worst << "; ";
    out.require(outside == 0, "ensemble outside 3 SE");

    const auto times = support::single_photon_jump_times(1000, 0.05);
    const double ks = support::ks_statistic_exponential(times, 0.05);
    const double crit = support::ks_critical_1pct(times.size());
    out.detail << "KS D = " << ks << " (1% critical " << crit << ")";
    out.require(times.size() == 1000, "missing jumps");
    out.require(ks < crit, "KS rejects Exp(gamma)");
}

// With `record_only` the truncation guard still measures the population of
// the top Fock levels but never aborts; the maximum is reported.
double mean_photons(int n_trunc, double transient, double end, std::uint64_t seed, bool record_only, Outcome& out) {
    SweepConfig c = desk(Mode::quantum_x);
    c.n_trunc = n_trunc;
    c.transient_periods = transient;
    c.end_periods = end;
    QuantumParams p;
    p.chi = c.chi;
    p.gamma = c.gamma;
    p.n_trunc = n_trunc;
    if (record_only) p.truncation_tolerance = 1.0;
    const double T = 8.0;
    const int steps = quantum_steps_per_period(T, c);
    try {
        const auto run = evolve_trajectory(fock_state(n_trunc, 0), p, {4.5, T},
                                           {end * T, T / steps, T / c.samples_per_period, transient * T}, seed);
        if (record_only) out.detail << "(N=" << n_trunc << " max top-level population " << run.max_top_population << ") ";
        return stats::mean(run.photons.values);
    } catch (const std::exception& e) {
        out.detail << "(N=" << n_trunc << ": " << e.what() << ") ";
        return std::nan("");
    }
}

// 4. Post-transient mean photon number in the chaotic cell.
void photon_number(Outcome& out) {
    const double full = mean_photons(300, 400.0, 1000.0, 4, false, out);
    out.detail << "N=300 400T-1000T: <n> = " << full << " (target [35, 65]); ";
    out.require(full >= 35.0 && full <= 65.0, "full-scale <n>");
    const double small = mean_photons(150, 100.0, 300.0, 4, true, out);
    out.detail << "N=150 100T-300T: <n> = " << small << " (target [25, 75])";
    out.require(small >= 25.0 && small <= 75.0, "desk-scale <n>");
}

std::vector<double> finite_h1(const PersistenceDiagram& d) {
    std::vector<double> out;
    for (const auto& f : d.features) {
        if (f.dim == 1 && !f.essential()) out.push_back(f.lifetime());
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

// 5. Regular vs chaotic topology at T = 8.
void topology_contrast(Outcome& out) {
    const SweepConfig classical = desk();
    const auto reg = run_cell(1.0, 8.0, classical, cell_seed(classical, 0));
    const auto cha = run_cell(4.5, 8.0, classical, cell_seed(classical, 1));
    out.require(reg.status == CellStatus::ok && cha.status == CellStatus::ok, "classical cell flagged");
    const auto reg_life = finite_h1(reg.diagram);
    const auto cha_life = finite_h1(cha.diagram);
    const double top = reg_life.empty() ? 0.0 : reg_life[0];
    const double second = reg_life.size() > 1 ? reg_life[1] : 0.0;
    const auto many = cha_life.empty() ? 0
                                       : std::count_if(cha_life.begin(), cha_life.end(),
                                                       [&](double l) { return l > 0.05 * cha_life[0]; });
    out.detail << "classical regular top/second = " << top << "/" << second << "; chaotic H1 above 5% = " << many
               << "; ";
    out.require(top > 0.0 && top >= 5.0 * second, "regular cell lacks a dominant 1-cycle");
    out.require(many >= 10, "chaotic cell has fewer than 10 significant 1-cycles");

    const SweepConfig quantum = desk(Mode::quantum_x);
    const auto qreg = run_cell(1.0, 8.0, quantum, cell_seed(quantum, 0));
    const auto qcha = run_cell(4.5, 8.0, quantum, cell_seed(quantum, 1));
    out.require(qreg.l_avg && qcha.l_avg && reg.l_avg && cha.l_avg, "cell without L_avg");
    if (qreg.l_avg && qcha.l_avg && reg.l_avg && cha.l_avg) {
        out.detail << "L_avg classical " << *reg.l_avg << " vs " << *cha.l_avg << ", quantum-x " << *qreg.l_avg
                   << " vs " << *qcha.l_avg;
        out.require((*cha.l_avg > *reg.l_avg) == (*qcha.l_avg > *qreg.l_avg), "quantum ordering differs");
    }
}

// 6. Rank correlation of the classical and quantum-x desk maps.
void map_correlation(Outcome& out) {
    const auto classical = sweep_phase_diagram(desk(Mode::classical));
    const auto quantum = sweep_phase_diagram(desk(Mode::quantum_x));
    std::vector<double> x, y;
    for (std::size_t i = 0; i < classical.cells.size(); ++i) {
        if (classical.cells[i].l_avg && quantum.cells[i].l_avg) {
            x.push_back(*classical.cells[i].l_avg);
            y.push_back(*quantum.cells[i].l_avg);
        }
    }
    const double rho = x.size() >= 2 ? stats::spearman(x, y) : 0.0;
    out.detail << "8x8 desk grids, " << x.size() << " comparable cells, flagged classical/quantum = "
               << classical.flagged() << "/" << quantum.flagged() << ", Spearman = " << rho;
    out.require(rho > 0.5, "Spearman <= 0.5");
}

// 7. Regular/chaotic separation across embedding hyperparameters.
void robustness(Outcome& out) {
    std::vector<std::size_t> taus(11);
    std::iota(taus.begin(), taus.end(), std::size_t{2});
    const auto rows =
        robustness_study(desk(Mode::quantum_x), kRegularPoints, kChaoticPoints, taus, {2, 3, 4}, 2, 7);
    std::size_t separated = 0;
    for (const auto& r : rows) {
        const bool ok = r.regular_count == kRegularPoints.size() && r.chaotic_count == kChaoticPoints.size() &&
                        r.chaotic_mean > r.regular_mean;
        separated += ok;
        if (!ok) {
            out.detail << r.parameter << "(tau=" << r.tau << ",d=" << r.dim << "): " << r.regular_mean << " vs "
                       << r.chaotic_mean << "; ";
        }
    }
    out.detail << separated << "/" << rows.size() << " rows with mean(chaotic) > mean(regular)";
    out.require(separated == rows.size(), "separation lost");
}

// 8. Property suites.
void properties(Outcome& out) {
    // Embedding cardinality and affine equivariance.
    Rng rng(8);
    TimeSeries s;
    for (int i = 0; i < 500; ++i) s.values.push_back(rng.uniform());
    bool embed_ok = true;
    for (std::size_t tau : {1u, 3u, 9u}) {
        for (std::size_t d : {1u, 2u, 4u}) {
            const auto cloud = delay_embed(s, tau, d);
            embed_ok &= cloud.size() == s.size() - (d - 1) * tau && cloud.dim() == d;
            TimeSeries t = s;
            for (double& v : t.values) v = 3.0 * v - 1.0;
            const auto mapped = delay_embed(t, tau, d);
            for (std::size_t k = 0; k < cloud.coords().size(); ++k) {
                embed_ok &= mapped.coords()[k] == 3.0 * cloud.coords()[k] - 1.0;
            }
        }
    }
    out.require(embed_ok, "embedding cardinality/equivariance");

    // Diagram scale equivariance and permutation invariance.
    const auto cloud = support::random_cloud(60, 2, 17);
    const auto dm = DistanceMatrix::from_cloud(cloud);
    const auto base = rips_persistence(dm, 1).canonical();
    const auto doubled = rips_persistence(dm.scaled(2.0), 1).canonical();
    bool scale_ok = base.features.size() == doubled.features.size();
    for (std::size_t i = 0; scale_ok && i < base.features.size(); ++i) {
        scale_ok &= doubled.features[i].birth == 2.0 * base.features[i].birth &&
                    doubled.features[i].death == 2.0 * base.features[i].death;
    }
    out.require(scale_ok, "diagram scale equivariance");
    PointCloud reversed(2);
    for (std::size_t i = cloud.size(); i-- > 0;) reversed.push_back(cloud.point(i));
    out.require(rips_persistence(DistanceMatrix::from_cloud(reversed), 1).canonical().features == base.features,
                "permutation invariance");

    // Drive periodicity.
    bool drive_ok = true;
    const DriveProfile drive{4.5, 8.0};
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.0173 * i;
        const double v = drive_value(drive, t);
        drive_ok &= (v == 0.0 || v == 4.5);
        for (int k : {1, 5, 50}) drive_ok &= drive_value(drive, t + k * drive.period) == v;
    }
    out.require(drive_ok, "drive periodicity");

    // Norm monotone between jumps.
    QuantumParams p;
    p.chi = 0.008;
    p.gamma = 0.05;
    p.n_trunc = 100;
    const auto run = evolve_trajectory(fock_state(100, 0), p, {1.0, 8.0}, {400.0, 0.004, 0.4, 0.0}, 3);
    out.require(!run.jumps.times.empty() && run.max_norm_increase <= 0.0, "norm grew between jumps");

    // Seed reproducibility, byte for byte.
    SweepConfig c = desk(Mode::quantum_x);
    c.transient_periods = 20.0;
    c.end_periods = 80.0;
    c.amplitude = {1.0, 4.5, 2};
    c.period = {8.0, 8.0, 1};
    const auto a = sweep_phase_diagram(c);
    const auto b = sweep_phase_diagram(c);
    bool bytes_ok = grid_csv(a) == grid_csv(b);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        bytes_ok &= diagram_csv(a.cells[i].diagram) == diagram_csv(b.cells[i].diagram);
        bytes_ok &= series_csv(a.cells[i].series) == series_csv(b.cells[i].series);
    }
    c.seed += 1;
    const bool seed_matters = series_csv(sweep_phase_diagram(c).cells[0].series) != series_csv(a.cells[0].series);
    out.require(bytes_ok, "CSV outputs differ between identical runs");
    out.require(seed_matters, "seed has no effect");
    out.detail << "embedding, scale/permutation, drive periodicity, norm monotonicity ("
               << run.jumps.times.size() << " jumps), byte-identical CSVs";
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "persistence oracle equivalence", oracle_equivalence},
        {2, "analytic decay", analytic_decay},
        {3, "unraveling consistency", unraveling},
        {4, "mean photon number", photon_number},
        {5, "regular/chaotic topology contrast", topology_contrast},
        {6, "classical/quantum map correlation", map_correlation},
        {7, "hyperparameter robustness", robustness},
        {8, "property suites", properties},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    bool all = true;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "[exception: " << e.what() << "]";
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all &= out.pass;
        std::printf("CRITERION %d %s: %s -- %s (%.1f s)\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                    out.detail.str().c_str(), seconds);
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}

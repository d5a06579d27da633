#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kerrtda/classical.hpp"
#include "kerrtda/config.hpp"
#include "kerrtda/embedding.hpp"
#include "kerrtda/errors.hpp"
#include "kerrtda/export.hpp"
#include "kerrtda/format.hpp"
#include "kerrtda/persistence.hpp"
#include "kerrtda/pipeline.hpp"

namespace fs = std::filesystem;
using namespace kerrtda;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCellFailures = 2;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    std::string preset;
    std::string mode;
    std::vector<std::string> settings;  // key=value overrides
    bool no_svg = false;
};

std::string strip_preset_lines(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::string body = line.substr(0, line.find('#'));
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
            std::string key = body.substr(0, eq);
            key.erase(0, key.find_first_not_of(" \t"));
            key.erase(key.find_last_not_of(" \t") + 1);
            if (key == "preset") continue;
        }
        out << line << '\n';
    }
    return out.str();
}

// Precedence, lowest first: built-in defaults, preset (flag beats file),
// config file entries, then command-line flags.
SweepConfig resolve_config(const CommonOptions& opts) {
    SweepConfig config;
    std::string file_text;
    if (!opts.config_path.empty()) {
        try {
            file_text = read_text_file(opts.config_path);
        } catch (const IoError& e) {
            throw ConfigError(e.what());
        }
    }
    if (!opts.preset.empty()) {
        apply_preset(config, opts.preset);
        apply_config_text(config, strip_preset_lines(file_text));
    } else {
        apply_config_text(config, file_text);
    }
    if (!opts.mode.empty()) apply_setting(config, "mode", opts.mode);
    if (opts.seed) config.seed = *opts.seed;
    for (const auto& entry : opts.settings) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + entry + "'");
        apply_setting(config, entry.substr(0, eq), entry.substr(eq + 1));
    }
    config.validate();
    return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option("--seed", opts.seed, "base RNG seed");
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--preset", opts.preset, "desk or full")->check(CLI::IsMember({"desk", "full"}));
    cmd->add_option("--mode", opts.mode, "observable")
        ->check(CLI::IsMember({"classical", "quantum-x", "quantum-photon-count"}));
    cmd->add_option("--set", opts.settings, "override one config key (key=value), repeatable");
    cmd->add_flag("--no-svg", opts.no_svg, "skip SVG output");
}

std::string point_label(double amplitude, double period) {
    return "A" + format_double(amplitude) + "_T" + format_double(period);
}

void print_manifest(const std::vector<fs::path>& files) {
    for (const auto& f : files) std::cout << f.string() << '\n';
}

std::vector<PhasePoint> parse_points(const std::string& text) {
    // "A:T,A:T,..."
    std::vector<PhasePoint> points;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("point '" + item + "' is not A:T");
        try {
            points.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw ConfigError("point '" + item + "' is not numeric");
        }
    }
    if (points.empty()) throw ConfigError("empty point list");
    return points;
}

nlohmann::json diagnostics_json(const CellResult& cell) {
    const auto& d = cell.diagnostics;
    nlohmann::json j;
    j["A"] = cell.amplitude;
    j["T"] = cell.period;
    j["status"] = to_string(cell.status);
    j["L_avg"] = cell.l_avg ? nlohmann::json(*cell.l_avg) : nlohmann::json(nullptr);
    j["seed"] = d.seed;
    j["tau"] = d.tau;
    j["dim"] = d.dim;
    j["series_dt"] = d.series_dt;
    j["series_length"] = d.series_length;
    j["cloud_size"] = d.cloud_size;
    j["landmarks"] = d.landmarks;
    j["h1_features"] = d.h1_features;
    j["top_lifetime"] = d.top_lifetime;
    j["second_lifetime"] = d.second_lifetime;
    j["mean_photons"] = d.mean_photons;
    j["jumps"] = d.jumps;
    j["l_avg_std"] = d.l_avg_std;
    j["message"] = d.message;
    return j;
}

TimeSeries load_series(const std::string& path) {
    try {
        return parse_series_csv(read_text_file(path));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological phase detection for the driven Kerr cavity"};
    app.require_subcommand(1);

    CommonOptions opts;
    double amplitude = 1.0;
    double period = 8.0;
    auto add_point = [&](CLI::App* cmd) {
        cmd->add_option("-A,--amplitude", amplitude, "drive amplitude")->capture_default_str();
        cmd->add_option("-T,--period", period, "drive period")->capture_default_str();
    };

    auto* classical_sim = app.add_subcommand("classical-sim", "integrate the mean-field equation, write Re ξ");
    add_common(classical_sim, opts);
    add_point(classical_sim);

    auto* quantum_sim = app.add_subcommand("quantum-sim", "one quantum trajectory, write the observable series");
    add_common(quantum_sim, opts);
    add_point(quantum_sim);

    auto* bifurcation = app.add_subcommand("bifurcation", "stroboscopic Re ξ(nT) against A");
    add_common(bifurcation, opts);
    bifurcation->add_option("-T,--period", period, "drive period")->capture_default_str();
    double bif_a_min = 0.05, bif_a_max = 5.0;
    std::size_t bif_count = 100;
    int n_min = 200, n_max = 300;
    bifurcation->add_option("--a-min", bif_a_min)->capture_default_str();
    bifurcation->add_option("--a-max", bif_a_max)->capture_default_str();
    bifurcation->add_option("--a-count", bif_count)->capture_default_str();
    bifurcation->add_option("--n-min", n_min, "first recorded period (exclusive)")->capture_default_str();
    bifurcation->add_option("--n-max", n_max, "last recorded period (exclusive)")->capture_default_str();

    std::string input_path;
    auto* embed = app.add_subcommand("embed", "estimate τ and d for a series and write the delay cloud");
    add_common(embed, opts);
    embed->add_option("--input", input_path, "series CSV (t,value)")->required();

    auto* ph = app.add_subcommand("ph", "persistence diagram of an embedded series");
    add_common(ph, opts);
    ph->add_option("--input", input_path, "series CSV (t,value)")->required();

    auto* cell = app.add_subcommand("cell", "full pipeline for one (A, T) cell");
    add_common(cell, opts);
    add_point(cell);

    auto* sweep = app.add_subcommand("sweep", "phase diagram over the configured (A, T) grid");
    add_common(sweep, opts);

    auto* robustness = app.add_subcommand("robustness", "L_avg separation across τ and d");
    add_common(robustness, opts);
    std::string regular_text = "1:8,1.25:12.5,3.75:31.25";
    std::string chaotic_text = "4.5:8,1.875:12.5,3.125:25";
    std::vector<std::size_t> taus{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<std::size_t> dims{2, 3, 4};
    robustness->add_option("--regular", regular_text, "regular points A:T,...")->capture_default_str();
    robustness->add_option("--chaotic", chaotic_text, "chaotic points A:T,...")->capture_default_str();
    robustness->add_option("--taus", taus, "delays swept at d = 2");
    robustness->add_option("--dims", dims, "dimensions swept at τ = 7");

    auto* export_cmd = app.add_subcommand("export", "render SVGs from existing CSVs");
    add_common(export_cmd, opts);
    std::string grid_input, diagram_input;
    export_cmd->add_option("--grid", grid_input, "grid CSV (A,T,L_avg,status)");
    export_cmd->add_option("--diagram", diagram_input, "diagram CSV (dim,birth,death)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        SweepConfig config = resolve_config(opts);
        const fs::path out_dir = opts.out_dir;
        const ExportFormats formats{true, !opts.no_svg};
        ArtifactBundle bundle;
        bundle.tag = config_hash(config);
        int status = kExitOk;

        if (*classical_sim || *quantum_sim) {
            if (*classical_sim) {
                config.mode = Mode::classical;
            } else if (config.mode == Mode::classical) {
                config.mode = Mode::quantum_x;
            }
            config.validate();
            bundle.tag = config_hash(config);
            const Observation obs = simulate_observable(amplitude, period, config, config.seed);
            bundle.series.emplace_back(to_string(config.mode) + "_" + point_label(amplitude, period), obs.series);
            if (config.mode != Mode::classical) {
                std::cerr << "mean photons " << format_double(obs.mean_photons) << ", jumps " << obs.jumps << '\n';
            }
        } else if (*bifurcation) {
            GridAxis axis{bif_a_min, bif_a_max, bif_count};
            const ClassicalParams params{config.chi, config.gamma, config.nonlinear_conjugate};
            const auto columns = bifurcation_scan(axis.values(), period, params, n_min, n_max,
                                                  config.steps_per_period);
            std::ostringstream csv;
            csv << "A,value\n";
            for (const auto& column : columns) {
                if (!column.valid) continue;
                for (double v : column.samples) csv << format_double(column.amplitude) << ',' << format_double(v) << '\n';
            }
            fs::create_directories(out_dir);
            const fs::path path = out_dir / ("bifurcation_" + bundle.tag + "_T" + format_double(period) + ".csv");
            write_text_file(path, csv.str());
            std::cout << path.string() << '\n';
            return kExitOk;
        } else if (*embed) {
            const TimeSeries series = load_series(input_path);
            const EmbeddingChoice choice = choose_embedding(series, config);
            const PointCloud cloud = delay_embed(series, choice.tau, choice.dim);
            std::ostringstream csv;
            for (std::size_t c = 0; c < cloud.dim(); ++c) csv << (c ? "," : "") << 'x' << c;
            csv << '\n';
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                for (std::size_t c = 0; c < cloud.dim(); ++c) csv << (c ? "," : "") << format_double(cloud(i, c));
                csv << '\n';
            }
            fs::create_directories(out_dir);
            const fs::path path = out_dir / ("embedding_" + bundle.tag + ".csv");
            write_text_file(path, csv.str());
            std::cerr << "tau " << choice.tau << ", dim " << choice.dim << '\n';
            std::cout << path.string() << '\n';
            return kExitOk;
        } else if (*ph) {
            const TimeSeries series = load_series(input_path);
            CellDiagnostics diag;
            const auto choice = choose_embedding(series, config);
            const auto diagram = series_persistence(series, choice, config, diag);
            std::cerr << "tau " << diag.tau << ", dim " << diag.dim << ", L_avg "
                      << format_double(average_lifetime(diagram, 1)) << '\n';
            bundle.diagrams.emplace_back(fs::path(input_path).stem().string(), diagram);
        } else if (*cell) {
            const CellResult result = run_cell(amplitude, period, config, config.seed);
            const std::string label = to_string(config.mode) + "_" + point_label(amplitude, period);
            bundle.diagrams.emplace_back(label, result.diagram);
            bundle.series.emplace_back(label, result.series);
            fs::create_directories(out_dir);
            const fs::path path = out_dir / ("cell_" + bundle.tag + "_" + label + ".json");
            write_text_file(path, diagnostics_json(result).dump(2) + "\n");
            std::cout << path.string() << '\n';
            if (result.status != CellStatus::ok) {
                std::cerr << "cell flagged " << to_string(result.status) << ": " << result.diagnostics.message << '\n';
                status = kExitCellFailures;
            }
        } else if (*sweep) {
            PhaseDiagramGrid grid = sweep_phase_diagram(config);
            for (std::size_t it = 0; it < grid.periods.size(); ++it) {
                for (std::size_t ia = 0; ia < grid.amplitudes.size(); ++ia) {
                    const auto& c = grid.at(it, ia);
                    if (c.status == CellStatus::ok) bundle.diagrams.emplace_back(cell_label(it, ia), c.diagram);
                }
            }
            const std::size_t flagged = grid.flagged();
            bundle.grid = std::move(grid);
            if (flagged > 0) {
                std::cerr << flagged << " cell(s) flagged; see the status column\n";
                status = kExitCellFailures;
            }
        } else if (*robustness) {
            const auto rows = robustness_study(config, parse_points(regular_text), parse_points(chaotic_text), taus, dims);
            const std::size_t expected_regular = parse_points(regular_text).size();
            const std::size_t expected_chaotic = parse_points(chaotic_text).size();
            for (const auto& row : rows) {
                if (row.regular_count != expected_regular || row.chaotic_count != expected_chaotic) {
                    status = kExitCellFailures;
                }
            }
            bundle.robustness = rows;
        } else if (*export_cmd) {
            if (grid_input.empty() && diagram_input.empty()) throw ConfigError("export needs --grid and/or --diagram");
            fs::create_directories(out_dir);
            std::vector<fs::path> written;
            try {
                if (!grid_input.empty()) {
                    const auto grid = parse_grid_csv(read_text_file(grid_input));
                    const fs::path path = out_dir / (fs::path(grid_input).stem().string() + ".svg");
                    write_text_file(path, heatmap_svg(grid));
                    written.push_back(path);
                }
                if (!diagram_input.empty()) {
                    const auto diagram = parse_diagram_csv(read_text_file(diagram_input));
                    const fs::path path = out_dir / (fs::path(diagram_input).stem().string() + ".svg");
                    write_text_file(path, diagram_svg(diagram, fs::path(diagram_input).stem().string()));
                    written.push_back(path);
                }
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            print_manifest(written);
            return kExitOk;
        }

        print_manifest(export_artifacts(bundle, out_dir, formats));
        return status;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

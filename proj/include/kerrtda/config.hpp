#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kerrtda {

enum class Mode { classical, quantum_x, quantum_photon_count };
enum class EmbeddingPolicy { automatic, fixed };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

// Inclusive linspace; a single-count axis holds only `min`.
struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const;
};

struct SweepConfig {
    Mode mode = Mode::classical;
    GridAxis amplitude{0.625, 5.0, 8};
    GridAxis period{6.25, 50.0, 8};
    bool strict_ranges = true;  // enforce 0 < A <= 5, 0 < T <= 50

    // physics
    double chi = 0.008;
    double gamma = 0.05;
    int n_trunc = 300;
    bool nonlinear_conjugate = false;

    // evolution window, in drive periods
    double transient_periods = 100.0;
    double end_periods = 300.0;
    int samples_per_period = 20;
    int steps_per_period = 2000;

    // photon-count observable
    double bin_width = 9.0;
    double bin_stride = 9.0;

    // embedding
    EmbeddingPolicy embedding = EmbeddingPolicy::automatic;
    std::size_t tau = 7;
    std::size_t dim = 2;
    std::size_t max_tau = 40;
    // FNN picks d in [1, max_dim]; the result is raised to min_dim because a
    // one-dimensional cloud carries no 1-cycles.
    std::size_t min_dim = 2;
    std::size_t max_dim = 4;
    std::size_t mi_bins = 16;
    double fnn_ratio = 15.0;
    double fnn_threshold = 0.01;

    // topology
    std::size_t subsample = 400;

    std::uint64_t seed = 1;
    int trajectories = 1;

    // Throws ConfigError describing the first violated constraint.
    void validate() const;
};

// Presets: "desk" (8×8 grid, 100T–300T window) and "full" (50×50 grid,
// 400T–1000T window). Both use N = 300.
void apply_preset(SweepConfig& config, const std::string& name);

// Sets one `key = value` entry. Unknown keys and malformed values raise
// ConfigError.
void apply_setting(SweepConfig& config, const std::string& key, const std::string& value);

// Plain-text config: one `key = value` per line; blank lines and text after
// '#' are ignored. A `preset` key is applied before the other entries.
void apply_config_text(SweepConfig& config, const std::string& text);
SweepConfig load_config(const std::filesystem::path& path, SweepConfig base = {});

// Every setting as `key = value` lines in a fixed order; feeding it back to
// apply_config_text reproduces the config.
std::string canonical_text(const SweepConfig& config);

// 16 hex digits of FNV-1a over canonical_text; stable artifact tag.
std::string config_hash(const SweepConfig& config);

}  // namespace kerrtda

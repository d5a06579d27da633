#include "kerrtda/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kerrtda/errors.hpp"
#include "kerrtda/format.hpp"

namespace kerrtda {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::classical: return "classical";
        case Mode::quantum_x: return "quantum-x";
        case Mode::quantum_photon_count: return "quantum-photon-count";
    }
    return "classical";
}

Mode parse_mode(const std::string& text) {
    if (text == "classical") return Mode::classical;
    if (text == "quantum-x") return Mode::quantum_x;
    if (text == "quantum-photon-count") return Mode::quantum_photon_count;
    throw ConfigError("unknown mode '" + text + "' (classical | quantum-x | quantum-photon-count)");
}

std::vector<double> GridAxis::values() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

void SweepConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (amplitude.count < 1 || period.count < 1) fail("grid counts must be >= 1");
    if (amplitude.min > amplitude.max || period.min > period.max) fail("grid min must not exceed max");
    if (period.min <= 0.0) fail("drive period must be > 0");
    if (amplitude.min < 0.0) fail("drive amplitude must be >= 0");
    if (strict_ranges) {
        if (amplitude.min <= 0.0 || amplitude.max > 5.0) fail("A outside (0, 5]; set strict_ranges = false to override");
        if (period.max > 50.0) fail("T outside (0, 50]; set strict_ranges = false to override");
    }
    if (!(gamma >= 0.0)) fail("gamma must be >= 0");
    if (n_trunc < 2) fail("n_trunc must be >= 2");
    if (!(transient_periods >= 0.0) || !(end_periods > transient_periods)) fail("need 0 <= transient_periods < end_periods");
    if (samples_per_period < 1) fail("samples_per_period must be >= 1");
    if (steps_per_period < 2 || steps_per_period % 2 != 0) fail("steps_per_period must be even and >= 2");
    if (steps_per_period % samples_per_period != 0) fail("steps_per_period must be a multiple of samples_per_period");
    if (!(bin_width > 0.0) || !(bin_stride > 0.0)) fail("bin width and stride must be > 0");
    if (tau < 1 || dim < 1) fail("tau and dim must be >= 1");
    if (max_tau < 2) fail("max_tau must be >= 2");
    if (max_dim < 2) fail("max_dim must be >= 2");
    if (min_dim < 1 || min_dim > max_dim) fail("min_dim must be in [1, max_dim]");
    if (mi_bins < 2) fail("mi_bins must be >= 2");
    if (subsample < 1) fail("subsample must be >= 1");
    if (trajectories < 1) fail("trajectories must be >= 1");
}

void apply_preset(SweepConfig& config, const std::string& name) {
    if (name == "desk") {
        config.amplitude = {0.625, 5.0, 8};
        config.period = {6.25, 50.0, 8};
        config.n_trunc = 300;
        config.transient_periods = 100.0;
        config.end_periods = 300.0;
    } else if (name == "full") {
        config.amplitude = {0.1, 5.0, 50};
        config.period = {1.0, 50.0, 50};
        config.n_trunc = 300;
        config.transient_periods = 400.0;
        config.end_periods = 1000.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (desk | full)");
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected on/off, got '" + v + "'");
}

using Setter = std::function<void(SweepConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"mode", [](SweepConfig& c, const std::string&, const std::string& v) { c.mode = parse_mode(v); }},
        {"a_min", [](SweepConfig& c, const std::string& k, const std::string& v) { c.amplitude.min = to_double(k, v); }},
        {"a_max", [](SweepConfig& c, const std::string& k, const std::string& v) { c.amplitude.max = to_double(k, v); }},
        {"a_count", [](SweepConfig& c, const std::string& k, const std::string& v) { c.amplitude.count = to_int<std::size_t>(k, v); }},
        {"t_min", [](SweepConfig& c, const std::string& k, const std::string& v) { c.period.min = to_double(k, v); }},
        {"t_max", [](SweepConfig& c, const std::string& k, const std::string& v) { c.period.max = to_double(k, v); }},
        {"t_count", [](SweepConfig& c, const std::string& k, const std::string& v) { c.period.count = to_int<std::size_t>(k, v); }},
        {"strict_ranges", [](SweepConfig& c, const std::string& k, const std::string& v) { c.strict_ranges = to_bool(k, v); }},
        {"chi", [](SweepConfig& c, const std::string& k, const std::string& v) { c.chi = to_double(k, v); }},
        {"gamma", [](SweepConfig& c, const std::string& k, const std::string& v) { c.gamma = to_double(k, v); }},
        {"n_trunc", [](SweepConfig& c, const std::string& k, const std::string& v) { c.n_trunc = to_int<int>(k, v); }},
        {"nonlinear_conjugate", [](SweepConfig& c, const std::string& k, const std::string& v) { c.nonlinear_conjugate = to_bool(k, v); }},
        {"transient_periods", [](SweepConfig& c, const std::string& k, const std::string& v) { c.transient_periods = to_double(k, v); }},
        {"end_periods", [](SweepConfig& c, const std::string& k, const std::string& v) { c.end_periods = to_double(k, v); }},
        {"samples_per_period", [](SweepConfig& c, const std::string& k, const std::string& v) { c.samples_per_period = to_int<int>(k, v); }},
        {"steps_per_period", [](SweepConfig& c, const std::string& k, const std::string& v) { c.steps_per_period = to_int<int>(k, v); }},
        {"bin_width", [](SweepConfig& c, const std::string& k, const std::string& v) { c.bin_width = to_double(k, v); }},
        {"bin_stride", [](SweepConfig& c, const std::string& k, const std::string& v) { c.bin_stride = to_double(k, v); }},
        {"embedding", [](SweepConfig& c, const std::string& k, const std::string& v) {
             if (v == "auto") c.embedding = EmbeddingPolicy::automatic;
             else if (v == "fixed") c.embedding = EmbeddingPolicy::fixed;
             else throw ConfigError(k + ": expected auto or fixed, got '" + v + "'");
         }},
        {"tau", [](SweepConfig& c, const std::string& k, const std::string& v) { c.tau = to_int<std::size_t>(k, v); }},
        {"dim", [](SweepConfig& c, const std::string& k, const std::string& v) { c.dim = to_int<std::size_t>(k, v); }},
        {"max_tau", [](SweepConfig& c, const std::string& k, const std::string& v) { c.max_tau = to_int<std::size_t>(k, v); }},
        {"min_dim", [](SweepConfig& c, const std::string& k, const std::string& v) { c.min_dim = to_int<std::size_t>(k, v); }},
        {"max_dim", [](SweepConfig& c, const std::string& k, const std::string& v) { c.max_dim = to_int<std::size_t>(k, v); }},
        {"mi_bins", [](SweepConfig& c, const std::string& k, const std::string& v) { c.mi_bins = to_int<std::size_t>(k, v); }},
        {"fnn_ratio", [](SweepConfig& c, const std::string& k, const std::string& v) { c.fnn_ratio = to_double(k, v); }},
        {"fnn_threshold", [](SweepConfig& c, const std::string& k, const std::string& v) { c.fnn_threshold = to_double(k, v); }},
        {"subsample", [](SweepConfig& c, const std::string& k, const std::string& v) { c.subsample = to_int<std::size_t>(k, v); }},
        {"seed", [](SweepConfig& c, const std::string& k, const std::string& v) { c.seed = to_int<std::uint64_t>(k, v); }},
        {"trajectories", [](SweepConfig& c, const std::string& k, const std::string& v) { c.trajectories = to_int<int>(k, v); }},
    };
    return table;
}

}  // namespace

void apply_setting(SweepConfig& config, const std::string& key, const std::string& value) {
    if (key == "preset") {
        apply_preset(config, value);
        return;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, key, value);
}

void apply_config_text(SweepConfig& config, const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        entries.emplace_back(key, value);
    }
    for (const auto& [k, v] : entries) {
        if (k == "preset") apply_preset(config, v);
    }
    for (const auto& [k, v] : entries) {
        if (k != "preset") apply_setting(config, k, v);
    }
}

SweepConfig load_config(const std::filesystem::path& path, SweepConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(base, text.str());
    return base;
}

std::string canonical_text(const SweepConfig& c) {
    std::ostringstream out;
    auto num = [&](const char* key, double v) { out << key << " = " << format_double(v) << '\n'; };
    auto integer = [&](const char* key, auto v) { out << key << " = " << v << '\n'; };
    auto flag = [&](const char* key, bool v) { out << key << " = " << (v ? "on" : "off") << '\n'; };
    out << "mode = " << to_string(c.mode) << '\n';
    num("a_min", c.amplitude.min);
    num("a_max", c.amplitude.max);
    integer("a_count", c.amplitude.count);
    num("t_min", c.period.min);
    num("t_max", c.period.max);
    integer("t_count", c.period.count);
    flag("strict_ranges", c.strict_ranges);
    num("chi", c.chi);
    num("gamma", c.gamma);
    integer("n_trunc", c.n_trunc);
    flag("nonlinear_conjugate", c.nonlinear_conjugate);
    num("transient_periods", c.transient_periods);
    num("end_periods", c.end_periods);
    integer("samples_per_period", c.samples_per_period);
    integer("steps_per_period", c.steps_per_period);
    num("bin_width", c.bin_width);
    num("bin_stride", c.bin_stride);
    out << "embedding = " << (c.embedding == EmbeddingPolicy::automatic ? "auto" : "fixed") << '\n';
    integer("tau", c.tau);
    integer("dim", c.dim);
    integer("max_tau", c.max_tau);
    integer("min_dim", c.min_dim);
    integer("max_dim", c.max_dim);
    integer("mi_bins", c.mi_bins);
    num("fnn_ratio", c.fnn_ratio);
    num("fnn_threshold", c.fnn_threshold);
    integer("subsample", c.subsample);
    integer("seed", c.seed);
    integer("trajectories", c.trajectories);
    return out.str();
}

std::string config_hash(const SweepConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_text(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace kerrtda

#pragma once

#include <string>
#include <vector>

#include "pcqad/coupling.hpp"
#include "pcqad/lattice.hpp"
#include "pcqad/transmon.hpp"

#include "json.hpp"

namespace pcqad {

/// Uniform inclusive grid; count >= 2.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> points() const;
    void validate(const std::string& name) const;
};

struct SolverOptions {
    enum class Kind { semiclassical, lindblad };
    Kind kind = Kind::semiclassical;
    int n_max = 2;
    int dimension_cap = 1024;
    int threads = 1;
};

/// Cuts applied to the resolved (i, j) mode list: keep modes in the frequency
/// window whose Q and relative coupling clear the floors. The g floor removes
/// overlap-integral leakage tails, the Q floor drops modes too leaky to
/// resolve against the continuum.
struct ModeSelection {
    double window_low = 3.20e9;  // Hz
    double window_high = 3.35e9; // Hz
    double min_quality = 300.0;
    double min_g_fraction = 0.108; // relative to the largest g in the window
};

struct Config {
    LatticeSpec lattice;
    TransmonSpec transmon;
    PiezoConstants piezo;
    double drive_rabi = 0.0; // Omega [rad/s]
    GridSpec flux_grid;
    GridSpec frequency_grid; // Hz
    SolverOptions solver;
    ModeSelection selection;
    std::string tolerance_profile = "paper"; // "paper" or "strict"

    void validate() const;
};

/// Device parameters quoted in the source material; every other constructor
/// starts from this and overrides.
Config default_config();

/// Parse a config file (JSON with explicit unit strings, e.g. "9.6 GHz").
/// Empty file or empty object resolves to default_config(). Unknown keys,
/// unit mismatches, and constraint violations raise ConfigError naming the
/// offending key.
Config parse_config(const std::string& path);
Config parse_config_json(const nlohmann::json& j);

/// Resolved config serialized with SI base units; parse(to_json(c)) == c.
nlohmann::json to_json(const Config& config);

/// FNV-1a hash of the canonical serialization; stable under key reordering.
std::string config_hash(const Config& config);

/// Sidecar metadata emitted next to every output file.
nlohmann::json run_manifest(const Config& config, const std::string& command);

/// "<value> <unit>" or bare number; converts to the SI base of `dimension`
/// (one of: length, frequency, rate, speed, capacitance, field, density,
/// dimensionless). Rates quoted as frequencies are multiplied by 2 pi.
double parse_quantity(const nlohmann::json& value, const std::string& dimension,
                      const std::string& key);

} // namespace pcqad

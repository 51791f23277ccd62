// config.hpp — Experiment configuration: the key-value schema, defaults,
// parsing and serialization. Defaults reproduce the reference parameter set
// (T_S = 0.1, T_E = 1, nu = 0.05 * pi/2, epsilon = 0.95 * pi/2, resonant
// qubits).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcollide/engine.hpp"

namespace qcollide {

// Initial-state specification: the system thermal state at temp_system, or
// an explicit Bloch vector.
struct StateSpec {
    enum class Kind { thermal, bloch };
    Kind kind = Kind::thermal;
    double bx = 0.0, by = 0.0, bz = 0.0;

    static StateSpec bloch(double x, double y, double z) {
        return StateSpec{Kind::bloch, x, y, z};
    }
    bool operator==(const StateSpec&) const = default;
};

struct SweepSpec {
    std::vector<double> epsilon_frac; // fractions of pi/2
    std::vector<double> temp_env;
    bool present() const { return !epsilon_frac.empty() || !temp_env.empty(); }
    bool operator==(const SweepSpec&) const = default;
};

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    double temp_system = 0.1;
    double temp_env = 1.0;
    double omega_system = 1.0;
    double omega_env = 1.0;
    double nu_frac = 0.05;      // fraction of pi/2, mirrors the usual notation
    double epsilon_frac = 0.95; // fraction of pi/2
    int n_collisions = 2000;
    Strategy strategy = Strategy::strategy2;
    StateSpec initial_system{};
    StateSpec blp_pair_a = StateSpec::bloch(1.0, 0.0, 0.0);  // sigma_x eigenstates
    StateSpec blp_pair_b = StateSpec::bloch(-1.0, 0.0, 0.0);
    OutputFormat format = OutputFormat::csv;
    std::string output; // empty writes to stdout
    SweepSpec sweep;
    std::optional<int> exact_n_env;
    int threads = 2;

    ModelParams to_model_params() const;
    DensityMatrix state_from_spec(const StateSpec& spec) const;
    DensityMatrix initial_density() const { return state_from_spec(initial_system); }

    void validate() const; // throws ConfigError naming field and bound

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses a key-value document ("key = value" lines, '#' comments, lists in
// brackets). Unknown keys and domain violations raise ConfigError.
ExperimentConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize_config(cfg)) == cfg.
std::string serialize_config(const ExperimentConfig& cfg);

// Applies one "key = value" assignment; shared by the file parser and the
// command-line override flags so both accept the same names and syntax.
void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& raw_value);

// All recognized keys, in canonical order.
const std::vector<std::string>& config_keys();

} // namespace qcollide

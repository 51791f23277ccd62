#include "qcollide/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace qcollide {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
    return value;
}

int parse_int(const std::string& raw, const std::string& key) {
    const double value = parse_number(raw, key);
    const int as_int = static_cast<int>(value);
    if (static_cast<double>(as_int) != value) {
        throw ConfigError(key + ": expected an integer, got '" + trim(raw) + "'");
    }
    return as_int;
}

std::string parse_string(const std::string& raw, const std::string& key) {
    std::string text = trim(raw);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        text = text.substr(1, text.size() - 2);
    }
    if (text.empty()) {
        throw ConfigError(key + ": expected a value");
    }
    return text;
}

std::vector<double> parse_list(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw ConfigError(key + ": expected a bracketed list, got '" + text + "'");
    }
    std::vector<double> values;
    std::string body = text.substr(1, text.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) {
            throw ConfigError(key + ": empty list element");
        }
        values.push_back(parse_number(item, key));
    }
    return values;
}

StateSpec::Kind parse_state_kind(const std::string& raw, const std::string& key) {
    const std::string text = parse_string(raw, key);
    if (text == "thermal") return StateSpec::Kind::thermal;
    if (text == "bloch") return StateSpec::Kind::bloch;
    throw ConfigError(key + ": expected thermal|bloch, got '" + text + "'");
}

void parse_bloch(StateSpec& spec, const std::string& raw, const std::string& key) {
    const std::vector<double> v = parse_list(raw, key);
    if (v.size() != 3) {
        throw ConfigError(key + ": expected a 3-component Bloch vector");
    }
    spec.kind = StateSpec::Kind::bloch;
    spec.bx = v[0];
    spec.by = v[1];
    spec.bz = v[2];
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_double(v[i]);
    }
    return out + "]";
}

void check_bloch_norm(const StateSpec& spec, const char* field) {
    if (spec.kind != StateSpec::Kind::bloch) return;
    const double norm = std::sqrt(spec.bx * spec.bx + spec.by * spec.by + spec.bz * spec.bz);
    if (norm > 1.0 + 1e-12) {
        std::ostringstream os;
        os << field << ": Bloch vector norm must be <= 1, got " << norm;
        throw ConfigError(os.str());
    }
}

} // namespace

ModelParams ExperimentConfig::to_model_params() const {
    ModelParams p;
    p.temp_system = temp_system;
    p.temp_env = temp_env;
    p.omega_system = omega_system;
    p.omega_env = omega_env;
    p.nu = nu_frac * std::numbers::pi / 2.0;
    p.epsilon = epsilon_frac * std::numbers::pi / 2.0;
    p.n_collisions = n_collisions;
    p.strategy = strategy;
    return p;
}

DensityMatrix ExperimentConfig::state_from_spec(const StateSpec& spec) const {
    if (spec.kind == StateSpec::Kind::thermal) {
        return thermal_state(1.0 / temp_system, omega_system);
    }
    return bloch_state(spec.bx, spec.by, spec.bz);
}

void ExperimentConfig::validate() const {
    if (!(temp_system > 0.0)) {
        throw ConfigError("temp_system must be > 0, got " + format_double(temp_system));
    }
    if (!(temp_env > 0.0)) {
        throw ConfigError("temp_env must be > 0, got " + format_double(temp_env));
    }
    if (!std::isfinite(omega_system) || !std::isfinite(omega_env)) {
        throw ConfigError("omega_system and omega_env must be finite");
    }
    if (!(nu_frac >= 0.0 && nu_frac <= 1.0)) {
        throw ConfigError("nu_frac must be within [0, 1] (fraction of pi/2), got " +
                          format_double(nu_frac));
    }
    if (!(epsilon_frac >= 0.0 && epsilon_frac <= 1.0)) {
        throw ConfigError("epsilon_frac must be within [0, 1] (fraction of pi/2), got " +
                          format_double(epsilon_frac));
    }
    if (n_collisions < 1) {
        throw ConfigError("n_collisions must be >= 1, got " + std::to_string(n_collisions));
    }
    check_bloch_norm(initial_system, "initial_bloch");
    check_bloch_norm(blp_pair_a, "blp_pair_a");
    check_bloch_norm(blp_pair_b, "blp_pair_b");
    for (const double e : sweep.epsilon_frac) {
        if (!(e >= 0.0 && e <= 1.0)) {
            throw ConfigError("sweep.epsilon_frac values must be within [0, 1], got " +
                              format_double(e));
        }
    }
    for (const double t : sweep.temp_env) {
        if (!(t > 0.0)) {
            throw ConfigError("sweep.temp_env values must be > 0, got " + format_double(t));
        }
    }
    if (exact_n_env && *exact_n_env < 1) {
        throw ConfigError("exact.n_env must be >= 1, got " + std::to_string(*exact_n_env));
    }
    if (threads < 1) {
        throw ConfigError("threads must be >= 1, got " + std::to_string(threads));
    }
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& raw_value) {
    if (key == "temp_system") {
        cfg.temp_system = parse_number(raw_value, key);
    } else if (key == "temp_env") {
        cfg.temp_env = parse_number(raw_value, key);
    } else if (key == "omega_system") {
        cfg.omega_system = parse_number(raw_value, key);
    } else if (key == "omega_env") {
        cfg.omega_env = parse_number(raw_value, key);
    } else if (key == "nu_frac") {
        cfg.nu_frac = parse_number(raw_value, key);
    } else if (key == "epsilon_frac") {
        cfg.epsilon_frac = parse_number(raw_value, key);
    } else if (key == "n_collisions") {
        cfg.n_collisions = parse_int(raw_value, key);
    } else if (key == "strategy") {
        try {
            cfg.strategy = strategy_from_string(parse_string(raw_value, key));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "initial") {
        if (parse_state_kind(raw_value, key) == StateSpec::Kind::thermal) {
            cfg.initial_system = StateSpec{};
        } else {
            cfg.initial_system.kind = StateSpec::Kind::bloch;
        }
    } else if (key == "initial_bloch") {
        parse_bloch(cfg.initial_system, raw_value, key);
    } else if (key == "blp_pair_a") {
        parse_bloch(cfg.blp_pair_a, raw_value, key);
    } else if (key == "blp_pair_b") {
        parse_bloch(cfg.blp_pair_b, raw_value, key);
    } else if (key == "format") {
        const std::string text = parse_string(raw_value, key);
        if (text == "csv") {
            cfg.format = OutputFormat::csv;
        } else if (text == "json") {
            cfg.format = OutputFormat::json;
        } else {
            throw ConfigError("format must be csv|json, got '" + text + "'");
        }
    } else if (key == "output") {
        cfg.output = parse_string(raw_value, key);
    } else if (key == "sweep.epsilon_frac") {
        cfg.sweep.epsilon_frac = parse_list(raw_value, key);
        if (cfg.sweep.epsilon_frac.empty()) {
            throw ConfigError("sweep.epsilon_frac must not be an empty list");
        }
    } else if (key == "sweep.temp_env") {
        cfg.sweep.temp_env = parse_list(raw_value, key);
        if (cfg.sweep.temp_env.empty()) {
            throw ConfigError("sweep.temp_env must not be an empty list");
        }
    } else if (key == "exact.n_env") {
        cfg.exact_n_env = parse_int(raw_value, key);
    } else if (key == "threads") {
        cfg.threads = parse_int(raw_value, key);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": missing key");
        }
        apply_config_key(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

namespace {

std::string bloch_to_text(const StateSpec& s) {
    return format_list({s.bx, s.by, s.bz});
}

} // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "temp_system = " << format_double(cfg.temp_system) << "\n";
    os << "temp_env = " << format_double(cfg.temp_env) << "\n";
    os << "omega_system = " << format_double(cfg.omega_system) << "\n";
    os << "omega_env = " << format_double(cfg.omega_env) << "\n";
    os << "nu_frac = " << format_double(cfg.nu_frac) << "\n";
    os << "epsilon_frac = " << format_double(cfg.epsilon_frac) << "\n";
    os << "n_collisions = " << cfg.n_collisions << "\n";
    os << "strategy = " << to_string(cfg.strategy) << "\n";
    os << "initial = "
       << (cfg.initial_system.kind == StateSpec::Kind::thermal ? "thermal" : "bloch") << "\n";
    if (cfg.initial_system.kind == StateSpec::Kind::bloch) {
        os << "initial_bloch = " << bloch_to_text(cfg.initial_system) << "\n";
    }
    os << "blp_pair_a = " << bloch_to_text(cfg.blp_pair_a) << "\n";
    os << "blp_pair_b = " << bloch_to_text(cfg.blp_pair_b) << "\n";
    os << "format = " << (cfg.format == OutputFormat::csv ? "csv" : "json") << "\n";
    if (!cfg.output.empty()) os << "output = \"" << cfg.output << "\"\n";
    if (!cfg.sweep.epsilon_frac.empty()) {
        os << "sweep.epsilon_frac = " << format_list(cfg.sweep.epsilon_frac) << "\n";
    }
    if (!cfg.sweep.temp_env.empty()) {
        os << "sweep.temp_env = " << format_list(cfg.sweep.temp_env) << "\n";
    }
    if (cfg.exact_n_env) os << "exact.n_env = " << *cfg.exact_n_env << "\n";
    os << "threads = " << cfg.threads << "\n";
    return os.str();
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "temp_system",  "temp_env",     "omega_system",       "omega_env",
        "nu_frac",      "epsilon_frac", "n_collisions",       "strategy",
        "initial",      "initial_bloch", "blp_pair_a",        "blp_pair_b",
        "format",       "output",       "sweep.epsilon_frac", "sweep.temp_env",
        "exact.n_env",  "threads",
    };
    return keys;
}

} // namespace qcollide

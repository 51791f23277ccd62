// qcollide — deterministic collision-model thermalization simulator.
//
// Subcommands: simulate, blp, sweep, exact. Every configuration key can be
// given in a config file (--config) or as a flag of the same name; flags take
// precedence over the file, the file over built-in defaults.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include "qcollide/commands.hpp"
#include "qcollide/version.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_size_error = 3;
constexpr int exit_io_error = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qcollide::IoError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic collision-model thermalization simulator"};
    app.set_version_flag("--version", std::string(qcollide::version_string));
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config,-c", config_path, "configuration file (key = value lines)");
        for (const std::string& key : qcollide::config_keys()) {
            cmd->add_option_function<std::string>(
                "--" + key,
                [&overrides, key](const std::string& value) {
                    overrides.emplace_back(key, value);
                },
                "override config key '" + key + "'");
        }
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run one trajectory and write per-collision observables");
    CLI::App* blp = app.add_subcommand("blp", "trace-distance dynamics and non-Markovianity of a state pair");
    CLI::App* sweep = app.add_subcommand("sweep", "grid over epsilon and/or environment temperature");
    CLI::App* exact = app.add_subcommand("exact", "full-chain run with the entropy-production decomposition");
    for (CLI::App* cmd : {simulate, blp, sweep, exact}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        qcollide::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = qcollide::parse_config(read_file(config_path));
        }
        for (const auto& [key, value] : overrides) {
            qcollide::apply_config_key(cfg, key, value);
        }
        cfg.validate();

        if (simulate->parsed()) {
            qcollide::cmd_simulate(cfg);
        } else if (blp->parsed()) {
            qcollide::cmd_blp(cfg);
        } else if (sweep->parsed()) {
            qcollide::cmd_sweep(cfg);
        } else {
            qcollide::cmd_exact(cfg);
        }
        return exit_ok;
    } catch (const qcollide::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const qcollide::SizeError& e) {
        std::cerr << "size error: " << e.what() << "\n";
        return exit_size_error;
    } catch (const qcollide::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

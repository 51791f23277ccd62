#include "qcollide/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qcollide/version.hpp"

namespace qcollide {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["temp_system"] = cfg.temp_system;
    j["temp_env"] = cfg.temp_env;
    j["omega_system"] = cfg.omega_system;
    j["omega_env"] = cfg.omega_env;
    j["nu_frac"] = cfg.nu_frac;
    j["epsilon_frac"] = cfg.epsilon_frac;
    j["n_collisions"] = cfg.n_collisions;
    j["strategy"] = to_string(cfg.strategy);
    j["initial"] = cfg.initial_system.kind == StateSpec::Kind::thermal ? "thermal" : "bloch";
    if (cfg.initial_system.kind == StateSpec::Kind::bloch) {
        j["initial_bloch"] = {cfg.initial_system.bx, cfg.initial_system.by,
                              cfg.initial_system.bz};
    }
    j["blp_pair_a"] = {cfg.blp_pair_a.bx, cfg.blp_pair_a.by, cfg.blp_pair_a.bz};
    j["blp_pair_b"] = {cfg.blp_pair_b.bx, cfg.blp_pair_b.by, cfg.blp_pair_b.bz};
    j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    if (!cfg.output.empty()) j["output"] = cfg.output;
    if (!cfg.sweep.epsilon_frac.empty()) j["sweep.epsilon_frac"] = cfg.sweep.epsilon_frac;
    if (!cfg.sweep.temp_env.empty()) j["sweep.temp_env"] = cfg.sweep.temp_env;
    if (cfg.exact_n_env) j["exact.n_env"] = *cfg.exact_n_env;
    j["threads"] = cfg.threads;
    return j;
}

// Full provenance as comment lines: artifact version plus every parameter.
void write_csv_provenance(const ExperimentConfig& cfg, std::ostream& out) {
    out << "# qcollide " << version_string << "\n";
    std::stringstream ss(serialize_config(cfg));
    std::string line;
    while (std::getline(ss, line)) out << "# " << line << "\n";
}

json report_header(const ExperimentConfig& cfg) {
    json j;
    j["version"] = std::string(version_string);
    j["config"] = config_json(cfg);
    return j;
}

// ------------------------------- simulate -----------------------------------

struct SimulateRow {
    int step;
    double dist_fixed_point;
    double sigma_cumulative;
    double sigma_rate;
    double heat_cumulative;
    double excited_pop;
    double coherence_abs;
};

struct SimulateData {
    std::vector<SimulateRow> rows;
    double sigma_steady;
    double min_sigma_rate;
    double final_distance;
};

SimulateData compute_simulate(const ExperimentConfig& cfg) {
    const ModelParams p = cfg.to_model_params();
    const Trajectory traj = run_trajectory(p, cfg.initial_density());
    const EntropyLedger ledger = make_entropy_ledger(traj);
    const DensityMatrix fixed = thermal_state(p.beta_env(), p.omega_env);

    SimulateData data;
    data.rows.reserve(traj.steps.size());
    double heat = 0.0;
    for (int i = 1; i <= traj.collisions(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i) - 1;
        heat += ledger.heat_two_qubit[k];
        const Matrix& sys = traj.system_at(i).matrix();
        data.rows.push_back(SimulateRow{i, trace_distance(traj.system_at(i), fixed),
                                        ledger.cumulative_sigma[k], ledger.rate[k], heat,
                                        sys(0, 0).real(), std::abs(sys(0, 1))});
    }
    data.sigma_steady = ledger.cumulative_sigma.back();
    data.min_sigma_rate = *std::min_element(ledger.rate.begin(), ledger.rate.end());
    data.final_distance = data.rows.back().dist_fixed_point;
    return data;
}

// --------------------------------- blp --------------------------------------

struct BlpData {
    BLPResult strategy1;
    BLPResult strategy2;
    bool degenerate_pair;
};

BlpData compute_blp(const ExperimentConfig& cfg) {
    const DensityMatrix a = cfg.state_from_spec(cfg.blp_pair_a);
    const DensityMatrix b = cfg.state_from_spec(cfg.blp_pair_b);

    ModelParams p = cfg.to_model_params();
    p.strategy = Strategy::strategy1;
    const BLPResult r1 = blp_measure(run_trajectory(p, a), run_trajectory(p, b));
    p.strategy = Strategy::strategy2;
    const BLPResult r2 = blp_measure(run_trajectory(p, a), run_trajectory(p, b));

    return BlpData{r1, r2, trace_distance(a, b) < 1e-15};
}

// -------------------------------- sweep --------------------------------------

struct SweepRow {
    double epsilon_frac;
    double temp_env;
    Strategy strategy;
    double blp;
    double min_sigma_rate;
    double sigma_steady;
};

std::pair<SweepRow, SweepRow> evaluate_sweep_point(const ExperimentConfig& base,
                                                   double eps_frac, double temp_env) {
    ExperimentConfig cfg = base;
    cfg.epsilon_frac = eps_frac;
    cfg.temp_env = temp_env;

    std::pair<SweepRow, SweepRow> rows{{eps_frac, temp_env, Strategy::strategy1, 0, 0, 0},
                                       {eps_frac, temp_env, Strategy::strategy2, 0, 0, 0}};
    const DensityMatrix a = cfg.state_from_spec(cfg.blp_pair_a);
    const DensityMatrix b = cfg.state_from_spec(cfg.blp_pair_b);
    const DensityMatrix initial = cfg.initial_density();

    for (SweepRow* row : {&rows.first, &rows.second}) {
        ModelParams p = cfg.to_model_params();
        p.strategy = row->strategy;
        row->blp = blp_measure(run_trajectory(p, a), run_trajectory(p, b)).measure;
        const EntropyLedger ledger = make_entropy_ledger(run_trajectory(p, initial));
        row->min_sigma_rate = *std::min_element(ledger.rate.begin(), ledger.rate.end());
        row->sigma_steady = ledger.cumulative_sigma.back();
    }
    return rows;
}

std::vector<SweepRow> compute_sweep(const ExperimentConfig& cfg) {
    if (!cfg.sweep.present()) {
        throw ConfigError("sweep: no grid specified (set sweep.epsilon_frac and/or sweep.temp_env)");
    }
    std::vector<double> eps_list =
        cfg.sweep.epsilon_frac.empty() ? std::vector<double>{cfg.epsilon_frac}
                                       : cfg.sweep.epsilon_frac;
    std::vector<double> te_list = cfg.sweep.temp_env.empty() ? std::vector<double>{cfg.temp_env}
                                                             : cfg.sweep.temp_env;
    std::sort(eps_list.begin(), eps_list.end());
    std::sort(te_list.begin(), te_list.end());

    std::vector<std::pair<double, double>> grid;
    for (const double e : eps_list) {
        for (const double t : te_list) grid.emplace_back(e, t);
    }

    // Grid points are independent; evaluate them on a small worker pool and
    // assemble in grid order.
    std::vector<std::optional<std::pair<SweepRow, SweepRow>>> results(grid.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), grid.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = cursor.fetch_add(1); i < grid.size(); i = cursor.fetch_add(1)) {
                try {
                    results[i] = evaluate_sweep_point(cfg, grid[i].first, grid[i].second);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<SweepRow> rows;
    rows.reserve(grid.size() * 2);
    for (const auto& pair : results) {
        rows.push_back(pair->first);
        rows.push_back(pair->second);
    }
    return rows;
}

// -------------------------------- exact --------------------------------------

ExactSeries compute_exact(const ExperimentConfig& cfg) {
    if (!cfg.exact_n_env) {
        throw ConfigError("exact.n_env must be set for the exact command");
    }
    const int n_env = *cfg.exact_n_env;
    if (1 + n_env > max_qubits) {
        throw SizeError("exact.n_env = " + std::to_string(n_env) +
                        " exceeds the register cap; maximum is " + std::to_string(max_qubits - 1));
    }
    if (cfg.n_collisions > n_env) {
        throw SizeError("n_collisions = " + std::to_string(cfg.n_collisions) +
                        " exceeds the chain length; maximum is " + std::to_string(n_env));
    }
    return exact_decomposition_series(cfg.to_model_params(), cfg.initial_density(), n_env);
}

} // namespace

void write_simulate_report(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const SimulateData data = compute_simulate(cfg);
    if (cfg.format == OutputFormat::csv) {
        write_csv_provenance(cfg, out);
        out << "step,trace_dist_to_fixed_point,sigma_cumulative,sigma_rate,heat_cumulative,"
               "system_excited_pop,system_coherence_abs\n";
        for (const SimulateRow& r : data.rows) {
            out << r.step << ',' << fmt17(r.dist_fixed_point) << ',' << fmt17(r.sigma_cumulative)
                << ',' << fmt17(r.sigma_rate) << ',' << fmt17(r.heat_cumulative) << ','
                << fmt17(r.excited_pop) << ',' << fmt17(r.coherence_abs) << "\n";
        }
        out << "# sigma_steady = " << fmt17(data.sigma_steady) << "\n";
        out << "# min_sigma_rate = " << fmt17(data.min_sigma_rate) << "\n";
        out << "# final_trace_dist = " << fmt17(data.final_distance) << "\n";
    } else {
        json j = report_header(cfg);
        j["steps"] = json::array();
        for (const SimulateRow& r : data.rows) {
            j["steps"].push_back({{"step", r.step},
                                  {"trace_dist_to_fixed_point", r.dist_fixed_point},
                                  {"sigma_cumulative", r.sigma_cumulative},
                                  {"sigma_rate", r.sigma_rate},
                                  {"heat_cumulative", r.heat_cumulative},
                                  {"system_excited_pop", r.excited_pop},
                                  {"system_coherence_abs", r.coherence_abs}});
        }
        j["summary"] = {{"sigma_steady", data.sigma_steady},
                        {"min_sigma_rate", data.min_sigma_rate},
                        {"final_trace_dist", data.final_distance}};
        out << j.dump(2) << "\n";
    }
}

void write_blp_report(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const BlpData data = compute_blp(cfg);
    const std::size_t n = data.strategy1.pair_distances.size();
    if (cfg.format == OutputFormat::csv) {
        write_csv_provenance(cfg, out);
        if (data.degenerate_pair) {
            out << "# warning: degenerate initial pair (zero trace distance)\n";
        }
        out << "step,trace_distance_strategy1,trace_distance_strategy2\n";
        for (std::size_t i = 0; i < n; ++i) {
            out << i << ',' << fmt17(data.strategy1.pair_distances[i]) << ','
                << fmt17(data.strategy2.pair_distances[i]) << "\n";
        }
        out << "# blp_measure_strategy1 = " << fmt17(data.strategy1.measure) << "\n";
        out << "# blp_measure_strategy2 = " << fmt17(data.strategy2.measure) << "\n";
    } else {
        json j = report_header(cfg);
        if (data.degenerate_pair) j["warning"] = "degenerate initial pair (zero trace distance)";
        j["steps"] = json::array();
        for (std::size_t i = 0; i < n; ++i) {
            j["steps"].push_back({{"step", i},
                                  {"trace_distance_strategy1", data.strategy1.pair_distances[i]},
                                  {"trace_distance_strategy2", data.strategy2.pair_distances[i]}});
        }
        j["summary"] = {{"blp_measure_strategy1", data.strategy1.measure},
                        {"blp_measure_strategy2", data.strategy2.measure}};
        out << j.dump(2) << "\n";
    }
}

void write_sweep_report(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const std::vector<SweepRow> rows = compute_sweep(cfg);
    if (cfg.format == OutputFormat::csv) {
        write_csv_provenance(cfg, out);
        out << "epsilon_frac,temp_env,strategy,blp_measure,min_sigma_rate,sigma_steady\n";
        for (const SweepRow& r : rows) {
            out << fmt17(r.epsilon_frac) << ',' << fmt17(r.temp_env) << ','
                << to_string(r.strategy) << ',' << fmt17(r.blp) << ','
                << fmt17(r.min_sigma_rate) << ',' << fmt17(r.sigma_steady) << "\n";
        }
    } else {
        json j = report_header(cfg);
        j["rows"] = json::array();
        for (const SweepRow& r : rows) {
            j["rows"].push_back({{"epsilon_frac", r.epsilon_frac},
                                 {"temp_env", r.temp_env},
                                 {"strategy", to_string(r.strategy)},
                                 {"blp_measure", r.blp},
                                 {"min_sigma_rate", r.min_sigma_rate},
                                 {"sigma_steady", r.sigma_steady}});
        }
        out << j.dump(2) << "\n";
    }
}

void write_exact_report(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const ExactSeries series = compute_exact(cfg);
    double max_disc = 0.0;
    for (const ExactStepDecomposition& r : series.steps) {
        max_disc = std::max(max_disc, r.max_discrepancy);
    }
    if (cfg.format == OutputFormat::csv) {
        write_csv_provenance(cfg, out);
        out << "step,mutual_info,env_relent,rw_sum,sigma_main,sigma_ep,max_discrepancy\n";
        for (const ExactStepDecomposition& r : series.steps) {
            out << r.index << ',' << fmt17(r.mutual_info) << ','
                << fmt17(r.env_relative_entropy) << ',' << fmt17(r.rw_sum) << ','
                << fmt17(r.sigma_relent) << ',' << fmt17(r.sigma_heat) << ','
                << fmt17(r.max_discrepancy) << "\n";
        }
        out << "# max_discrepancy = " << fmt17(max_disc) << "\n";
    } else {
        json j = report_header(cfg);
        j["steps"] = json::array();
        for (const ExactStepDecomposition& r : series.steps) {
            j["steps"].push_back({{"step", r.index},
                                  {"mutual_info", r.mutual_info},
                                  {"env_relent", r.env_relative_entropy},
                                  {"rw_sum", r.rw_sum},
                                  {"sigma_main", r.sigma_relent},
                                  {"sigma_ep", r.sigma_heat},
                                  {"max_discrepancy", r.max_discrepancy}});
        }
        j["summary"] = {{"max_discrepancy", max_disc}};
        out << j.dump(2) << "\n";
    }
}

namespace {

template <typename Writer>
void run_to_output(const ExperimentConfig& cfg, Writer writer) {
    if (cfg.output.empty()) {
        writer(cfg, std::cout);
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + cfg.output + "' for writing");
    }
    writer(cfg, file);
    file.flush();
    if (!file) {
        throw IoError("write failed for '" + cfg.output + "'");
    }
}

} // namespace

void cmd_simulate(const ExperimentConfig& cfg) { run_to_output(cfg, write_simulate_report); }
void cmd_blp(const ExperimentConfig& cfg) { run_to_output(cfg, write_blp_report); }
void cmd_sweep(const ExperimentConfig& cfg) { run_to_output(cfg, write_sweep_report); }
void cmd_exact(const ExperimentConfig& cfg) { run_to_output(cfg, write_exact_report); }

} // namespace qcollide

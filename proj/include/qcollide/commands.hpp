// commands.hpp — Experiment orchestration behind the CLI subcommands. The
// write_* functions render a full report to a stream; the cmd_* wrappers
// route to the configured output file (or stdout when no path is set).

#pragma once

#include <iosfwd>

#include "qcollide/analysis.hpp"
#include "qcollide/config.hpp"

namespace qcollide {

// One trajectory at the configured parameters: per-collision trace distance
// to the fixed point, cumulative entropy production, rate, cumulative heat
// and system populations.
void write_simulate_report(const ExperimentConfig& cfg, std::ostream& out);

// Trace-distance dynamics of the configured state pair under Strategy 1 and
// Strategy 2, with the non-Markovianity measure of each.
void write_blp_report(const ExperimentConfig& cfg, std::ostream& out);

// Grid over epsilon_frac and/or temp_env: one row per grid point and
// strategy with the BLP measure, the minimum entropy-production rate and the
// steady-state entropy production.
void write_sweep_report(const ExperimentConfig& cfg, std::ostream& out);

// Exact-chain run: the three entropy-production estimators per collision and
// their maximum pairwise discrepancy.
void write_exact_report(const ExperimentConfig& cfg, std::ostream& out);

void cmd_simulate(const ExperimentConfig& cfg);
void cmd_blp(const ExperimentConfig& cfg);
void cmd_sweep(const ExperimentConfig& cfg);
void cmd_exact(const ExperimentConfig& cfg);

} // namespace qcollide

// analysis.hpp — Derived quantities: trace-distance dynamics, BLP
// non-Markovianity, entropy production in three formulations, per-step rate,
// heat flux (two-qubit and deliberately naive variants) and the
// information-theoretic decomposition on exact runs.

#pragma once

#include <vector>

#include "qcollide/engine.hpp"

namespace qcollide {

// Trace-distance record for one initial-state pair. The measure sums the
// positive increments only; no maximization over pairs is performed (the
// pair is caller-supplied).
struct BLPResult {
    std::vector<double> pair_distances; // D_0 .. D_N
    std::vector<double> increments;     // D_i - D_{i-1}, i = 1..N
    double measure;                     // sum of positive increments
};

BLPResult blp_measure(const Trajectory& traj_a, const Trajectory& traj_b);

// Per-step entropy production S(prev || rho_*) - S(next || rho_*); the fixed
// point is the environment Gibbs state.
double entropy_production_step(const DensityMatrix& prev_system,
                               const DensityMatrix& next_system,
                               const DensityMatrix& fixed_point);

// Mutual information and environment relative entropy evaluated on a global
// state from an exact run.
struct RwDecomposition {
    double mutual_info;
    double env_relative_entropy;
};

RwDecomposition rw_decomposition(const DensityMatrix& global_state,
                                 const DensityMatrix& env_initial,
                                 const std::vector<int>& system_qubits);

// beta_E * tr[(H_{E_i} + H_{E_{i+1}})(pair_post - pair_pre)]: the entropy
// flux of one step, accounting for both environment qubits involved.
double heat_flux_step(const StepSnapshot& snapshot, const ModelParams& p);

// beta_E * tr[H_{E_i}(post - pre)] on the directly colliding qubit only.
// This estimator is wrong whenever intra-environment collisions move energy;
// it is kept as a diagnostic of exactly that pitfall.
double heat_flux_naive(const StepSnapshot& snapshot, const ModelParams& p);

// Cumulative Sigma = Delta S_system + beta_E * sum of two-qubit step fluxes,
// one entry per collision.
std::vector<double> sigma_via_eq7(const Trajectory& traj);

// Per-trajectory entropy bookkeeping. cumulative_sigma[i] telescopes to
// S(rho_0 || rho_*) - S(rho_{i+1} || rho_*).
struct EntropyLedger {
    std::vector<double> per_step_sigma;  // relative-entropy decrease per step
    std::vector<double> cumulative_sigma;
    std::vector<double> rate;            // per-step increment of cumulative sigma
    std::vector<double> delta_s_system;  // von Neumann entropy change per step
    std::vector<double> heat_two_qubit;  // beta_E * two-qubit flux per step
    std::vector<double> heat_naive;
    std::vector<RwDecomposition> rw_terms; // filled by exact runs only
};

EntropyLedger make_entropy_ledger(const Trajectory& traj);

struct ExactSeries;
// Ledger for an exact run, with the per-step (mutual information,
// environment relative entropy) pairs attached.
EntropyLedger make_entropy_ledger(const ExactSeries& series);

// The discrete rate: the increment of the cumulative entropy production
// between consecutive collisions, i.e. the per-step sigma itself.
std::vector<double> entropy_rate(const EntropyLedger& ledger);

// One row of the exact-run cross-check: the three entropy-production
// estimators evaluated on the same global state after each collision.
struct ExactStepDecomposition {
    int index;
    double mutual_info;
    double env_relative_entropy;
    double rw_sum;          // mutual_info + env_relative_entropy
    double sigma_relent;    // telescoping relative-entropy form
    double sigma_heat;      // Delta S + beta_E * full-environment heat
    double max_discrepancy; // max pairwise difference of the three
};

struct ExactSeries {
    Trajectory trajectory;
    std::vector<ExactStepDecomposition> steps;
    DensityMatrix global_final;
};

ExactSeries exact_decomposition_series(const ModelParams& p,
                                       const DensityMatrix& initial_system, int n_env);

} // namespace qcollide

// engine.hpp — Collision dynamics under Strategy 1, Strategy 2, the Markovian
// limit and an exact full-chain simulator. Produces per-step snapshots for
// the analysis layer. Everything here is deterministic: identical inputs
// give bit-identical trajectories.

#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qcollide/model.hpp"
#include "qcollide/version.hpp"

namespace qcollide {

// Per-collision observables needed downstream. The (E_i, E_{i+1}) pair is
// stored both before and after the step's two unitaries because the entropy
// flux needs both endpoints.
struct StepSnapshot {
    int index;                   // collision number, 1-based
    DensityMatrix system;        // rho_i^S after the step
    DensityMatrix incoming_env;  // reduced E_{i+1} just before step i+1
    DensityMatrix env_pair_pre;  // (E_i, E_{i+1}) before the step's unitaries
    DensityMatrix env_pair_post; // (E_i, E_{i+1}) after both unitaries
    std::optional<DensityMatrix> joint_se_next; // carried (S, E_{i+1}); Strategy 2 only
};

// Ordered snapshots plus provenance. Snapshots are indexed from 1; the
// initial state is kept separately as index 0.
struct Trajectory {
    ModelParams params;
    DensityMatrix initial_system;
    std::vector<StepSnapshot> steps;
    std::string_view code_version = version_string;

    int collisions() const { return static_cast<int>(steps.size()); }
    const DensityMatrix& system_at(int i) const {
        return i == 0 ? initial_system : steps.at(static_cast<std::size_t>(i) - 1).system;
    }
};

// ------------------------- carried inter-step state -------------------------

struct MarkovianState {
    DensityMatrix system;
};

// Strategy 1 carries the system and the next environment qubit as separate
// factors; the product is rebuilt each step (correlations erased).
struct Strategy1State {
    DensityMatrix system;
    DensityMatrix carried_env;
};

// Strategy 2 carries the joint 4x4 (S, E_i) state untouched.
struct Strategy2State {
    DensityMatrix joint;
    DensityMatrix system() const { return partial_trace(joint, {0}); }
};

// Exact mode keeps the full (1 + n_env)-qubit register; qubit 0 is the
// system, qubit i the i-th environment qubit.
struct ExactState {
    DensityMatrix chain;
    int env_qubits;
    int collisions_done;
};

using CarriedState = std::variant<MarkovianState, Strategy1State, Strategy2State, ExactState>;

// ------------------------------- single steps --------------------------------

// Step register convention (all strategies): qubit 0 = S, 1 = E_i,
// 2 = E_{i+1}; U_{S,E_i}(nu) is applied strictly before U_{E_i,E_{i+1}}(eps).

std::pair<MarkovianState, StepSnapshot> step_markovian(const MarkovianState& s,
                                                       const ModelParams& p, int index);
std::pair<Strategy1State, StepSnapshot> step_strategy1(const Strategy1State& s,
                                                       const ModelParams& p, int index);
std::pair<Strategy2State, StepSnapshot> step_strategy2(const Strategy2State& s,
                                                       const ModelParams& p, int index);

// Advances the chain in place. The final collision of a chain has no fresh
// partner left, so its intra-environment collision is skipped.
StepSnapshot step_exact(ExactState& s, const ModelParams& p);

// --------------------------------- drivers ----------------------------------

// Runs p.n_collisions collisions from a one-qubit initial state, dispatching
// on p.strategy. Strategy::exact uses a chain of n_collisions environment
// qubits.
Trajectory run_trajectory(const ModelParams& p, const DensityMatrix& initial_system);

struct ExactRun {
    Trajectory trajectory;
    DensityMatrix global_final;
};

// Full-chain run: the register evolves unitarily with no partial traces;
// requires n_collisions <= n_env and 1 + n_env qubits within the dense cap.
ExactRun run_exact(const ModelParams& p, const DensityMatrix& initial_system, int n_env);

// Initial carried state for a strategy (fresh thermal environment).
CarriedState initial_carried_state(const ModelParams& p, const DensityMatrix& initial_system);

// Reduced state of the environment qubit about to collide with the system.
const DensityMatrix& incoming_env_state(const StepSnapshot& snapshot);

} // namespace qcollide

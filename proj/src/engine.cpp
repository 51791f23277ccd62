#include "qcollide/engine.hpp"

#include <sstream>

namespace qcollide {

namespace {

DensityMatrix fresh_env(const ModelParams& p) {
    return thermal_state(p.beta_env(), p.omega_env);
}

DensityMatrix reduced(const Matrix& reg, int qubits, const std::vector<int>& keep) {
    return DensityMatrix::renormalized(partial_trace(reg, qubits, keep));
}

} // namespace

std::pair<MarkovianState, StepSnapshot> step_markovian(const MarkovianState& s,
                                                       const ModelParams& p, int index) {
    const DensityMatrix eta = fresh_env(p);
    Matrix reg = tensor_product(s.system.matrix(), eta.matrix());
    apply_two_qubit_unitary(reg, partial_swap(p.nu), 0, 1, 2);

    DensityMatrix system = reduced(reg, 2, {0});
    DensityMatrix env_after = reduced(reg, 2, {1});
    // E_{i+1} is never touched here; the pair completes with a fresh qubit.
    StepSnapshot snap{index,
                      system,
                      eta,
                      tensor_product(eta, eta),
                      tensor_product(env_after, eta),
                      std::nullopt};
    return {MarkovianState{std::move(system)}, std::move(snap)};
}

std::pair<Strategy1State, StepSnapshot> step_strategy1(const Strategy1State& s,
                                                       const ModelParams& p, int index) {
    const DensityMatrix eta = fresh_env(p);
    Matrix reg = tensor_product(tensor_product(s.system.matrix(), s.carried_env.matrix()),
                                eta.matrix());
    DensityMatrix pair_pre = reduced(reg, 3, {1, 2});
    apply_two_qubit_unitary(reg, partial_swap(p.nu), 0, 1, 3);
    apply_two_qubit_unitary(reg, partial_swap(p.effective_epsilon()), 1, 2, 3);
    DensityMatrix pair_post = reduced(reg, 3, {1, 2});

    DensityMatrix system = reduced(reg, 3, {0});
    DensityMatrix carried = reduced(reg, 3, {2});
    StepSnapshot snap{index, system, carried, std::move(pair_pre), std::move(pair_post),
                      std::nullopt};
    return {Strategy1State{std::move(system), std::move(carried)}, std::move(snap)};
}

std::pair<Strategy2State, StepSnapshot> step_strategy2(const Strategy2State& s,
                                                       const ModelParams& p, int index) {
    const DensityMatrix eta = fresh_env(p);
    Matrix reg = tensor_product(s.joint.matrix(), eta.matrix());
    DensityMatrix pair_pre = reduced(reg, 3, {1, 2});
    apply_two_qubit_unitary(reg, partial_swap(p.nu), 0, 1, 3);
    apply_two_qubit_unitary(reg, partial_swap(p.effective_epsilon()), 1, 2, 3);
    DensityMatrix pair_post = reduced(reg, 3, {1, 2});

    DensityMatrix joint_next = reduced(reg, 3, {0, 2});
    StepSnapshot snap{index,
                      reduced(reg, 3, {0}),
                      reduced(reg, 3, {2}),
                      std::move(pair_pre),
                      std::move(pair_post),
                      joint_next};
    return {Strategy2State{std::move(joint_next)}, std::move(snap)};
}

StepSnapshot step_exact(ExactState& s, const ModelParams& p) {
    const int i = s.collisions_done + 1;
    if (i > s.env_qubits) {
        throw std::invalid_argument("step_exact: chain exhausted after " +
                                    std::to_string(s.env_qubits) + " collisions");
    }
    const int k = s.env_qubits + 1;
    const DensityMatrix eta = fresh_env(p);
    const bool has_partner = i < s.env_qubits;

    Matrix reg = s.chain.matrix();
    DensityMatrix pair_pre = has_partner
                                 ? reduced(reg, k, {i, i + 1})
                                 : tensor_product(reduced(reg, k, {i}), eta);
    apply_two_qubit_unitary(reg, partial_swap(p.nu), 0, i, k);
    if (has_partner) {
        apply_two_qubit_unitary(reg, partial_swap(p.effective_epsilon()), i, i + 1, k);
    }
    DensityMatrix pair_post = has_partner
                                  ? reduced(reg, k, {i, i + 1})
                                  : tensor_product(reduced(reg, k, {i}), eta);

    StepSnapshot snap{i,
                      reduced(reg, k, {0}),
                      has_partner ? reduced(reg, k, {i + 1}) : eta,
                      std::move(pair_pre),
                      std::move(pair_post),
                      std::nullopt};
    s.chain = DensityMatrix::renormalized(std::move(reg));
    s.collisions_done = i;
    return snap;
}

CarriedState initial_carried_state(const ModelParams& p, const DensityMatrix& initial_system) {
    switch (p.strategy) {
        case Strategy::markovian:
            return MarkovianState{initial_system};
        case Strategy::strategy1:
            return Strategy1State{initial_system, fresh_env(p)};
        case Strategy::strategy2:
            return Strategy2State{tensor_product(initial_system, fresh_env(p))};
        case Strategy::exact: {
            DensityMatrix chain = initial_system;
            for (int q = 0; q < p.n_collisions; ++q) {
                chain = tensor_product(chain, fresh_env(p));
            }
            return ExactState{std::move(chain), p.n_collisions, 0};
        }
    }
    throw std::invalid_argument("initial_carried_state: unknown strategy");
}

Trajectory run_trajectory(const ModelParams& p, const DensityMatrix& initial_system) {
    p.validate();
    if (initial_system.qubits() != 1) {
        throw std::invalid_argument("run_trajectory: initial system must be a single qubit");
    }
    if (p.strategy == Strategy::exact) {
        return run_exact(p, initial_system, p.n_collisions).trajectory;
    }

    Trajectory traj{p, initial_system, {}};
    traj.steps.reserve(static_cast<std::size_t>(p.n_collisions));
    CarriedState carried = initial_carried_state(p, initial_system);
    for (int i = 1; i <= p.n_collisions; ++i) {
        if (auto* m = std::get_if<MarkovianState>(&carried)) {
            auto [next, snap] = step_markovian(*m, p, i);
            carried = std::move(next);
            traj.steps.push_back(std::move(snap));
        } else if (auto* s1 = std::get_if<Strategy1State>(&carried)) {
            auto [next, snap] = step_strategy1(*s1, p, i);
            carried = std::move(next);
            traj.steps.push_back(std::move(snap));
        } else {
            auto [next, snap] = step_strategy2(std::get<Strategy2State>(carried), p, i);
            carried = std::move(next);
            traj.steps.push_back(std::move(snap));
        }
    }
    return traj;
}

ExactRun run_exact(const ModelParams& p, const DensityMatrix& initial_system, int n_env) {
    ModelParams params = p;
    params.strategy = Strategy::exact;
    params.validate();
    if (initial_system.qubits() != 1) {
        throw std::invalid_argument("run_exact: initial system must be a single qubit");
    }
    if (n_env < 1 || 1 + n_env > max_qubits) {
        throw SizeError("run_exact: environment must hold 1.." + std::to_string(max_qubits - 1) +
                        " qubits, got " + std::to_string(n_env));
    }
    if (params.n_collisions > n_env) {
        std::ostringstream os;
        os << "run_exact: " << params.n_collisions << " collisions exceed the " << n_env
           << "-qubit chain; maximum is " << n_env;
        throw SizeError(os.str());
    }

    DensityMatrix chain = initial_system;
    const DensityMatrix eta = fresh_env(params);
    for (int q = 0; q < n_env; ++q) {
        chain = tensor_product(chain, eta);
    }
    ExactState state{std::move(chain), n_env, 0};

    Trajectory traj{params, initial_system, {}};
    traj.steps.reserve(static_cast<std::size_t>(params.n_collisions));
    for (int i = 1; i <= params.n_collisions; ++i) {
        traj.steps.push_back(step_exact(state, params));
    }
    return ExactRun{std::move(traj), std::move(state.chain)};
}

const DensityMatrix& incoming_env_state(const StepSnapshot& snapshot) {
    return snapshot.incoming_env;
}

} // namespace qcollide

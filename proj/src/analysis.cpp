#include "qcollide/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace qcollide {

namespace {

DensityMatrix fixed_point_state(const ModelParams& p) {
    return thermal_state(p.beta_env(), p.omega_env);
}

Matrix env_pair_hamiltonian(double omega) {
    const Matrix h = qubit_hamiltonian(omega);
    const Matrix id = Matrix::Identity(2, 2);
    return tensor_product(h, id) + tensor_product(id, h);
}

} // namespace

BLPResult blp_measure(const Trajectory& traj_a, const Trajectory& traj_b) {
    if (!(traj_a.params == traj_b.params)) {
        throw std::invalid_argument(
            "blp_measure: trajectories must share parameters and differ only in the initial state");
    }
    if (traj_a.collisions() != traj_b.collisions()) {
        throw std::invalid_argument("blp_measure: trajectories must have equal length");
    }
    const int n = traj_a.collisions();
    BLPResult result;
    result.pair_distances.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        result.pair_distances.push_back(
            trace_distance(traj_a.system_at(i), traj_b.system_at(i)));
    }
    result.increments.reserve(static_cast<std::size_t>(n));
    result.measure = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double inc = result.pair_distances[static_cast<std::size_t>(i)] -
                           result.pair_distances[static_cast<std::size_t>(i) - 1];
        result.increments.push_back(inc);
        if (inc > 0.0) result.measure += inc;
    }
    return result;
}

double entropy_production_step(const DensityMatrix& prev_system,
                               const DensityMatrix& next_system,
                               const DensityMatrix& fixed_point) {
    return relative_entropy(prev_system, fixed_point) -
           relative_entropy(next_system, fixed_point);
}

RwDecomposition rw_decomposition(const DensityMatrix& global_state,
                                 const DensityMatrix& env_initial,
                                 const std::vector<int>& system_qubits) {
    std::vector<int> env_qubits;
    for (int q = 0; q < global_state.qubits(); ++q) {
        if (!std::binary_search(system_qubits.begin(), system_qubits.end(), q)) {
            env_qubits.push_back(q);
        }
    }
    const double mi = mutual_information(global_state, system_qubits);
    const DensityMatrix env_now = partial_trace(global_state, env_qubits);
    return RwDecomposition{mi, relative_entropy(env_now, env_initial)};
}

double heat_flux_step(const StepSnapshot& snapshot, const ModelParams& p) {
    const Matrix h_pair = env_pair_hamiltonian(p.omega_env);
    return p.beta_env() *
           (expectation(h_pair, snapshot.env_pair_post) -
            expectation(h_pair, snapshot.env_pair_pre));
}

double heat_flux_naive(const StepSnapshot& snapshot, const ModelParams& p) {
    const Matrix h = qubit_hamiltonian(p.omega_env);
    const DensityMatrix pre = partial_trace(snapshot.env_pair_pre, {0});
    const DensityMatrix post = partial_trace(snapshot.env_pair_post, {0});
    return p.beta_env() * (expectation(h, post) - expectation(h, pre));
}

std::vector<double> sigma_via_eq7(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.steps.size());
    const double s0 = traj.steps.empty() ? 0.0 : von_neumann_entropy(traj.initial_system);
    double heat = 0.0;
    for (const StepSnapshot& snap : traj.steps) {
        heat += heat_flux_step(snap, traj.params);
        out.push_back(von_neumann_entropy(snap.system) - s0 + heat);
    }
    return out;
}

EntropyLedger make_entropy_ledger(const Trajectory& traj) {
    const DensityMatrix fixed = fixed_point_state(traj.params);
    const int n = traj.collisions();
    EntropyLedger ledger;
    ledger.per_step_sigma.reserve(static_cast<std::size_t>(n));
    ledger.cumulative_sigma.reserve(static_cast<std::size_t>(n));
    ledger.delta_s_system.reserve(static_cast<std::size_t>(n));
    ledger.heat_two_qubit.reserve(static_cast<std::size_t>(n));
    ledger.heat_naive.reserve(static_cast<std::size_t>(n));

    double cumulative = 0.0;
    double prev_entropy = n > 0 ? von_neumann_entropy(traj.initial_system) : 0.0;
    for (int i = 1; i <= n; ++i) {
        const DensityMatrix& prev = traj.system_at(i - 1);
        const DensityMatrix& next = traj.system_at(i);
        const double sigma_i = entropy_production_step(prev, next, fixed);
        cumulative += sigma_i;
        ledger.per_step_sigma.push_back(sigma_i);
        ledger.cumulative_sigma.push_back(cumulative);

        const double next_entropy = von_neumann_entropy(next);
        ledger.delta_s_system.push_back(next_entropy - prev_entropy);
        prev_entropy = next_entropy;

        const StepSnapshot& snap = traj.steps[static_cast<std::size_t>(i) - 1];
        ledger.heat_two_qubit.push_back(heat_flux_step(snap, traj.params));
        ledger.heat_naive.push_back(heat_flux_naive(snap, traj.params));
    }
    ledger.rate = ledger.per_step_sigma;
    return ledger;
}

std::vector<double> entropy_rate(const EntropyLedger& ledger) {
    return ledger.per_step_sigma;
}

EntropyLedger make_entropy_ledger(const ExactSeries& series) {
    EntropyLedger ledger = make_entropy_ledger(series.trajectory);
    ledger.rw_terms.reserve(series.steps.size());
    for (const ExactStepDecomposition& row : series.steps) {
        ledger.rw_terms.push_back(RwDecomposition{row.mutual_info, row.env_relative_entropy});
    }
    return ledger;
}

ExactSeries exact_decomposition_series(const ModelParams& p,
                                       const DensityMatrix& initial_system, int n_env) {
    ModelParams params = p;
    params.strategy = Strategy::exact;
    params.validate();
    if (initial_system.qubits() != 1) {
        throw std::invalid_argument("exact_decomposition_series: initial system must be one qubit");
    }
    if (n_env < 1 || 1 + n_env > max_qubits) {
        throw SizeError("exact_decomposition_series: environment must hold 1.." +
                        std::to_string(max_qubits - 1) + " qubits, got " + std::to_string(n_env));
    }
    if (params.n_collisions > n_env) {
        throw SizeError("exact_decomposition_series: " + std::to_string(params.n_collisions) +
                        " collisions exceed the chain; maximum is " + std::to_string(n_env));
    }

    const DensityMatrix eta = thermal_state(params.beta_env(), params.omega_env);
    const DensityMatrix fixed = fixed_point_state(params);

    DensityMatrix chain = initial_system;
    DensityMatrix env_initial = eta;
    for (int q = 1; q < n_env; ++q) env_initial = tensor_product(env_initial, eta);
    chain = tensor_product(chain, env_initial);

    // Total environment Hamiltonian, diagonal in the energy eigenbasis.
    const Eigen::Index env_dim = env_initial.dim();
    Matrix h_env = Matrix::Zero(env_dim, env_dim);
    for (Eigen::Index b = 0; b < env_dim; ++b) {
        double e = 0.0;
        for (int j = 0; j < n_env; ++j) {
            e += (b & (Eigen::Index{1} << (n_env - 1 - j))) ? -params.omega_env
                                                            : params.omega_env;
        }
        h_env(b, b) = e;
    }

    std::vector<int> env_qubits;
    for (int q = 1; q <= n_env; ++q) env_qubits.push_back(q);

    const double s_init = von_neumann_entropy(initial_system);
    const double e_init = expectation(h_env, env_initial);
    const double relent_init = relative_entropy(initial_system, fixed);

    ExactState state{std::move(chain), n_env, 0};
    ExactSeries series{{params, initial_system, {}}, {}, state.chain};
    series.trajectory.steps.reserve(static_cast<std::size_t>(params.n_collisions));
    series.steps.reserve(static_cast<std::size_t>(params.n_collisions));

    for (int i = 1; i <= params.n_collisions; ++i) {
        series.trajectory.steps.push_back(step_exact(state, params));

        const DensityMatrix sys = partial_trace(state.chain, {0});
        const DensityMatrix env = partial_trace(state.chain, env_qubits);
        const double s_sys = von_neumann_entropy(sys);
        const double s_env = von_neumann_entropy(env);
        const double s_global = von_neumann_entropy(state.chain);

        ExactStepDecomposition row;
        row.index = i;
        row.mutual_info = s_sys + s_env - s_global;
        // S(rho'_E || rho_E) with the environment entropy reused
        row.env_relative_entropy = -s_env - cross_entropy_term(env, env_initial);
        row.rw_sum = row.mutual_info + row.env_relative_entropy;
        row.sigma_relent = relent_init - relative_entropy(sys, fixed);
        row.sigma_heat =
            (s_sys - s_init) + params.beta_env() * (expectation(h_env, env) - e_init);
        row.max_discrepancy = std::max({std::abs(row.rw_sum - row.sigma_relent),
                                        std::abs(row.rw_sum - row.sigma_heat),
                                        std::abs(row.sigma_relent - row.sigma_heat)});
        series.steps.push_back(row);
    }
    series.global_final = state.chain;
    return series;
}

} // namespace qcollide

// model.hpp — Physical setup: Hamiltonians, thermal states, partial-SWAP
// unitaries, register embedding and the thermal-operation validity check.

#pragma once

#include <limits>
#include <numbers>
#include <string>

#include "qcollide/qmath.hpp"

namespace qcollide {

enum class Strategy {
    markovian, // no intra-environment collisions (quantum homogenization)
    strategy1, // correlations erased between steps, env state still carried
    strategy2, // joint system-environment state carried between steps
    exact,     // full chain kept, no partial traces during evolution
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

// Physical configuration. Temperatures are in energy units (k_B = 1) and may
// be +infinity (beta = 0); angles are absolute radians in [0, pi/2].
struct ModelParams {
    double temp_system = 0.1;
    double temp_env = 1.0;
    double omega_system = 1.0;
    double omega_env = 1.0;
    double nu = 0.05 * std::numbers::pi / 2.0;      // system-environment swap angle
    double epsilon = 0.95 * std::numbers::pi / 2.0; // intra-environment swap angle
    int n_collisions = 2000;
    Strategy strategy = Strategy::strategy2;

    double beta_system() const { return 1.0 / temp_system; }
    double beta_env() const { return 1.0 / temp_env; }

    // The Markovian strategy treats epsilon as zero regardless of the stored
    // value.
    double effective_epsilon() const {
        return strategy == Strategy::markovian ? 0.0 : epsilon;
    }

    void validate() const; // throws std::invalid_argument naming the field

    bool operator==(const ModelParams&) const = default;
};

// H = omega * sigma_z = omega * diag(1, -1). Basis index 0 is the excited
// state (sigma_z eigenvalue +1).
Matrix qubit_hamiltonian(double omega);

// Gibbs state exp(-beta H)/Z for H = omega sigma_z; populations
// (e^{-beta omega}, e^{+beta omega}) / 2cosh(beta omega). beta may be 0
// (maximally mixed) or +infinity (ground-state projector); negative beta is
// rejected.
DensityMatrix thermal_state(double beta, double omega);

// Two-qubit SWAP in the energy eigenbasis.
Matrix swap_operator();

// cos(theta) 1 + i sin(theta) S; theta = 0 is the identity, theta = pi/2 a
// perfect swap up to global phase.
Matrix partial_swap(double theta);

// Embeds a 4x4 operator into a 2^k register acting on (target_a, target_b),
// identity elsewhere. target_a maps to the operator's most significant
// factor.
Matrix embed_unitary(const Matrix& u4, int total_qubits, int target_a, int target_b);

// Max-entry norm of [W, H_total] for the composed step unitary
// W = U_{E_i,E_{i+1}}(eps) U_{S,E_i}(nu) on the three-qubit step register.
// Zero (to rounding) iff the step is a thermal operation, which requires
// resonance omega_S = omega_E.
double check_energy_conservation(const ModelParams& params);

// (1 + r . sigma)/2 for a Bloch vector with |r| <= 1.
DensityMatrix bloch_state(double rx, double ry, double rz);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

} // namespace qcollide

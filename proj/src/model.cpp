#include "qcollide/model.hpp"

#include <cmath>
#include <sstream>

namespace qcollide {

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

void require_in_range(double value, double lo, double hi, const char* field) {
    if (!(value >= lo && value <= hi)) {
        std::ostringstream os;
        os << field << " must be within [" << lo << ", " << hi << "], got " << value;
        throw std::invalid_argument(os.str());
    }
}

} // namespace

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::markovian: return "markovian";
        case Strategy::strategy1: return "strategy1";
        case Strategy::strategy2: return "strategy2";
        case Strategy::exact: return "exact";
    }
    throw std::invalid_argument("to_string: unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "markovian") return Strategy::markovian;
    if (name == "strategy1") return Strategy::strategy1;
    if (name == "strategy2") return Strategy::strategy2;
    if (name == "exact") return Strategy::exact;
    throw std::invalid_argument("strategy must be one of markovian|strategy1|strategy2|exact, got '" +
                                name + "'");
}

void ModelParams::validate() const {
    if (!(temp_system > 0.0)) {
        throw std::invalid_argument("temp_system must be > 0 (may be +inf), got " +
                                    std::to_string(temp_system));
    }
    if (!(temp_env > 0.0)) {
        throw std::invalid_argument("temp_env must be > 0 (may be +inf), got " +
                                    std::to_string(temp_env));
    }
    if (!std::isfinite(omega_system) || !std::isfinite(omega_env)) {
        throw std::invalid_argument("omega_system and omega_env must be finite");
    }
    require_in_range(nu, 0.0, half_pi, "nu");
    require_in_range(epsilon, 0.0, half_pi, "epsilon");
    if (n_collisions < 1) {
        throw std::invalid_argument("n_collisions must be >= 1, got " +
                                    std::to_string(n_collisions));
    }
}

Matrix qubit_hamiltonian(double omega) {
    if (!std::isfinite(omega)) {
        throw std::invalid_argument("qubit_hamiltonian: omega must be finite");
    }
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = omega;
    h(1, 1) = -omega;
    return h;
}

DensityMatrix thermal_state(double beta, double omega) {
    if (std::isnan(beta) || beta < 0.0) {
        throw std::invalid_argument("thermal_state: beta must be >= 0 (may be +inf), got " +
                                    std::to_string(beta));
    }
    // p_excited = e^{-beta omega}/(e^{-beta omega} + e^{+beta omega})
    double p_exc;
    if (omega == 0.0) {
        p_exc = 0.5; // degenerate levels, also covers beta = +inf
    } else {
        p_exc = 1.0 / (1.0 + std::exp(2.0 * beta * omega));
    }
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = p_exc;
    rho(1, 1) = 1.0 - p_exc;
    return DensityMatrix(std::move(rho));
}

Matrix swap_operator() {
    Matrix s = Matrix::Zero(4, 4);
    s(0, 0) = 1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 3) = 1.0;
    return s;
}

Matrix partial_swap(double theta) {
    return std::cos(theta) * Matrix::Identity(4, 4) +
           Complex{0.0, 1.0} * std::sin(theta) * swap_operator();
}

Matrix embed_unitary(const Matrix& u4, int total_qubits, int target_a, int target_b) {
    if (u4.rows() != 4 || u4.cols() != 4) {
        throw std::invalid_argument("embed_unitary: operator must be 4x4");
    }
    if (total_qubits < 2 || total_qubits > max_qubits) {
        throw std::invalid_argument("embed_unitary: total qubits must be within [2, " +
                                    std::to_string(max_qubits) + "]");
    }
    if (target_a == target_b || target_a < 0 || target_b < 0 || target_a >= total_qubits ||
        target_b >= total_qubits) {
        throw std::invalid_argument("embed_unitary: targets must be distinct and within range");
    }
    const Eigen::Index d = Eigen::Index{1} << total_qubits;
    const Eigen::Index ma = Eigen::Index{1} << (total_qubits - 1 - target_a);
    const Eigen::Index mb = Eigen::Index{1} << (total_qubits - 1 - target_b);
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        const int in_a = (c & ma) ? 1 : 0;
        const int in_b = (c & mb) ? 1 : 0;
        const Eigen::Index base = c & ~(ma | mb);
        for (int oa = 0; oa < 2; ++oa) {
            for (int ob = 0; ob < 2; ++ob) {
                const Eigen::Index r = base | (oa ? ma : 0) | (ob ? mb : 0);
                out(r, c) = u4(2 * oa + ob, 2 * in_a + in_b);
            }
        }
    }
    return out;
}

double check_energy_conservation(const ModelParams& params) {
    const Matrix step = embed_unitary(partial_swap(params.effective_epsilon()), 3, 1, 2) *
                        embed_unitary(partial_swap(params.nu), 3, 0, 1);
    const Matrix z = pauli_z();
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix h_total =
        params.omega_system * tensor_product(tensor_product(z, id), id) +
        params.omega_env * tensor_product(tensor_product(id, z), id) +
        params.omega_env * tensor_product(tensor_product(id, id), z);
    return (step * h_total - h_total * step).cwiseAbs().maxCoeff();
}

DensityMatrix bloch_state(double rx, double ry, double rz) {
    const double norm = std::sqrt(rx * rx + ry * ry + rz * rz);
    if (norm > 1.0 + 1e-12) {
        throw std::invalid_argument("bloch_state: |r| must be <= 1, got " + std::to_string(norm));
    }
    const Matrix rho =
        0.5 * (Matrix::Identity(2, 2) + rx * pauli_x() + ry * pauli_y() + rz * pauli_z());
    return DensityMatrix(rho);
}

Matrix pauli_x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Matrix pauli_y() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = Complex{0.0, -1.0};
    m(1, 0) = Complex{0.0, 1.0};
    return m;
}

Matrix pauli_z() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

} // namespace qcollide

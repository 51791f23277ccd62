// qmath.hpp — Dense complex Hermitian linear algebra and quantum-information
// functionals on small multi-qubit density matrices.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "qcollide/errors.hpp"

namespace qcollide {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Numerical tolerances used by the type invariants and the entropy
// functionals. Values are pinned; tests assert against them.
namespace tol {
inline constexpr double herm = 1e-10;      // max |M - M^dag| entrywise
inline constexpr double trace = 1e-10;     // |tr - 1|
inline constexpr double psd = 1e-10;       // min eigenvalue >= -psd
inline constexpr double eig_floor = 1e-14; // eigenvalues below this contribute 0 to logs
inline constexpr double support = 1e-10;   // relative-entropy support threshold
} // namespace tol

// Dense storage cap: a 15-qubit density matrix would not fit in memory.
inline constexpr int max_qubits = 14;

// Positivity is an O(dim^3) eigensolve; it is enforced at construction only
// up to this dimension. Larger states keep the cheap invariants.
inline constexpr Eigen::Index psd_check_dim_cap = 64;

// Number of qubits for a 2^k dimension; throws std::invalid_argument if the
// dimension is not a power of two.
int qubit_count_for_dim(Eigen::Index dim);

// Hermitian, unit-trace, positive-semidefinite matrix over k >= 1 qubits.
// Construction validates the invariants (Hermiticity and trace within
// tolerance, finite entries, positivity for small dimensions).
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m);

    // Symmetrizes and rescales to unit trace before validating. Used on
    // partial-trace outputs inside iterations, where accumulated rounding in
    // a tensor-product factor would otherwise compound multiplicatively.
    static DensityMatrix renormalized(Matrix m);

    int qubits() const { return qubits_; }
    Eigen::Index dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }

    bool operator==(const DensityMatrix& other) const { return mat_ == other.mat_; }

private:
    Matrix mat_;
    int qubits_;
};

// ----------------------------- operations ----------------------------------

// Kronecker product; (a (x) b)[(i*db+j),(m*db+n)] = a[i,m]*b[j,n]. The first
// factor occupies the most significant qubits.
Matrix tensor_product(const Matrix& a, const Matrix& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state on the kept qubits (ascending order, non-empty).
DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep);
Matrix partial_trace(const Matrix& m, int total_qubits, const std::vector<int>& keep);

// Spectral decomposition m = V diag(values) V^dag with eigenvalues in
// descending order. Input must be Hermitian within tol::herm.
struct EigResult {
    Eigen::VectorXd values;
    Matrix vectors; // columns are eigenvectors
};
EigResult hermitian_eig(const Matrix& m);
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m); // descending, no vectors

// S(rho) = -tr(rho log rho) in nats; eigenvalues below tol::eig_floor
// contribute zero (0 log 0 := 0).
double von_neumann_entropy(const DensityMatrix& rho);

// S(rho||sigma) = tr(rho log rho) - tr(rho log sigma) in nats. Throws
// SupportError if sigma has an eigenvalue below tol::eig_floor where rho
// carries weight above tol::support.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

// D(rho,sigma) = (1/2)||rho - sigma||_1, half the sum of absolute
// eigenvalues of the Hermitian difference. Lies in [0,1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// I(A:B) = S(rho_A) + S(rho_B) - S(rho_AB); subsystem_a holds the qubit
// indices of one side of the bipartition (proper non-empty subset).
double mutual_information(const DensityMatrix& rho_ab, const std::vector<int>& subsystem_a);

// tr(obs rho) for Hermitian obs; throws ContractViolation if the imaginary
// residue exceeds 1e-8, otherwise discards it.
double expectation(const Matrix& observable, const DensityMatrix& rho);

// In-place rho -> U rho U^dag for a 4x4 unitary acting on qubits (a,b) of a
// register, without materializing the embedded operator. Qubit a is the
// unitary's most significant factor.
void apply_two_qubit_unitary(Matrix& rho, const Matrix& u4, int qubit_a, int qubit_b,
                             int total_qubits);

// tr(rho ln sigma) with the relative-entropy support rules. Exposed so that
// analysis code evaluating several functionals of one state can reuse an
// already computed entropy.
double cross_entropy_term(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace qcollide

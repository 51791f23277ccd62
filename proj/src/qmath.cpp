#include "qcollide/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef QCOLLIDE_HAVE_LAPACKE
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#else
#include <Eigen/Eigenvalues>
#endif

namespace qcollide {

namespace {

void require_hermitian(const Matrix& m, const char* who) {
    if (m.rows() != m.cols()) {
        throw ContractViolation(std::string(who) + ": matrix is not square");
    }
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol::herm) {
        std::ostringstream os;
        os << who << ": input is not Hermitian (max deviation " << dev << ")";
        throw ContractViolation(os.str());
    }
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

// Eigenvalues ascending, optionally with eigenvectors overwriting `a`.
Eigen::VectorXd eig_ascending(Matrix& a, bool want_vectors) {
    const auto n = a.rows();
    Eigen::VectorXd w(n);
#ifdef QCOLLIDE_HAVE_LAPACKE
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L',
                                    static_cast<lapack_int>(n),
                                    a.data(), static_cast<lapack_int>(n), w.data());
    if (info != 0) {
        throw std::runtime_error("hermitian_eig: LAPACKE_zheevd failed with info " +
                                 std::to_string(info));
    }
#else
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    solver.compute(a, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    }
    w = solver.eigenvalues();
    if (want_vectors) a = solver.eigenvectors();
#endif
    return w;
}

bool strictly_ascending_in_range(const std::vector<int>& v, int k) {
    for (std::size_t h = 0; h < v.size(); ++h) {
        if (v[h] < 0 || v[h] >= k) return false;
        if (h > 0 && v[h] <= v[h - 1]) return false;
    }
    return true;
}

// Below this size a single dense solve is always cheapest.
constexpr Eigen::Index block_solve_min_dim = 64;

// Connected components of the exact nonzero pattern. Collision-chain states
// are block diagonal in the magnetization sectors (the partial swaps conserve
// total sigma_z and never write to the forbidden entries), which cuts the
// eigenvalue cost by an order of magnitude at full register size. States
// without the structure come back as one component.
std::vector<std::vector<Eigen::Index>> nonzero_pattern_blocks(const Matrix& m) {
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> parent(n);
    for (Eigen::Index i = 0; i < n; ++i) parent[i] = i;
    const auto find = [&parent](Eigen::Index i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = c + 1; r < n; ++r) {
            if (m(r, c) != Complex{0.0, 0.0}) {
                const Eigen::Index a = find(r), b = find(c);
                if (a != b) parent[a] = b;
            }
        }
    }
    std::vector<std::vector<Eigen::Index>> blocks;
    std::vector<Eigen::Index> block_of(n, -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index root = find(i);
        if (block_of[root] < 0) {
            block_of[root] = static_cast<Eigen::Index>(blocks.size());
            blocks.emplace_back();
        }
        blocks[static_cast<std::size_t>(block_of[root])].push_back(i);
    }
    return blocks;
}

// Exact-zero off-diagonal test; enables the spectral fast path for states
// built as diagonal products (thermal chains).
bool is_exactly_diagonal(const Matrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (r != c && m(r, c) != Complex{0.0, 0.0}) return false;
        }
    }
    return true;
}

double entropy_from_eigenvalues(const Eigen::VectorXd& w) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) > tol::eig_floor) s -= w(i) * std::log(w(i));
    }
    return s;
}

} // namespace

int qubit_count_for_dim(Eigen::Index dim) {
    if (dim < 1) throw std::invalid_argument("qubit_count_for_dim: dimension must be positive");
    int k = 0;
    Eigen::Index d = dim;
    while (d > 1) {
        if (d % 2 != 0) {
            throw std::invalid_argument("qubit_count_for_dim: dimension " +
                                        std::to_string(dim) + " is not a power of two");
        }
        d /= 2;
        ++k;
    }
    return k;
}

DensityMatrix::DensityMatrix(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols()) {
        throw std::invalid_argument("DensityMatrix: matrix is not square");
    }
    qubits_ = qubit_count_for_dim(mat_.rows());
    if (qubits_ < 1) {
        throw std::invalid_argument("DensityMatrix: at least one qubit required");
    }
    if (qubits_ > max_qubits) {
        throw SizeError("DensityMatrix: " + std::to_string(qubits_) +
                        " qubits exceeds the cap of " + std::to_string(max_qubits));
    }
    if (!all_finite(mat_)) {
        throw std::invalid_argument("DensityMatrix: entries must be finite");
    }
    const double herm_dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > tol::herm) {
        std::ostringstream os;
        os << "DensityMatrix: not Hermitian (max deviation " << herm_dev << ")";
        throw std::invalid_argument(os.str());
    }
    const double trace_dev = std::abs(mat_.trace() - Complex{1.0, 0.0});
    if (trace_dev > tol::trace) {
        std::ostringstream os;
        os << "DensityMatrix: trace deviates from 1 by " << trace_dev;
        throw std::invalid_argument(os.str());
    }
    if (mat_.rows() <= psd_check_dim_cap) {
        Matrix scratch = mat_;
        const Eigen::VectorXd w = eig_ascending(scratch, false);
        if (w(0) < -tol::psd) {
            std::ostringstream os;
            os << "DensityMatrix: not positive semidefinite (min eigenvalue " << w(0) << ")";
            throw std::invalid_argument(os.str());
        }
    }
}

DensityMatrix DensityMatrix::renormalized(Matrix m) {
    Matrix h = 0.5 * (m + m.adjoint());
    const double tr = h.trace().real();
    if (!(std::abs(tr) > 0.0) || !std::isfinite(tr)) {
        throw std::invalid_argument("DensityMatrix::renormalized: trace is zero or not finite");
    }
    h /= tr;
    return DensityMatrix(std::move(h));
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index m = 0; m < a.cols(); ++m) {
            out.block(i * b.rows(), m * b.cols(), b.rows(), b.cols()) = a(i, m) * b;
        }
    }
    return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.qubits() + b.qubits() > max_qubits) {
        throw SizeError("tensor_product: " + std::to_string(a.qubits() + b.qubits()) +
                        " qubits exceeds the cap of " + std::to_string(max_qubits));
    }
    return DensityMatrix(tensor_product(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix& m, int total_qubits, const std::vector<int>& keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set must not be empty");
    }
    if (!strictly_ascending_in_range(keep, total_qubits)) {
        throw std::invalid_argument(
            "partial_trace: keep indices must be strictly ascending and within range");
    }
    const Eigen::Index dim = Eigen::Index{1} << total_qubits;
    if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument("partial_trace: matrix dimension does not match qubit count");
    }

    const int r = static_cast<int>(keep.size());
    const int t = total_qubits - r;
    std::vector<int> traced;
    traced.reserve(t);
    for (int q = 0; q < total_qubits; ++q) {
        if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);
    }

    // Register bit of qubit q (qubit 0 is the most significant).
    const auto bit = [total_qubits](int q) {
        return Eigen::Index{1} << (total_qubits - 1 - q);
    };

    const Eigen::Index dk = Eigen::Index{1} << r;
    const Eigen::Index dt = Eigen::Index{1} << t;

    std::vector<Eigen::Index> kept_offset(dk, 0);
    for (Eigen::Index x = 0; x < dk; ++x) {
        for (int h = 0; h < r; ++h) {
            if (x & (Eigen::Index{1} << (r - 1 - h))) kept_offset[x] |= bit(keep[h]);
        }
    }
    std::vector<Eigen::Index> traced_offset(dt, 0);
    for (Eigen::Index y = 0; y < dt; ++y) {
        for (int h = 0; h < t; ++h) {
            if (y & (Eigen::Index{1} << (t - 1 - h))) traced_offset[y] |= bit(traced[h]);
        }
    }

    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index xc = 0; xc < dk; ++xc) {
        for (Eigen::Index xr = 0; xr < dk; ++xr) {
            Complex acc{0.0, 0.0};
            for (Eigen::Index y = 0; y < dt; ++y) {
                acc += m(kept_offset[xr] | traced_offset[y], kept_offset[xc] | traced_offset[y]);
            }
            out(xr, xc) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& state, const std::vector<int>& keep) {
    return DensityMatrix::renormalized(partial_trace(state.matrix(), state.qubits(), keep));
}

EigResult hermitian_eig(const Matrix& m) {
    require_hermitian(m, "hermitian_eig");
    Matrix vectors = m;
    Eigen::VectorXd w = eig_ascending(vectors, true);
    // ascending -> descending
    w.reverseInPlace();
    vectors = vectors.rowwise().reverse().eval();
    return EigResult{std::move(w), std::move(vectors)};
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    require_hermitian(m, "hermitian_eigenvalues");
    if (m.rows() >= block_solve_min_dim) {
        const auto blocks = nonzero_pattern_blocks(m);
        if (blocks.size() > 1) {
            Eigen::VectorXd w(m.rows());
            Eigen::Index pos = 0;
            for (const auto& block : blocks) {
                const Eigen::Index s = static_cast<Eigen::Index>(block.size());
                Matrix sub(s, s);
                for (Eigen::Index j = 0; j < s; ++j) {
                    for (Eigen::Index i = 0; i < s; ++i) sub(i, j) = m(block[i], block[j]);
                }
                w.segment(pos, s) = eig_ascending(sub, false);
                pos += s;
            }
            std::sort(w.data(), w.data() + w.size(), std::greater<double>());
            return w;
        }
    }
    Matrix scratch = m;
    Eigen::VectorXd w = eig_ascending(scratch, false);
    w.reverseInPlace();
    return w;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return entropy_from_eigenvalues(hermitian_eigenvalues(rho.matrix()));
}

double cross_entropy_term(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("cross_entropy_term: dimension mismatch");
    }
    Eigen::VectorXd q;
    Eigen::VectorXd w;
    if (is_exactly_diagonal(sigma.matrix())) {
        q = sigma.matrix().diagonal().real();
        w = rho.matrix().diagonal().real();
    } else {
        const EigResult es = hermitian_eig(sigma.matrix());
        q = es.values;
        w = (es.vectors.adjoint() * rho.matrix() * es.vectors).diagonal().real();
    }
    double acc = 0.0;
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        if (q(j) <= tol::eig_floor) {
            if (w(j) > tol::support) {
                std::ostringstream os;
                os << "relative_entropy: support violation (sigma eigenvalue " << q(j)
                   << " carries rho weight " << w(j) << ")";
                throw SupportError(os.str());
            }
            continue;
        }
        acc += w(j) * std::log(q(j));
    }
    return acc;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("relative_entropy: dimension mismatch");
    }
    const double tr_rho_log_rho = -von_neumann_entropy(rho);
    return tr_rho_log_rho - cross_entropy_term(rho, sigma);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    const Eigen::VectorXd w = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
    return 0.5 * w.cwiseAbs().sum();
}

double mutual_information(const DensityMatrix& rho_ab, const std::vector<int>& subsystem_a) {
    const int k = rho_ab.qubits();
    if (subsystem_a.empty() || static_cast<int>(subsystem_a.size()) >= k) {
        throw std::invalid_argument("mutual_information: split must be a proper non-empty subset");
    }
    if (!strictly_ascending_in_range(subsystem_a, k)) {
        throw std::invalid_argument(
            "mutual_information: subsystem indices must be strictly ascending and within range");
    }
    std::vector<int> subsystem_b;
    for (int q = 0; q < k; ++q) {
        if (!std::binary_search(subsystem_a.begin(), subsystem_a.end(), q)) {
            subsystem_b.push_back(q);
        }
    }
    const DensityMatrix rho_a = partial_trace(rho_ab, subsystem_a);
    const DensityMatrix rho_b = partial_trace(rho_ab, subsystem_b);
    return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ab);
}

double expectation(const Matrix& observable, const DensityMatrix& rho) {
    if (observable.rows() != rho.dim() || observable.cols() != rho.dim()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    // tr(O rho) = sum_{ij} O(i,j) rho(j,i)
    const Complex value = (observable.array() * rho.matrix().transpose().array()).sum();
    if (std::abs(value.imag()) > 1e-8) {
        std::ostringstream os;
        os << "expectation: imaginary residue " << value.imag() << " exceeds 1e-8";
        throw ContractViolation(os.str());
    }
    return value.real();
}

void apply_two_qubit_unitary(Matrix& rho, const Matrix& u4, int qubit_a, int qubit_b,
                             int total_qubits) {
    if (u4.rows() != 4 || u4.cols() != 4) {
        throw std::invalid_argument("apply_two_qubit_unitary: unitary must be 4x4");
    }
    if (qubit_a == qubit_b || qubit_a < 0 || qubit_b < 0 || qubit_a >= total_qubits ||
        qubit_b >= total_qubits) {
        throw std::invalid_argument("apply_two_qubit_unitary: invalid target qubits");
    }
    const Eigen::Index d = Eigen::Index{1} << total_qubits;
    if (rho.rows() != d || rho.cols() != d) {
        throw std::invalid_argument("apply_two_qubit_unitary: register dimension mismatch");
    }
    const Eigen::Index ma = Eigen::Index{1} << (total_qubits - 1 - qubit_a);
    const Eigen::Index mb = Eigen::Index{1} << (total_qubits - 1 - qubit_b);

    // rho <- U rho
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            if (r & (ma | mb)) continue;
            const Eigen::Index r00 = r, r01 = r | mb, r10 = r | ma, r11 = r | ma | mb;
            const Complex v0 = rho(r00, c), v1 = rho(r01, c), v2 = rho(r10, c), v3 = rho(r11, c);
            rho(r00, c) = u4(0, 0) * v0 + u4(0, 1) * v1 + u4(0, 2) * v2 + u4(0, 3) * v3;
            rho(r01, c) = u4(1, 0) * v0 + u4(1, 1) * v1 + u4(1, 2) * v2 + u4(1, 3) * v3;
            rho(r10, c) = u4(2, 0) * v0 + u4(2, 1) * v1 + u4(2, 2) * v2 + u4(2, 3) * v3;
            rho(r11, c) = u4(3, 0) * v0 + u4(3, 1) * v1 + u4(3, 2) * v2 + u4(3, 3) * v3;
        }
    }
    // rho <- rho U^dag, column groups at a time
    Eigen::VectorXcd t0(d), t1(d), t2(d), t3(d);
    for (Eigen::Index c = 0; c < d; ++c) {
        if (c & (ma | mb)) continue;
        const Eigen::Index c00 = c, c01 = c | mb, c10 = c | ma, c11 = c | ma | mb;
        t0 = rho.col(c00);
        t1 = rho.col(c01);
        t2 = rho.col(c10);
        t3 = rho.col(c11);
        rho.col(c00) = std::conj(u4(0, 0)) * t0 + std::conj(u4(0, 1)) * t1 +
                       std::conj(u4(0, 2)) * t2 + std::conj(u4(0, 3)) * t3;
        rho.col(c01) = std::conj(u4(1, 0)) * t0 + std::conj(u4(1, 1)) * t1 +
                       std::conj(u4(1, 2)) * t2 + std::conj(u4(1, 3)) * t3;
        rho.col(c10) = std::conj(u4(2, 0)) * t0 + std::conj(u4(2, 1)) * t1 +
                       std::conj(u4(2, 2)) * t2 + std::conj(u4(2, 3)) * t3;
        rho.col(c11) = std::conj(u4(3, 0)) * t0 + std::conj(u4(3, 1)) * t1 +
                       std::conj(u4(3, 2)) * t2 + std::conj(u4(3, 3)) * t3;
    }
}

} // namespace qcollide

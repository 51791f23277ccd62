#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcollide/model.hpp"
#include "testutil.hpp"

using namespace qcollide;
using qtest::max_abs_diff;

namespace {
constexpr double half_pi = std::numbers::pi / 2.0;
}

TEST_CASE("qubit Hamiltonian is omega sigma_z") {
    CHECK(max_abs_diff(qubit_hamiltonian(1.0), pauli_z()) == 0.0);
    CHECK(qubit_hamiltonian(0.0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_diff(qubit_hamiltonian(2.0), 2.0 * pauli_z()) == 0.0);
}

TEST_CASE("thermal state populations") {
    // zero temperature: ground-state projector (sigma_z eigenvalue -1)
    const DensityMatrix zero_t = thermal_state(std::numeric_limits<double>::infinity(), 1.0);
    CHECK(zero_t.matrix()(0, 0).real() == 0.0);
    CHECK(zero_t.matrix()(1, 1).real() == 1.0);

    const DensityMatrix t = thermal_state(1.0, 1.0);
    const double p = std::exp(-1.0) / (2.0 * std::cosh(1.0));
    CHECK(std::abs(t.matrix()(0, 0).real() - p) <= 1e-15);
    CHECK(std::abs(t.matrix()(0, 0).real() - 0.119203) <= 1e-6);
    CHECK(std::abs(t.matrix()(1, 1).real() - 0.880797) <= 1e-6);
    CHECK(t.matrix()(0, 1) == Complex{0.0, 0.0});

    // infinite temperature limit
    CHECK(max_abs_diff(thermal_state(0.0, 1.0).matrix(), 0.5 * Matrix::Identity(2, 2)) == 0.0);
    CHECK(max_abs_diff(thermal_state(1e-14, 1.0).matrix(), 0.5 * Matrix::Identity(2, 2)) <= 1e-13);

    // populations sum to one exactly by construction
    for (double beta : {0.0, 0.3, 2.0, 50.0}) {
        const Matrix m = thermal_state(beta, 1.0).matrix();
        CHECK(m(0, 0).real() + m(1, 1).real() == 1.0);
    }
}

TEST_CASE("thermal state rejects negative beta") {
    CHECK_THROWS_AS(thermal_state(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(thermal_state(std::numeric_limits<double>::quiet_NaN(), 1.0),
                    std::invalid_argument);
}

TEST_CASE("partial swap endpoints") {
    CHECK(max_abs_diff(partial_swap(0.0), Matrix::Identity(4, 4)) == 0.0);
    const Matrix full = partial_swap(half_pi);
    const Matrix want = Complex{0.0, 1.0} * swap_operator();
    CHECK(max_abs_diff(full, want) <= 1e-12);
}

TEST_CASE("partial swap is unitary for sampled angles") {
    for (double frac : {0.05, 0.31, 0.5, 0.77, 0.95, 1.0}) {
        const Matrix u = partial_swap(frac * half_pi);
        CHECK(max_abs_diff(u * u.adjoint(), Matrix::Identity(4, 4)) <= 1e-12);
    }
}

TEST_CASE("partial swap mixes diagonal states classically") {
    auto rng = qtest::seeded_rng(31);
    for (int rep = 0; rep < 6; ++rep) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double pa = u(rng), pb = u(rng), theta = u(rng) * half_pi;
        Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
        a(0, 0) = pa;
        a(1, 1) = 1.0 - pa;
        b(0, 0) = pb;
        b(1, 1) = 1.0 - pb;

        Matrix reg = tensor_product(a, b);
        apply_two_qubit_unitary(reg, partial_swap(theta), 0, 1, 2);
        const Matrix reduced = partial_trace(reg, 2, {0});
        const Matrix want = std::cos(theta) * std::cos(theta) * a +
                            std::sin(theta) * std::sin(theta) * b;
        CHECK(max_abs_diff(reduced, want) <= 1e-14);
    }
}

TEST_CASE("embed_unitary: identity and two-qubit cases") {
    CHECK(max_abs_diff(embed_unitary(Matrix::Identity(4, 4), 3, 0, 1), Matrix::Identity(8, 8)) ==
          0.0);
    CHECK(max_abs_diff(embed_unitary(swap_operator(), 2, 0, 1), swap_operator()) == 0.0);
}

TEST_CASE("embed_unitary permutes basis states across a gap") {
    const Matrix s02 = embed_unitary(swap_operator(), 3, 0, 2);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                const int in = (a << 2) | (b << 1) | c;
                const int out = (c << 2) | (b << 1) | a;
                for (int r = 0; r < 8; ++r) {
                    CHECK(s02(r, in) == (r == out ? Complex{1.0, 0.0} : Complex{0.0, 0.0}));
                }
            }
        }
    }
}

TEST_CASE("embed_unitary preserves unitarity and validates targets") {
    auto rng = qtest::seeded_rng(32);
    const Matrix u = qtest::random_unitary(4, rng);
    const Matrix e = embed_unitary(u, 3, 1, 2);
    CHECK(max_abs_diff(e * e.adjoint(), Matrix::Identity(8, 8)) <= 1e-13);

    CHECK_THROWS_AS(embed_unitary(u, 3, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(embed_unitary(u, 3, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(embed_unitary(Matrix::Identity(2, 2), 3, 0, 1), std::invalid_argument);
}

TEST_CASE("apply_two_qubit_unitary agrees with embedded conjugation") {
    auto rng = qtest::seeded_rng(33);
    for (const auto& [qa, qb] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
        const DensityMatrix rho = qtest::random_density(3, rng);
        const Matrix u = qtest::random_unitary(4, rng);
        Matrix fast = rho.matrix();
        apply_two_qubit_unitary(fast, u, qa, qb, 3);
        const Matrix full = embed_unitary(u, 3, qa, qb);
        CHECK(max_abs_diff(fast, full * rho.matrix() * full.adjoint()) <= 1e-13);
    }
}

TEST_CASE("energy conservation of the composed step unitary") {
    ModelParams p;
    SUBCASE("resonant qubits conserve energy for any angles") {
        for (double eps_frac : {0.0, 0.5, 0.95}) {
            p.epsilon = eps_frac * half_pi;
            CHECK(check_energy_conservation(p) <= 1e-12);
        }
        p.omega_system = p.omega_env = 0.7;
        CHECK(check_energy_conservation(p) <= 1e-12);
    }
    SUBCASE("identity step commutes exactly") {
        p.nu = 0.0;
        p.epsilon = 0.0;
        p.strategy = Strategy::strategy1;
        CHECK(check_energy_conservation(p) == 0.0);
    }
    SUBCASE("detuning breaks conservation") {
        p.omega_system = 1.0;
        p.omega_env = 2.0;
        p.nu = 0.3;
        CHECK(check_energy_conservation(p) > 1e-6);
    }
}

TEST_CASE("bloch states") {
    const DensityMatrix plus = bloch_state(1.0, 0.0, 0.0);
    Matrix want(2, 2);
    want << 0.5, 0.5, 0.5, 0.5;
    CHECK(max_abs_diff(plus.matrix(), want) <= 1e-15);

    CHECK(max_abs_diff(bloch_state(0.0, 0.0, 0.0).matrix(), 0.5 * Matrix::Identity(2, 2)) == 0.0);

    Matrix excited = Matrix::Zero(2, 2);
    excited(0, 0) = 1.0;
    CHECK(max_abs_diff(bloch_state(0.0, 0.0, 1.0).matrix(), excited) == 0.0);

    CHECK_THROWS_AS(bloch_state(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("ModelParams validation and strategy names") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());

    p.nu = 2.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.nu = 0.1;
    p.temp_env = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.temp_env = 1.0;
    p.n_collisions = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.n_collisions = 10;
    p.temp_system = std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(p.validate()); // infinite temperature is allowed (beta = 0)

    p.strategy = Strategy::markovian;
    p.epsilon = 1.0;
    CHECK(p.effective_epsilon() == 0.0);
    p.strategy = Strategy::strategy1;
    CHECK(p.effective_epsilon() == 1.0);

    for (Strategy s : {Strategy::markovian, Strategy::strategy1, Strategy::strategy2,
                       Strategy::exact}) {
        CHECK(strategy_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(strategy_from_string("bogus"), std::invalid_argument);
}

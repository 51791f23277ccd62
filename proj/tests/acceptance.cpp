// acceptance.cpp — end-to-end acceptance suite. Each criterion prints one
// PASS/FAIL line with the measured quantities; the process exit code is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcollide/analysis.hpp"
#include "testutil.hpp"

using namespace qcollide;

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

ModelParams reference_params(Strategy s, int n = 2000) {
    ModelParams p;
    p.temp_system = 0.1;
    p.temp_env = 1.0;
    p.omega_system = 1.0;
    p.omega_env = 1.0;
    p.nu = 0.05 * half_pi;
    p.epsilon = 0.95 * half_pi;
    p.n_collisions = n;
    p.strategy = s;
    return p;
}

DensityMatrix cold_system() { return thermal_state(10.0, 1.0); }
DensityMatrix env_gibbs() { return thermal_state(1.0, 1.0); }

double blp_of(const ModelParams& p) {
    const DensityMatrix a = bloch_state(1.0, 0.0, 0.0);
    const DensityMatrix b = bloch_state(-1.0, 0.0, 0.0);
    return blp_measure(run_trajectory(p, a), run_trajectory(p, b)).measure;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %2d: %s (%s; %.2f s)\n", outcome.pass ? "PASS" : "FAIL", id,
                title, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ------------------------------ criteria -------------------------------------

Outcome fixed_point_invariance() {
    const auto start = std::chrono::steady_clock::now();
    const DensityMatrix star = env_gibbs();
    double worst = 0.0;
    for (Strategy s : {Strategy::markovian, Strategy::strategy1, Strategy::strategy2}) {
        for (double eps : {0.0, 0.95 * half_pi}) {
            ModelParams p = reference_params(s);
            p.epsilon = eps;
            const Trajectory traj = run_trajectory(p, star);
            for (int i = 1; i <= traj.collisions(); ++i) {
                worst = std::max(worst, trace_distance(traj.system_at(i), star));
            }
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Outcome{worst <= 1e-12 && seconds < 5.0,
                   "max distance to fixed point " + fmt(worst) + ", limit 1e-12; runtime " +
                       fmt(seconds) + " s < 5 s"};
}

Outcome spohn_positivity() {
    const EntropyLedger ledger =
        make_entropy_ledger(run_trajectory(reference_params(Strategy::markovian), cold_system()));
    const double min_rate = *std::min_element(ledger.rate.begin(), ledger.rate.end());
    return Outcome{min_rate >= -1e-10,
                   "min per-step sigma " + fmt(min_rate) + " >= -1e-10 over 2000 collisions"};
}

Outcome strategy1_positive_rate() {
    const ModelParams p = reference_params(Strategy::strategy1);
    const double measure = blp_of(p);
    const EntropyLedger ledger = make_entropy_ledger(run_trajectory(p, cold_system()));
    const double min_rate = *std::min_element(ledger.rate.begin(), ledger.rate.end());
    return Outcome{measure > 0.0 && min_rate >= -1e-10,
                   "blp measure " + fmt(measure) + " > 0, min rate " + fmt(min_rate) +
                       " >= -1e-10"};
}

Outcome strategy2_negative_rate() {
    const EntropyLedger ledger =
        make_entropy_ledger(run_trajectory(reference_params(Strategy::strategy2), cold_system()));
    const auto min_it = std::min_element(ledger.rate.begin(), ledger.rate.end());
    const double min_rate = *min_it;
    const long min_index = std::distance(ledger.rate.begin(), min_it) + 1;
    const double final_rate = std::abs(ledger.rate.back());
    return Outcome{min_rate < 0.0 && final_rate <= 1e-6,
                   "min rate " + fmt(min_rate) + " < 0 at collision " + std::to_string(min_index) +
                       ", |rate| at N=2000 " + fmt(final_rate) + " <= 1e-6"};
}

Outcome non_markovianity_ordering() {
    const double n1 = blp_of(reference_params(Strategy::strategy1));
    const double n2 = blp_of(reference_params(Strategy::strategy2));
    return Outcome{n2 > n1 && n1 > 0.0,
                   "blp(strategy2) " + fmt(n2) + " > blp(strategy1) " + fmt(n1) + " > 0"};
}

Outcome strategy1_thresholds() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool pass = true;

    for (double eps_frac : {0.90, 0.92}) {
        ModelParams p = reference_params(Strategy::strategy1);
        p.epsilon = eps_frac * half_pi;
        const double n = blp_of(p);
        pass = pass && n <= 1e-12;
        detail << "blp(eps=" << eps_frac << "pi/2)=" << fmt(n) << " ";
    }
    {
        const double n = blp_of(reference_params(Strategy::strategy1));
        pass = pass && n > 0.0;
        detail << "blp(eps=0.95pi/2)=" << fmt(n) << " ";
    }
    for (double temp_env : {4.0, 5.0}) {
        ModelParams p = reference_params(Strategy::strategy1);
        p.temp_env = temp_env;
        const double n = blp_of(p);
        pass = pass && n <= 1e-12;
        detail << "blp(T_E=" << temp_env << ")=" << fmt(n) << " ";
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail << "runtime " << fmt(seconds) << " s < 60 s";
    return Outcome{pass && seconds < 60.0, detail.str()};
}

Outcome steady_state_convergence() {
    const EntropyLedger mk =
        make_entropy_ledger(run_trajectory(reference_params(Strategy::markovian), cold_system()));
    const EntropyLedger s1 =
        make_entropy_ledger(run_trajectory(reference_params(Strategy::strategy1), cold_system()));
    const EntropyLedger s2 =
        make_entropy_ledger(run_trajectory(reference_params(Strategy::strategy2), cold_system()));
    const double sigma_mk = mk.cumulative_sigma.back();
    const double d1 = std::abs(s1.cumulative_sigma.back() - sigma_mk);
    const double d2 = std::abs(s2.cumulative_sigma.back() - sigma_mk);
    const double telescoped = std::abs(sigma_mk - relative_entropy(cold_system(), env_gibbs()));
    return Outcome{d1 <= 1e-3 && d2 <= 1e-3 && telescoped <= 1e-6,
                   "|sigma_s1 - sigma_mk| " + fmt(d1) + ", |sigma_s2 - sigma_mk| " + fmt(d2) +
                       " <= 1e-3; |sigma_mk - S(rho_0||rho_*)| " + fmt(telescoped) + " <= 1e-6"};
}

Outcome exact_three_estimators() {
    const auto start = std::chrono::steady_clock::now();
    const ModelParams p = reference_params(Strategy::exact, 10);
    const ExactSeries series = exact_decomposition_series(p, cold_system(), 10);
    double worst = 0.0;
    for (const ExactStepDecomposition& row : series.steps) {
        worst = std::max(worst, row.max_discrepancy);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Outcome{worst <= 1e-10 && seconds < 30.0,
                   "max pairwise discrepancy " + fmt(worst) + " <= 1e-10 over 10 collisions; "
                   "runtime " + fmt(seconds) + " s < 30 s"};
}

Outcome incoming_environment_equality() {
    const ModelParams p1 = reference_params(Strategy::strategy1, 500);
    const ModelParams p2 = reference_params(Strategy::strategy2, 500);
    const Trajectory t1 = run_trajectory(p1, cold_system());
    const Trajectory t2 = run_trajectory(p2, cold_system());
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        worst = std::max(worst, trace_distance(t1.steps[static_cast<std::size_t>(i)].incoming_env,
                                               t2.steps[static_cast<std::size_t>(i)].incoming_env));
    }
    return Outcome{worst <= 1e-12,
                   "observed max trace distance " + fmt(worst) + ", required <= 1e-12"};
}

Outcome naive_flux_pitfall() {
    const ModelParams p1 = reference_params(Strategy::strategy1);
    const Trajectory t1 = run_trajectory(p1, cold_system());
    const EntropyLedger l1 = make_entropy_ledger(t1);
    double naive_heat = 0.0;
    for (const double q : l1.heat_naive) naive_heat += q;
    const double delta_s = von_neumann_entropy(t1.system_at(2000)) -
                           von_neumann_entropy(t1.system_at(0));
    const double naive_gap = std::abs((delta_s + naive_heat) - l1.cumulative_sigma.back());

    const Trajectory tm = run_trajectory(reference_params(Strategy::markovian), cold_system());
    const EntropyLedger lm = make_entropy_ledger(tm);
    const double pair_gap =
        std::abs(sigma_via_eq7(tm).back() - lm.cumulative_sigma.back());

    return Outcome{naive_gap > 1e-3 && pair_gap <= 1e-8,
                   "strategy-1 |sigma_naive - sigma| " + fmt(naive_gap) +
                       " > 1e-3; markovian two-qubit-flux gap " + fmt(pair_gap) + " <= 1e-8"};
}

Outcome oracle_equivalences() {
    auto rng = qtest::seeded_rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_ptrace = 0.0, worst_recursion = 0.0, worst_decay = 0.0;

    // partial trace against the index-summation oracle
    for (int rep = 0; rep < 100; ++rep) {
        const DensityMatrix rho = qtest::random_density(3, rng);
        const std::vector<std::vector<int>> keeps = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
        const std::vector<int>& keep = keeps[rep % keeps.size()];
        worst_ptrace = std::max(
            worst_ptrace, qtest::max_abs_diff(partial_trace(rho, keep).matrix(),
                                              qtest::partial_trace_oracle(rho.matrix(), 3, keep)));
    }

    // markovian diagonal recursion rho' = cos^2 nu rho + sin^2 nu eta
    for (int rep = 0; rep < 100; ++rep) {
        ModelParams p = reference_params(Strategy::markovian, 1);
        p.nu = u(rng) * half_pi;
        p.temp_env = 0.2 + 4.0 * u(rng);
        const double pop = u(rng);
        Matrix d = Matrix::Zero(2, 2);
        d(0, 0) = pop;
        d(1, 1) = 1.0 - pop;
        const auto [next, snap] = step_markovian(MarkovianState{DensityMatrix(d)}, p, 1);
        const Matrix eta = thermal_state(p.beta_env(), p.omega_env).matrix();
        const Matrix want =
            std::cos(p.nu) * std::cos(p.nu) * d + std::sin(p.nu) * std::sin(p.nu) * eta;
        worst_recursion = std::max(worst_recursion, qtest::max_abs_diff(next.system.matrix(), want));
    }

    // geometric trace-distance decay of the sigma_x pair
    for (int rep = 0; rep < 100; ++rep) {
        ModelParams p = reference_params(Strategy::markovian, 40);
        p.nu = (0.02 + 0.9 * u(rng)) * half_pi;
        p.temp_env = 0.3 + 4.0 * u(rng);
        const BLPResult r = blp_measure(run_trajectory(p, bloch_state(1.0, 0.0, 0.0)),
                                        run_trajectory(p, bloch_state(-1.0, 0.0, 0.0)));
        const double c = std::cos(p.nu), s = std::sin(p.nu);
        const double th = std::tanh(p.beta_env() * p.omega_env);
        const double ratio = c * std::sqrt(c * c + s * s * th * th);
        for (int i = 0; i <= 40; ++i) {
            worst_decay = std::max(worst_decay,
                                   std::abs(r.pair_distances[static_cast<std::size_t>(i)] -
                                            std::pow(ratio, i)));
        }
    }

    const bool pass = worst_ptrace <= 1e-12 && worst_recursion <= 1e-12 && worst_decay <= 1e-12;
    return Outcome{pass, "ptrace " + fmt(worst_ptrace) + ", diagonal recursion " +
                             fmt(worst_recursion) + ", decay ratio " + fmt(worst_decay) +
                             "; all <= 1e-12, 100 cases each"};
}

} // namespace

int main() {
    std::printf("qcollide acceptance suite\n");
    criterion(1, "fixed-point invariance across strategies", fixed_point_invariance);
    criterion(2, "Spohn positivity in the markovian limit", spohn_positivity);
    criterion(3, "strategy 1: non-markovian with positive rates", strategy1_positive_rate);
    criterion(4, "strategy 2: negative transient rates, vanishing at steady state",
              strategy2_negative_rate);
    criterion(5, "non-markovianity ordering between the strategies", non_markovianity_ordering);
    criterion(6, "strategy-1 thresholds in epsilon and environment temperature",
              strategy1_thresholds);
    criterion(7, "steady-state convergence to the markovian entropy production",
              steady_state_convergence);
    criterion(8, "three entropy-production estimators agree on exact runs",
              exact_three_estimators);
    criterion(9, "incoming-environment equality between the strategies",
              incoming_environment_equality);
    criterion(10, "naive single-qubit flux is wrong, two-qubit flux is right",
              naive_flux_pitfall);
    criterion(11, "randomized oracle equivalences", oracle_equivalences);

    if (failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", failures);
    }
    return failures;
}

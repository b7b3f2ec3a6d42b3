/*
 Copyright 2026 The EBAC Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: ebac_acceptance [replicates] (default 50, minimum 20).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ebac/experiments.hpp"
#include "ebac/export.hpp"

namespace {

using namespace ebac;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(const std::string& id, bool passed, const std::string& detail) {
    std::printf("[%s] %-4s %s\n", passed ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!passed) ++g_failures;
}

template <typename... Args>
std::string fmt(const char* format, Args... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, format, args...);
    return buffer;
}

double mean_of(const std::vector<double>& v, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += v[i];
    return s / static_cast<double>(end - begin);
}

/// First trial (1-based) whose trailing 10-trial mean is within 10 % of the
/// plateau, the mean over the last 10 trials.
int plateau_reach(const std::vector<double>& scores) {
    const double plateau = mean_of(scores, scores.size() - 10, scores.size());
    for (std::size_t k = 9; k < scores.size(); ++k) {
        if (std::abs(mean_of(scores, k - 9, k + 1) - plateau) <= 0.1 * std::abs(plateau)) {
            return static_cast<int>(k) + 1;
        }
    }
    return static_cast<int>(scores.size());
}

Vector uniform(std::mt19937_64& rng, Eigen::Index n, double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

Vector random_state(std::mt19937_64& rng, const Pendulum& model) {
    std::uniform_real_distribution<double> q(-kPi, kPi);
    std::uniform_real_distribution<double> p(-model.momentum_limit(), model.momentum_limit());
    return pendulum_state(q(rng), p(rng));
}

// Criteria 1 to 4 ----------------------------------------------------------

void learning_criteria(int replicates) {
    const SwingupTask task = SwingupTask::create(PendulumParams{}, 3.0);
    LearnerConfig config;  // defaults: 200 trials of 3 s, seeds 0..n-1
    const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const auto start = Clock::now();
    const ReplicateSummary summary = run_replicates(task, config, replicates, jobs);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("       %d replicates x %d trials trained in %.1f s\n", replicates, config.trials,
                seconds);

    // 1a: cost reduction of the mean curve.
    if (summary.aggregate.mean.size() == 200) {
        const double early = mean_of(summary.aggregate.mean, 0, 10);
        const double late = mean_of(summary.aggregate.mean, 190, 200);
        const double factor = std::abs(early) / std::abs(late);
        report("1a", late > early && factor >= 5.0,
               fmt("mean score trials 1-10 %.1f, trials 191-200 %.1f, cost reduction x%.2f "
                   "(required >= 5)",
                   early, late, factor));
    } else {
        report("1a", false, "no complete replicate curve");
    }

    // 1b: median time to plateau.
    std::vector<int> reach;
    for (const auto& run : summary.runs) {
        if (!run.result.diverged) reach.push_back(plateau_reach(run.result.scores));
    }
    std::sort(reach.begin(), reach.end());
    const int median = reach.empty() ? 999 : reach[reach.size() / 2];
    report("1b", !reach.empty() && median <= 100,
           fmt("median replicate within 10%% of its plateau by trial %d (required <= 100; "
               "fastest %d, slowest %d)",
               median, reach.empty() ? 0 : reach.front(), reach.empty() ? 0 : reach.back()));

    // 2 and 4: evaluation and stability diagnostics per replicate.
    int succeeded = 0, stable = 0, min_radius = 1 << 20, min_sat = 1 << 20;
    for (const auto& run : summary.runs) {
        if (run.result.diverged) continue;
        const EvaluationResult rollout =
            evaluate_policy(task.policy, run.result.params, task.initial_state, 0.01, 3.0);
        if (!(rollout.success && rollout.velocity_reversals >= 1)) continue;
        ++succeeded;
        const StabilityReport stability = local_stability_report(task.policy, run.result.params, 101);
        min_radius = std::min(min_radius, stability.radius);
        min_sat = std::min(min_sat, stability.sat_region_radius);
        if (stability.all_passed() && stability.radius >= 3 && stability.sat_region_radius >= 1) {
            ++stable;
        } else {
            std::printf("       replicate %d (seed %llu): stability radius %d, satDiff radius %d\n",
                        run.index, static_cast<unsigned long long>(run.seed), stability.radius,
                        stability.sat_region_radius);
        }
    }
    const double rate = static_cast<double>(succeeded) / replicates;
    report("2", rate >= 0.8,
           fmt("%d/%d replicates swing up from (pi+0.01, 0) with a velocity reversal (%.0f%%, "
               "required >= 80%%)",
               succeeded, replicates, 100.0 * rate));
    report("3", summary.diverged == 0,
           fmt("%d/%d replicates diverged (required 0)", summary.diverged, replicates));
    report("4", succeeded > 0 && stable == succeeded,
           fmt("%d/%d successful runs pass all four local conditions with radius >= 3 and a "
               "satDiff = 0 neighbourhood (min radius %d, min satDiff radius %d)",
               stable, succeeded, succeeded ? min_radius : 0, succeeded ? min_sat : 0));
}

// Criterion 5 --------------------------------------------------------------

void passivity() {
    const Pendulum model;
    std::mt19937_64 rng(101);
    double worst = -1e300;
    for (int t = 0; t < 50; ++t) {
        Vector x = t == 0 ? pendulum_state(kPi - 0.1, 0.0) : random_state(rng, model);
        double H = model.hamiltonian(x);
        for (int k = 0; k < 200; ++k) {
            x = step(model, x, Vector::Zero(1), 0.03);
            const double next = model.hamiltonian(x);
            worst = std::max(worst, next - H);
            H = next;
        }
    }
    report("5.1", worst <= 1e-8,
           fmt("passivity: largest per-step energy increase %.2e J (required <= 1e-8)", worst));
}

void power_balance() {
    const Pendulum model;
    const Rk4Integrator integrator;
    std::mt19937_64 rng(102);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Transition t{random_state(rng, model), uniform(rng, 1, 3.0), 0.03};
        const Vector end = integrator.integrate(model, t.state, t.input, t.sample_time);
        const double rate = (model.hamiltonian(end) - model.hamiltonian(t.state)) / t.sample_time;
        worst = std::max(worst, std::abs(power_balance_residual(model, t, integrator)) /
                                    std::max(std::abs(rate), 1.0));
    }
    report("5.2", worst < 1e-4,
           fmt("power balance: largest relative residual %.2e over 100 forced steps "
               "(required < 1e-4)",
               worst));
}

void gradient_oracles() {
    const Pendulum model;
    const FourierBasis basis(3, model.state_domain());
    std::mt19937_64 rng(103);
    const double h = 1e-6;

    double basis_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Vector xb = uniform(rng, 2, 0.999);
        const Matrix jac = basis.jacobian_scaled(xb);
        for (int j = 0; j < 2; ++j) {
            Vector up = xb, down = xb;
            up(j) += h;
            down(j) -= h;
            const Vector fd = (basis.evaluate(up) - basis.evaluate(down)) / (2 * h);
            for (int k = 0; k < basis.size(); ++k) {
                const double scale = std::max({std::abs(jac(k, j)), std::abs(fd(k)), 1.0});
                basis_err = std::max(basis_err, std::abs(jac(k, j) - fd(k)) / scale);
            }
        }
    }

    const EnergyBalancingPolicy policy =
        EnergyBalancingPolicy::with_default_bases(std::make_shared<const Pendulum>(), 3.0);
    auto random_params = [&](double xi_scale, double psi_scale) {
        PolicyParams p = policy.zero_params();
        p.xi = uniform(rng, p.xi.size(), xi_scale);
        p.psi.packed() = uniform(rng, p.psi.packed().size(), psi_scale);
        return p;
    };
    double policy_err = 0.0;
    int unsaturated = 0, saturated = 0;
    bool saturated_zero = true;
    while (unsaturated < 100 || saturated < 100) {
        const PolicyParams params = random_params(0.05, 3.0);
        const Vector x = random_state(rng, model);
        const Vector u = policy.control(x, params);
        const PolicyGradient g = policy.gradients(x, params, u);
        if (std::abs(u(0)) > policy.u_max()) {
            if (saturated >= 100) continue;
            ++saturated;
            saturated_zero = saturated_zero && g.xi.isZero(0.0) && g.psi.isZero(0.0);
            continue;
        }
        if (unsaturated >= 100 || std::abs(u(0)) > 0.95 * policy.u_max()) continue;
        ++unsaturated;
        auto out = [&](const PolicyParams& p) { return policy.saturate(policy.control(x, p))(0); };
        const double scale = std::max({g.xi.cwiseAbs().maxCoeff(), g.psi.cwiseAbs().maxCoeff(), 1e-300});
        for (Eigen::Index k = 0; k < params.xi.size(); ++k) {
            PolicyParams up = params, down = params;
            up.xi(k) += h;
            down.xi(k) -= h;
            policy_err = std::max(policy_err, std::abs(g.xi(0, k) - (out(up) - out(down)) / (2 * h)) / scale);
        }
        for (Eigen::Index k = 0; k < params.psi.packed().size(); ++k) {
            PolicyParams up = params, down = params;
            up.psi.packed()(k) += h;
            down.psi.packed()(k) -= h;
            policy_err = std::max(policy_err, std::abs(g.psi(0, k) - (out(up) - out(down)) / (2 * h)) / scale);
        }
    }
    report("5.3", basis_err <= 1e-6 && policy_err <= 1e-6 && saturated_zero,
           fmt("gradient oracles: basis Jacobian rel. error %.1e, policy gradient rel. error "
               "%.1e at 100 unsaturated points (required <= 1e-6), exactly zero at 100 "
               "saturated points: %s",
               basis_err, policy_err, saturated_zero ? "yes" : "no"));
}

void energy_balancing() {
    const auto model = std::make_shared<const Pendulum>();
    const EnergyBalancingPolicy policy = EnergyBalancingPolicy::with_default_bases(model, 3.0);
    std::mt19937_64 rng(104);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const Vector xi = uniform(rng, 4, 0.01);
        Vector x = random_state(rng, *model) * 0.5;
        const Rk4Integrator fine{1};
        for (int k = 0; k < 3000; ++k) {
            const Vector u = policy.energy_shaping_control(x, xi);
            const Vector grad =
                policy.desired_hamiltonian_gradient(x, xi) - model->hamiltonian_gradient(x);
            const double rate = grad.dot(model->dynamics(x, u));
            worst = std::max(worst, std::abs(rate + u.dot(model->output(x))));
            x = fine.integrate(*model, x, u, 1e-4);
        }
    }
    report("5.4", worst < 1e-6,
           fmt("energy balancing with Psi = 0, unsaturated: largest |d/dt(Hd - H) + u_es^T y| "
               "%.2e W (required < 1e-6)",
               worst));
}

void structural() {
    const auto model = std::make_shared<const Pendulum>();
    const EnergyBalancingPolicy policy = EnergyBalancingPolicy::with_default_bases(model, 3.0);
    std::mt19937_64 rng(105);

    // Psi symmetry after 10^4 updates on a three-input layout.
    DampingParameters psi(3, 16);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int k = 0; k < 10000; ++k) {
        const int i = static_cast<int>(rng() % 3), j = static_cast<int>(rng() % 3);
        const int l = static_cast<int>(rng() % 16);
        psi(i, j, l) += n(rng);
    }
    bool symmetric = true;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l < 16; ++l) symmetric = symmetric && psi(i, j, l) == psi(j, i, l);
        }
    }
    const Matrix K = psi.gain(uniform(rng, 16, 1.0));
    symmetric = symmetric && (K - K.transpose()).norm() == 0.0;
    // Pendulum actor updates keep the packed layout consistent.
    PolicyParams params = policy.zero_params();
    for (int k = 0; k < 10000; ++k) {
        const Vector x = random_state(rng, *model);
        const Vector u = policy.control(x, params);
        actor_update(params, n(rng), Vector::Constant(1, n(rng)), policy.gradients(x, params, u),
                     Vector::Constant(4, 1e-6), Vector::Constant(16, 1e-3));
    }
    symmetric = symmetric && params.all_finite();

    double odd = 0.0, omega = 0.0, goal = 0.0;
    for (int t = 0; t < 100; ++t) {
        PolicyParams p = policy.zero_params();
        p.xi = uniform(rng, 4, 0.05);
        p.psi.packed() = uniform(rng, 16, 3.0);
        const Vector x = random_state(rng, *model);
        const double a = policy.control(x, p)(0), b = policy.control(-x, p)(0);
        odd = std::max(odd, std::abs(a + b) / std::max(1.0, std::abs(a)));
        for (double q : {-kPi, 0.0, kPi}) {
            omega = std::max(omega, std::abs(policy.control(pendulum_state(q, 0.0), p)(0)));
        }
        goal = std::max(goal, policy.desired_hamiltonian_gradient(pendulum_state(0.0, 0.0), p.xi)
                                  .cwiseAbs()
                                  .maxCoeff());
    }

    CriticState traced(16);
    Vector plain = Vector::Zero(16);
    bool td0 = true;
    for (int k = 0; k < 1000; ++k) {
        const Vector phi = uniform(rng, 16, 1.0);
        const double delta = n(rng);
        critic_update(traced, delta, phi, 0.97, 0.0, 0.05);
        plain += 0.05 * delta * phi;
        td0 = td0 && traced.theta == plain;
    }

    report("5.5", symmetric && odd <= 1e-12 && omega <= 1e-13 && goal == 0.0 && td0,
           fmt("structural: Psi symmetric %s, odd-symmetry error %.1e, |u| on Omega %.1e, "
               "max |grad Hd(x*)| %.1e over 100 xi, lambda = 0 equals TD(0) %s",
               symmetric ? "yes" : "no", odd, omega, goal, td0 ? "yes" : "no"));
}

void determinism() {
    const SwingupTask task = SwingupTask::create(PendulumParams{}, 3.0);
    LearnerConfig config;
    config.seed = 2024;
    const TrainingResult a = train_swingup(task, config);
    const TrainingResult b = train_swingup(task, config);
    const std::string ja =
        parameters_to_json(task.policy, a.params, a.critic_theta, task.critic_basis).dump(2);
    const std::string jb =
        parameters_to_json(task.policy, b.params, b.critic_theta, task.critic_basis).dump(2);
    report("5.6", ja == jb && a.scores == b.scores,
           fmt("determinism: identical seeds give byte-identical parameter files (%zu bytes): %s",
               ja.size(), ja == jb ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
    int replicates = 50;
    if (argc > 1) replicates = std::atoi(argv[1]);
    if (replicates < 20) {
        std::fprintf(stderr, "at least 20 replicates are required\n");
        return 2;
    }
    std::printf("ebac %s acceptance suite\n", version());

    learning_criteria(replicates);

    const auto start = Clock::now();
    passivity();
    power_balance();
    gradient_oracles();
    energy_balancing();
    structural();
    determinism();
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report("5.7", seconds < 30.0, fmt("property suites finished in %.1f s (required < 30 s)", seconds));

    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}

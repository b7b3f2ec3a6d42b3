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

#ifndef EBAC_ACTOR_CRITIC_HPP
#define EBAC_ACTOR_CRITIC_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ebac/fourier_basis.hpp"
#include "ebac/policy.hpp"

namespace ebac {

using Rng = std::mt19937_64;

/// Learner settings. Defaults reproduce the simulated swing-up study.
struct LearnerConfig {
    double gamma = 0.97;             // discount
    double lambda = 0.65;            // trace decay
    double critic_rate = 0.05;
    double actor_rate_xi = 1e-10;    // base rate, potential actor
    double actor_rate_psi = 0.2;     // base rate, damping actor
    double exploration_std = 1.0;    // sigma [V]; 0 disables exploration
    double u_max = 3.0;              // [V]
    double sample_time = 0.03;       // [s]
    double trial_duration = 3.0;     // [s]
    int trials = 200;
    std::uint64_t seed = 0;
    int substeps = 20;               // RK4 substeps per sample
    double divergence_bound = 1e9;   // max |parameter| before a run is declared diverged

    /// ceil(trial_duration / sample_time), robust to 3.0/0.03 = 100.00000000000001.
    int steps_per_trial() const;
    void validate() const;
};

struct CriticState {
    Vector theta;
    Vector trace;

    explicit CriticState(int features = 0)
        : theta(Vector::Zero(features)), trace(Vector::Zero(features)) {}

    void reset_trace() { trace.setZero(); }
};

inline double value(const Vector& theta, const Vector& features) { return theta.dot(features); }

inline double td_error(double reward, double value_next, double value_current, double gamma) {
    return reward + gamma * value_next - value_current;
}

/// e <- gamma*lambda*e + phi(x_k);  theta <- theta + rate*delta*e.
void critic_update(CriticState& critic, double delta, const Vector& features, double gamma,
                   double lambda, double rate);

struct Exploration {
    Vector applied;   // u_k = sat(u_hat + du), sent to the plant
    Vector adjusted;  // u_k - u_hat, the exploration the actors see
};

/// Exploration with a given perturbation du.
Exploration apply_exploration(const Vector& u_hat, const Vector& noise, double u_max);

/// Draws du ~ N(0, noise_std^2) per input; noise_std == 0 draws nothing.
Exploration explore(const Vector& u_hat, double noise_std, double u_max, Rng& rng);

/**
 * Actor step for both parameter sets:
 *   xi  <- xi  + rate_xi  .* (delta * grad_xi^T  adjusted)
 *   Psi <- Psi + rate_psi .* (delta * grad_psi^T adjusted)
 * psi_rates has one entry per damping feature and is reused for every (i, j) pair.
 */
void actor_update(PolicyParams& params, double delta, const Vector& adjusted,
                  const PolicyGradient& gradient, const Vector& xi_rates, const Vector& psi_rates);

using RewardFunction = std::function<double(const Vector& next_state, const Vector& input)>;

struct TrialResult {
    std::vector<Vector> states;   // x_0 .. x_K
    std::vector<Vector> inputs;   // u_0 .. u_{K-1}
    std::vector<double> rewards;  // r_1 .. r_K
    double score = 0.0;           // undiscounted reward sum
    bool diverged = false;
    std::string divergence_reason;
};

/**
 * @brief Energy-balancing actor-critic learner
 *
 * Each sample: explore around the policy, integrate one period, evaluate the
 * reward, form the TD error with the pre-update critic, update trace and
 * critic, then both actors with gradients taken at (x_k, xi_k, Psi_k).
 */
class ActorCriticLearner {
public:
    ActorCriticLearner(EnergyBalancingPolicy policy, FourierBasis critic_basis, RewardFunction reward,
                       LearnerConfig config);

    /// One fixed-length trial from x0. The eligibility trace is cleared first.
    TrialResult run_trial(const Vector& x0);

    const EnergyBalancingPolicy& policy() const { return policy_; }
    const FourierBasis& critic_basis() const { return critic_basis_; }
    const LearnerConfig& config() const { return config_; }

    const PolicyParams& params() const { return params_; }
    PolicyParams& params() { return params_; }
    const CriticState& critic() const { return critic_; }
    CriticState& critic() { return critic_; }
    Rng& rng() { return rng_; }

    const Vector& xi_rates() const { return xi_rates_; }
    const Vector& psi_rates() const { return psi_rates_; }
    const ScalingDiagnostics& diagnostics() const { return diagnostics_; }

private:
    bool parameters_within_bound() const;

    EnergyBalancingPolicy policy_;
    FourierBasis critic_basis_;
    RewardFunction reward_;
    LearnerConfig config_;
    Rk4Integrator integrator_;
    Rng rng_;

    PolicyParams params_;
    CriticState critic_;
    Vector xi_rates_;
    Vector psi_rates_;
    ScalingDiagnostics diagnostics_;
};

struct TrainingResult {
    std::vector<double> scores;  // one per completed trial
    PolicyParams params;
    Vector critic_theta;
    bool diverged = false;
    int diverged_trial = -1;
    std::string divergence_reason;
    std::size_t clamped_states = 0;
};

/// Zero-initialized run of config.trials trials, each starting at x0.
/// A diverged trial stops the run and is reported, not thrown.
TrainingResult train(const EnergyBalancingPolicy& policy, const FourierBasis& critic_basis,
                     const RewardFunction& reward, const LearnerConfig& config, const Vector& x0);

}  // namespace ebac

#endif  // EBAC_ACTOR_CRITIC_HPP

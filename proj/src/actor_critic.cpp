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

#include "ebac/actor_critic.hpp"

#include <cmath>
#include <utility>

namespace ebac {

int LearnerConfig::steps_per_trial() const {
    const double ratio = trial_duration / sample_time;
    return static_cast<int>(std::ceil(ratio - 1e-9));
}

void LearnerConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
    require(lambda >= 0.0 && lambda < 1.0, "lambda must lie in [0, 1)");
    require(critic_rate > 0.0, "critic_rate must be positive");
    require(actor_rate_xi > 0.0, "actor_rate_xi must be positive");
    require(actor_rate_psi > 0.0, "actor_rate_psi must be positive");
    require(exploration_std >= 0.0 && std::isfinite(exploration_std),
            "exploration_std must be non-negative");
    require(u_max > 0.0, "u_max must be positive");
    require(sample_time > 0.0, "sample_time must be positive");
    require(trial_duration >= sample_time, "trial_duration must cover at least one sample");
    require(trials >= 1, "trials must be at least 1");
    require(substeps >= 1, "substeps must be at least 1");
    require(divergence_bound > 0.0, "divergence_bound must be positive");
}

void critic_update(CriticState& critic, double delta, const Vector& features, double gamma,
                   double lambda, double rate) {
    critic.trace = gamma * lambda * critic.trace + features;
    critic.theta += rate * delta * critic.trace;
}

Exploration apply_exploration(const Vector& u_hat, const Vector& noise, double u_max) {
    Exploration out;
    out.applied = saturate(u_hat + noise, u_max);
    out.adjusted = out.applied - u_hat;
    return out;
}

Exploration explore(const Vector& u_hat, double noise_std, double u_max, Rng& rng) {
    Vector noise = Vector::Zero(u_hat.size());
    if (noise_std > 0.0) {
        std::normal_distribution<double> normal(0.0, noise_std);
        for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = normal(rng);
    }
    return apply_exploration(u_hat, noise, u_max);
}

void actor_update(PolicyParams& params, double delta, const Vector& adjusted,
                  const PolicyGradient& gradient, const Vector& xi_rates, const Vector& psi_rates) {
    params.xi += (delta * (gradient.xi.transpose() * adjusted)).cwiseProduct(xi_rates);

    const Vector step = delta * (gradient.psi.transpose() * adjusted);
    const int f = params.psi.features();
    Vector& packed = params.psi.packed();
    for (int pair = 0; pair < params.psi.pair_count(); ++pair) {
        packed.segment(pair * f, f) += step.segment(pair * f, f).cwiseProduct(psi_rates);
    }
}

ActorCriticLearner::ActorCriticLearner(EnergyBalancingPolicy policy, FourierBasis critic_basis,
                                       RewardFunction reward, LearnerConfig config)
    : policy_(std::move(policy)),
      critic_basis_(std::move(critic_basis)),
      reward_(std::move(reward)),
      config_(config),
      integrator_{config.substeps},
      rng_(config.seed),
      params_(policy_.zero_params()),
      critic_(critic_basis_.size()),
      xi_rates_(scaled_learning_rates(config.actor_rate_xi, policy_.potential_basis())),
      psi_rates_(scaled_learning_rates(config.actor_rate_psi, policy_.damping_basis())) {
    config_.validate();
    if (!reward_) throw std::invalid_argument("learner needs a reward function");
    if (critic_basis_.dims() != policy_.system().state_dim()) {
        throw std::invalid_argument("critic basis must span the full state");
    }
}

bool ActorCriticLearner::parameters_within_bound() const {
    const double bound = config_.divergence_bound;
    return critic_.theta.cwiseAbs().maxCoeff() <= bound &&
           params_.xi.cwiseAbs().maxCoeff() <= bound &&
           params_.psi.packed().cwiseAbs().maxCoeff() <= bound;
}

TrialResult ActorCriticLearner::run_trial(const Vector& x0) {
    const MechanicalSystem& system = policy_.system();
    const int steps = config_.steps_per_trial();

    TrialResult trial;
    trial.states.reserve(static_cast<std::size_t>(steps) + 1);
    trial.inputs.reserve(static_cast<std::size_t>(steps));
    trial.rewards.reserve(static_cast<std::size_t>(steps));

    critic_.reset_trace();
    Vector x = system.project(x0);
    trial.states.push_back(x);
    Vector phi = critic_basis_.features(x, &diagnostics_);

    for (int k = 0; k < steps; ++k) {
        // Execute
        const Vector u_hat = policy_.control(x, params_);
        const Exploration action = explore(u_hat, config_.exploration_std, config_.u_max, rng_);
        Vector x_next;
        try {
            x_next = integrator_.step(system, x, action.applied, config_.sample_time);
        } catch (const NonFiniteStateError& e) {
            trial.diverged = true;
            trial.divergence_reason = e.what();
            return trial;
        }
        const double r = reward_(x_next, action.applied);

        // Critic
        const Vector phi_next = critic_basis_.features(x_next, &diagnostics_);
        const double delta = td_error(r, value(critic_.theta, phi_next), value(critic_.theta, phi),
                                      config_.gamma);
        critic_update(critic_, delta, phi, config_.gamma, config_.lambda, config_.critic_rate);

        // Actors, both with gradients at the pre-update parameters
        const PolicyGradient grad = policy_.gradients(x, params_, u_hat);
        actor_update(params_, delta, action.adjusted, grad, xi_rates_, psi_rates_);

        trial.inputs.push_back(action.applied);
        trial.rewards.push_back(r);
        trial.states.push_back(x_next);
        trial.score += r;

        if (!std::isfinite(delta) || !std::isfinite(r) || !params_.all_finite() ||
            !critic_.theta.allFinite() || !parameters_within_bound()) {
            trial.diverged = true;
            trial.divergence_reason = "parameter blow-up at step " + std::to_string(k);
            return trial;
        }
        x = std::move(x_next);
        phi = phi_next;
    }
    return trial;
}

TrainingResult train(const EnergyBalancingPolicy& policy, const FourierBasis& critic_basis,
                     const RewardFunction& reward, const LearnerConfig& config, const Vector& x0) {
    ActorCriticLearner learner(policy, critic_basis, reward, config);
    TrainingResult result;
    result.scores.reserve(static_cast<std::size_t>(config.trials));
    for (int trial = 0; trial < config.trials; ++trial) {
        TrialResult outcome = learner.run_trial(x0);
        if (outcome.diverged) {
            result.diverged = true;
            result.diverged_trial = trial;
            result.divergence_reason = outcome.divergence_reason;
            break;
        }
        result.scores.push_back(outcome.score);
    }
    result.params = learner.params();
    result.critic_theta = learner.critic().theta;
    result.clamped_states = learner.diagnostics().clamped;
    return result;
}

}  // namespace ebac

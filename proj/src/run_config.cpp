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

#include "ebac/run_config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <thread>

namespace ebac {

namespace {

using Setter = std::function<void(RunConfig&, const nlohmann::json&)>;

template <typename T>
Setter field(T RunConfig::*member) {
    return [member](RunConfig& c, const nlohmann::json& v) { c.*member = v.get<T>(); };
}

template <typename T>
Setter pendulum_field(T PendulumParams::*member) {
    return [member](RunConfig& c, const nlohmann::json& v) { c.pendulum.*member = v.get<T>(); };
}

template <typename T>
Setter learner_field(T LearnerConfig::*member) {
    return [member](RunConfig& c, const nlohmann::json& v) { c.learner.*member = v.get<T>(); };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"inertia", pendulum_field(&PendulumParams::inertia)},
        {"mass", pendulum_field(&PendulumParams::mass)},
        {"gravity", pendulum_field(&PendulumParams::gravity)},
        {"length", pendulum_field(&PendulumParams::length)},
        {"viscous_friction", pendulum_field(&PendulumParams::viscous_friction)},
        {"coulomb_friction", pendulum_field(&PendulumParams::coulomb_friction)},
        {"torque_constant", pendulum_field(&PendulumParams::torque_constant)},
        {"rotor_resistance", pendulum_field(&PendulumParams::rotor_resistance)},
        {"coulomb_epsilon", pendulum_field(&PendulumParams::coulomb_epsilon)},
        {"gamma", learner_field(&LearnerConfig::gamma)},
        {"lambda", learner_field(&LearnerConfig::lambda)},
        {"critic_rate", learner_field(&LearnerConfig::critic_rate)},
        {"actor_rate_xi", learner_field(&LearnerConfig::actor_rate_xi)},
        {"actor_rate_psi", learner_field(&LearnerConfig::actor_rate_psi)},
        {"exploration_std", learner_field(&LearnerConfig::exploration_std)},
        {"u_max", learner_field(&LearnerConfig::u_max)},
        {"sample_time", learner_field(&LearnerConfig::sample_time)},
        {"trial_duration", learner_field(&LearnerConfig::trial_duration)},
        {"trials", learner_field(&LearnerConfig::trials)},
        {"seed", learner_field(&LearnerConfig::seed)},
        {"substeps", learner_field(&LearnerConfig::substeps)},
        {"divergence_bound", learner_field(&LearnerConfig::divergence_bound)},
        {"replicates", field(&RunConfig::replicates)},
        {"resolution", field(&RunConfig::resolution)},
        {"output_dir", field(&RunConfig::output_dir)},
        {"epsilon", field(&RunConfig::epsilon)},
        {"eval_duration", field(&RunConfig::eval_duration)},
        {"jobs", field(&RunConfig::jobs)},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    try {
        pendulum.validate();
        learner.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (replicates < 1) throw ConfigError("replicates must be at least 1");
    if (resolution < 3 || resolution % 2 == 0) {
        throw ConfigError("resolution must be odd and at least 3 so the goal state is a grid node");
    }
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    if (!std::isfinite(epsilon)) throw ConfigError("epsilon must be finite");
    if (!(eval_duration > 0.0)) throw ConfigError("eval_duration must be positive");
    if (jobs < 0) throw ConfigError("jobs must be non-negative");
}

int RunConfig::effective_jobs() const {
    if (jobs > 0) return jobs;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RunConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig config;
    for (const auto& [key, value] : doc.items()) {
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
        try {
            it->second(config, value);
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
    }
    config.validate();
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

nlohmann::json config_to_json(const RunConfig& c) {
    return {
        {"inertia", c.pendulum.inertia},
        {"mass", c.pendulum.mass},
        {"gravity", c.pendulum.gravity},
        {"length", c.pendulum.length},
        {"viscous_friction", c.pendulum.viscous_friction},
        {"coulomb_friction", c.pendulum.coulomb_friction},
        {"torque_constant", c.pendulum.torque_constant},
        {"rotor_resistance", c.pendulum.rotor_resistance},
        {"coulomb_epsilon", c.pendulum.coulomb_epsilon},
        {"gamma", c.learner.gamma},
        {"lambda", c.learner.lambda},
        {"critic_rate", c.learner.critic_rate},
        {"actor_rate_xi", c.learner.actor_rate_xi},
        {"actor_rate_psi", c.learner.actor_rate_psi},
        {"exploration_std", c.learner.exploration_std},
        {"u_max", c.learner.u_max},
        {"sample_time", c.learner.sample_time},
        {"trial_duration", c.learner.trial_duration},
        {"trials", c.learner.trials},
        {"seed", c.learner.seed},
        {"substeps", c.learner.substeps},
        {"divergence_bound", c.learner.divergence_bound},
        {"replicates", c.replicates},
        {"resolution", c.resolution},
        {"output_dir", c.output_dir},
        {"epsilon", c.epsilon},
        {"eval_duration", c.eval_duration},
        {"jobs", c.jobs},
    };
}

}  // namespace ebac

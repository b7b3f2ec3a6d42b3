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

#ifndef EBAC_RUN_CONFIG_HPP
#define EBAC_RUN_CONFIG_HPP

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ebac/actor_critic.hpp"
#include "ebac/pendulum.hpp"

namespace ebac {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Effective settings of a CLI run. A config file is a flat JSON object whose
 * keys are exactly the field names below (pendulum and learner fields are
 * flattened to the top level); missing keys keep their defaults and unknown
 * keys are rejected.
 */
struct RunConfig {
    PendulumParams pendulum;
    LearnerConfig learner;
    int replicates = 50;
    int resolution = 101;
    std::string output_dir = "ebac_out";
    double epsilon = 0.01;        // initial angle perturbation for evaluation [rad]
    double eval_duration = 3.0;   // [s]
    int jobs = 0;                 // replicate threads; 0 = hardware concurrency

    void validate() const;
    int effective_jobs() const;
};

RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace ebac

#endif  // EBAC_RUN_CONFIG_HPP

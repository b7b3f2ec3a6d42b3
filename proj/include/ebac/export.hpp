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


#ifndef EBAC_EXPORT_HPP
#define EBAC_EXPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ebac/experiments.hpp"
#include "ebac/run_config.hpp"

namespace ebac {

/// Version string recorded in every metadata file.
const char* version();

/// Learned parameters plus the basis layout needed to reuse them.
struct ParameterFile {
    PolicyParams params;
    Vector critic_theta;
};

nlohmann::json basis_description(const FourierBasis& basis);

nlohmann::json parameters_to_json(const EnergyBalancingPolicy& policy, const PolicyParams& params,
                                  const Vector& critic_theta, const FourierBasis& critic_basis);
/// Throws ConfigError when the layout does not match the policy.
ParameterFile parameters_from_json(const nlohmann::json& doc, const EnergyBalancingPolicy& policy);

void write_parameters(const std::string& path, const EnergyBalancingPolicy& policy,
                      const PolicyParams& params, const Vector& critic_theta,
                      const FourierBasis& critic_basis);
ParameterFile read_parameters(const std::string& path, const EnergyBalancingPolicy& policy);

/// {"command", "version", "seed", "config", "files", ...extra}.
void write_metadata(const std::string& path, const std::string& command, const RunConfig& config,
                    const std::vector<std::string>& files, const nlohmann::json& extra = {});

// CSV writers. Header row first, doubles with 17 significant digits.
void write_curve_csv(const std::string& path, const std::vector<double>& scores);
void write_aggregate_csv(const std::string& path, const CurveAggregate& aggregate);
void write_replicates_csv(const std::string& path, const ReplicateSummary& summary);
void write_trajectory_csv(const std::string& path, const EvaluationResult& rollout);
/// Long format: q_rad, p, value.
void write_grid_csv(const std::string& path, const GridField& field);

nlohmann::json stability_report_json(const StabilityReport& report);

}  // namespace ebac

#endif  // EBAC_EXPORT_HPP

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


#include "ebac/export.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace ebac {

namespace {

std::ofstream open_output(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::out | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    return out;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_vector(const nlohmann::json& doc, const char* key, Eigen::Index expected) {
    if (!doc.contains(key) || !doc.at(key).is_array()) {
        throw ConfigError(std::string("parameter file lacks array '") + key + "'");
    }
    const auto values = doc.at(key).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(values.size()) != expected) {
        throw ConfigError(std::string("parameter array '") + key + "' has " +
                          std::to_string(values.size()) + " entries, expected " +
                          std::to_string(expected));
    }
    return Eigen::Map<const Vector>(values.data(), expected);
}

}  // namespace

const char* version() { return EBAC_VERSION; }

nlohmann::json basis_description(const FourierBasis& basis) {
    nlohmann::json domain = nlohmann::json::array();
    for (const auto& iv : basis.domain()) {
        domain.push_back({{"lower", iv.lower}, {"upper", iv.upper}, {"periodic", iv.periodic}});
    }
    return {{"order", basis.order()},
            {"features", basis.size()},
            {"domain", domain},
            {"ordering", "odometer, first state dimension fastest"}};
}

nlohmann::json parameters_to_json(const EnergyBalancingPolicy& policy, const PolicyParams& params,
                                  const Vector& critic_theta, const FourierBasis& critic_basis) {
    policy.check(params);
    return {{"version", version()},
            {"inputs", params.psi.inputs()},
            {"u_max", policy.u_max()},
            {"potential_basis", basis_description(policy.potential_basis())},
            {"damping_basis", basis_description(policy.damping_basis())},
            {"critic_basis", basis_description(critic_basis)},
            {"psi_layout", "packed upper triangle (i <= j), pair-major, features fastest"},
            {"xi", to_std(params.xi)},
            {"psi", to_std(params.psi.packed())},
            {"critic_theta", to_std(critic_theta)}};
}

ParameterFile parameters_from_json(const nlohmann::json& doc, const EnergyBalancingPolicy& policy) {
    if (!doc.is_object()) throw ConfigError("parameter file must be a JSON object");
    ParameterFile file;
    file.params = policy.zero_params();
    try {
        file.params.xi = to_vector(doc, "xi", file.params.xi.size());
        file.params.psi.packed() = to_vector(doc, "psi", file.params.psi.packed().size());
        if (doc.contains("critic_theta")) {
            const auto theta = doc.at("critic_theta").get<std::vector<double>>();
            file.critic_theta = Eigen::Map<const Vector>(theta.data(),
                                                         static_cast<Eigen::Index>(theta.size()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed parameter file: ") + e.what());
    }
    if (!file.params.all_finite()) throw ConfigError("parameter file contains non-finite values");
    return file;
}

void write_parameters(const std::string& path, const EnergyBalancingPolicy& policy,
                      const PolicyParams& params, const Vector& critic_theta,
                      const FourierBasis& critic_basis) {
    write_json(path, parameters_to_json(policy, params, critic_theta, critic_basis));
}

ParameterFile read_parameters(const std::string& path, const EnergyBalancingPolicy& policy) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read parameter file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("parameter file '" + path + "' is not valid JSON: " + e.what());
    }
    return parameters_from_json(doc, policy);
}

void write_metadata(const std::string& path, const std::string& command, const RunConfig& config,
                    const std::vector<std::string>& files, const nlohmann::json& extra) {
    nlohmann::json doc = {{"command", command},
                          {"version", version()},
                          {"seed", config.learner.seed},
                          {"config", config_to_json(config)},
                          {"files", files}};
    if (extra.is_object()) {
        for (const auto& [key, value] : extra.items()) doc[key] = value;
    }
    write_json(path, doc);
}

void write_curve_csv(const std::string& path, const std::vector<double>& scores) {
    auto out = open_output(path);
    out << "trial,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i) out << i + 1 << ',' << scores[i] << '\n';
}

void write_aggregate_csv(const std::string& path, const CurveAggregate& a) {
    auto out = open_output(path);
    out << "trial,mean,std,min,max\n";
    for (std::size_t i = 0; i < a.mean.size(); ++i) {
        out << i + 1 << ',' << a.mean[i] << ',' << a.stddev[i] << ',' << a.min[i] << ','
            << a.max[i] << '\n';
    }
}

void write_replicates_csv(const std::string& path, const ReplicateSummary& summary) {
    auto out = open_output(path);
    out << "replicate,seed,trial,score,diverged\n";
    for (const auto& run : summary.runs) {
        const auto& scores = run.result.scores;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            out << run.index << ',' << run.seed << ',' << i + 1 << ',' << scores[i] << ','
                << (run.result.diverged ? 1 : 0) << '\n';
        }
    }
}

void write_trajectory_csv(const std::string& path, const EvaluationResult& r) {
    auto out = open_output(path);
    out << "t_s,q_rad,p_kgm2_per_s,qdot_rad_per_s,u_V\n";
    for (std::size_t k = 0; k < r.states.size(); ++k) {
        const double u = k < r.inputs.size() ? r.inputs[k] : 0.0;
        out << r.time[k] << ',' << r.states[k](0) << ',' << r.states[k](1) << ','
            << r.velocity[k] << ',' << u << '\n';
    }
}

void write_grid_csv(const std::string& path, const GridField& field) {
    auto out = open_output(path);
    out << "q_rad,p_kgm2_per_s," << field_name(field.kind) << '\n';
    for (std::size_t iq = 0; iq < field.q.size(); ++iq) {
        for (std::size_t ip = 0; ip < field.p.size(); ++ip) {
            out << field.q[iq] << ',' << field.p[ip] << ',' << field.at(iq, ip) << '\n';
        }
    }
}

nlohmann::json stability_report_json(const StabilityReport& report) {
    nlohmann::json conditions = nlohmann::json::array();
    for (const auto& c : report.conditions) {
        conditions.push_back({{"name", c.name}, {"passed", c.passed}, {"radius", c.radius}});
    }
    return {{"conditions", conditions},
            {"radius", report.radius},
            {"pd_slope", report.pd_slope},
            {"pd_curvature", report.pd_curvature},
            {"hd_dot_at_goal", report.hd_dot_at_goal},
            {"sat_region_radius", report.sat_region_radius},
            {"all_passed", report.all_passed()}};
}

}  // namespace ebac

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


#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ebac/commands.hpp"
#include "ebac/experiments.hpp"
#include "ebac/export.hpp"

namespace py = pybind11;
using namespace ebac;

namespace {

Box to_box(const std::vector<std::tuple<double, double, bool>>& intervals) {
    Box box;
    for (const auto& [lower, upper, periodic] : intervals) box.push_back({lower, upper, periodic});
    return box;
}

Matrix stack(const std::vector<Vector>& rows) {
    if (rows.empty()) return Matrix(0, 0);
    Matrix out(static_cast<Eigen::Index>(rows.size()), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i];
    return out;
}

/// Field values as a (len(q), len(p)) array.
Matrix field_matrix(const GridField& f) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        f.values.data(), static_cast<Eigen::Index>(f.q.size()), static_cast<Eigen::Index>(f.p.size()));
}

py::dict report_dict(const StabilityReport& r) {
    py::dict conditions;
    for (const auto& c : r.conditions) {
        conditions[py::str(c.name)] = py::dict(py::arg("passed") = c.passed, py::arg("radius") = c.radius);
    }
    return py::dict(py::arg("conditions") = conditions, py::arg("radius") = r.radius,
                    py::arg("pd_slope") = r.pd_slope, py::arg("pd_curvature") = r.pd_curvature,
                    py::arg("hd_dot_at_goal") = r.hd_dot_at_goal,
                    py::arg("sat_region_radius") = r.sat_region_radius,
                    py::arg("all_passed") = r.all_passed());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Energy-balancing actor-critic core";
    m.attr("__version__") = version();

    py::register_exception<NonFiniteStateError>(m, "NonFiniteStateError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<PendulumParams>(m, "PendulumParams")
        .def(py::init<>())
        .def_readwrite("inertia", &PendulumParams::inertia)
        .def_readwrite("mass", &PendulumParams::mass)
        .def_readwrite("gravity", &PendulumParams::gravity)
        .def_readwrite("length", &PendulumParams::length)
        .def_readwrite("viscous_friction", &PendulumParams::viscous_friction)
        .def_readwrite("coulomb_friction", &PendulumParams::coulomb_friction)
        .def_readwrite("torque_constant", &PendulumParams::torque_constant)
        .def_readwrite("rotor_resistance", &PendulumParams::rotor_resistance)
        .def_readwrite("coulomb_epsilon", &PendulumParams::coulomb_epsilon)
        .def("validate", &PendulumParams::validate);

    py::class_<Pendulum, std::shared_ptr<Pendulum>>(m, "Pendulum")
        .def(py::init<PendulumParams>(), py::arg("params") = PendulumParams{})
        .def_property_readonly("params", &Pendulum::params)
        .def("hamiltonian", &Pendulum::hamiltonian, py::arg("x"))
        .def("hamiltonian_gradient", &Pendulum::hamiltonian_gradient, py::arg("x"))
        .def("dynamics", &Pendulum::dynamics, py::arg("x"), py::arg("u"))
        .def("output", &Pendulum::output, py::arg("x"))
        .def("interconnection", &Pendulum::interconnection, py::arg("x"))
        .def("dissipation", &Pendulum::dissipation, py::arg("x"))
        .def("input_map", &Pendulum::input_map, py::arg("x"))
        .def("damping", &Pendulum::damping, py::arg("qdot"))
        .def_property_readonly("momentum_limit", &Pendulum::momentum_limit)
        .def(
            "step",
            [](const Pendulum& model, const Vector& x, const Vector& u, double sample_time,
               int substeps) { return step(model, x, u, sample_time, Rk4Integrator{substeps}); },
            py::arg("x"), py::arg("u"), py::arg("sample_time") = 0.03, py::arg("substeps") = 20)
        .def(
            "power_balance_residual",
            [](const Pendulum& model, const Vector& x, const Vector& u, double sample_time) {
                return power_balance_residual(model, Transition{x, u, sample_time});
            },
            py::arg("x"), py::arg("u"), py::arg("sample_time") = 0.03);

    m.def("wrap_angle", &wrap_angle, py::arg("angle"));
    m.def("saturate", &saturate, py::arg("u"), py::arg("u_max"));

    py::class_<FourierBasis>(m, "FourierBasis")
        .def(py::init([](int order, const std::vector<std::tuple<double, double, bool>>& domain) {
                 return FourierBasis(order, to_box(domain));
             }),
             py::arg("order"), py::arg("domain"),
             "domain: list of (lower, upper, periodic) per state dimension")
        .def_property_readonly("order", &FourierBasis::order)
        .def_property_readonly("size", &FourierBasis::size)
        .def_property_readonly("frequencies", [](const FourierBasis& b) { return b.frequencies(); })
        .def("scale", [](const FourierBasis& b, const Vector& x) { return b.scale(x); }, py::arg("x"))
        .def("evaluate", &FourierBasis::evaluate, py::arg("xbar"))
        .def("features", [](const FourierBasis& b, const Vector& x) { return b.features(x); },
             py::arg("x"))
        .def("jacobian_scaled", &FourierBasis::jacobian_scaled, py::arg("xbar"))
        .def("jacobian", &FourierBasis::jacobian, py::arg("xbar"));
    m.def("scaled_learning_rates", &scaled_learning_rates, py::arg("base_rate"), py::arg("basis"));

    py::class_<PolicyParams>(m, "PolicyParams")
        .def_readwrite("xi", &PolicyParams::xi)
        .def_property(
            "psi", [](const PolicyParams& p) { return p.psi.packed(); },
            [](PolicyParams& p, const Vector& v) {
                if (v.size() != p.psi.packed().size()) throw py::value_error("psi has the wrong length");
                p.psi.packed() = v;
            },
            "Packed damping parameters (upper triangle, pair-major)");

    py::class_<EnergyBalancingPolicy>(m, "EnergyBalancingPolicy")
        .def_property_readonly("u_max", &EnergyBalancingPolicy::u_max)
        .def("zero_params", &EnergyBalancingPolicy::zero_params)
        .def("control", &EnergyBalancingPolicy::control, py::arg("x"), py::arg("params"))
        .def("saturated_control",
             [](const EnergyBalancingPolicy& p, const Vector& x, const PolicyParams& params) {
                 return p.saturate(p.control(x, params));
             },
             py::arg("x"), py::arg("params"))
        .def("desired_hamiltonian", &EnergyBalancingPolicy::desired_hamiltonian, py::arg("x"),
             py::arg("xi"))
        .def("desired_potential",
             [](const EnergyBalancingPolicy& p, double q, const Vector& xi) {
                 return p.desired_potential(Vector::Constant(1, q), xi);
             },
             py::arg("q"), py::arg("xi"))
        .def("damping_gain",
             [](const EnergyBalancingPolicy& p, const Vector& x, const PolicyParams& params) {
                 return p.damping_gain(x, params.psi);
             },
             py::arg("x"), py::arg("params"))
        .def("hd_rate", &EnergyBalancingPolicy::hd_rate, py::arg("x"), py::arg("params"),
             py::arg("saturated") = false)
        .def("gradients",
             [](const EnergyBalancingPolicy& p, const Vector& x, const PolicyParams& params) {
                 const PolicyGradient g = p.gradients(x, params, p.control(x, params));
                 return py::make_tuple(g.xi, g.psi);
             },
             py::arg("x"), py::arg("params"));

    py::class_<LearnerConfig>(m, "LearnerConfig")
        .def(py::init<>())
        .def_readwrite("gamma", &LearnerConfig::gamma)
        .def_readwrite("lambda_", &LearnerConfig::lambda)
        .def_readwrite("critic_rate", &LearnerConfig::critic_rate)
        .def_readwrite("actor_rate_xi", &LearnerConfig::actor_rate_xi)
        .def_readwrite("actor_rate_psi", &LearnerConfig::actor_rate_psi)
        .def_readwrite("exploration_std", &LearnerConfig::exploration_std)
        .def_readwrite("u_max", &LearnerConfig::u_max)
        .def_readwrite("sample_time", &LearnerConfig::sample_time)
        .def_readwrite("trial_duration", &LearnerConfig::trial_duration)
        .def_readwrite("trials", &LearnerConfig::trials)
        .def_readwrite("seed", &LearnerConfig::seed)
        .def_readwrite("substeps", &LearnerConfig::substeps)
        .def_readwrite("divergence_bound", &LearnerConfig::divergence_bound)
        .def_property_readonly("steps_per_trial", &LearnerConfig::steps_per_trial);

    py::class_<TrainingResult>(m, "TrainingResult")
        .def_readonly("scores", &TrainingResult::scores)
        .def_readonly("params", &TrainingResult::params)
        .def_readonly("critic_theta", &TrainingResult::critic_theta)
        .def_readonly("diverged", &TrainingResult::diverged)
        .def_readonly("diverged_trial", &TrainingResult::diverged_trial)
        .def_readonly("divergence_reason", &TrainingResult::divergence_reason);

    py::class_<SwingupTask>(m, "SwingupTask")
        .def(py::init([](const PendulumParams& params, double u_max, int order) {
                 return SwingupTask::create(params, u_max, order);
             }),
             py::arg("params") = PendulumParams{}, py::arg("u_max") = 3.0, py::arg("order") = 3)
        .def_readonly("policy", &SwingupTask::policy)
        .def_readonly("critic_basis", &SwingupTask::critic_basis)
        .def_readonly("initial_state", &SwingupTask::initial_state)
        .def_property_readonly("pendulum", [](const SwingupTask& t) { return *t.pendulum; })
        .def(
            "train",
            [](const SwingupTask& t, const LearnerConfig& config) {
                py::gil_scoped_release release;
                return train_swingup(t, config);
            },
            py::arg("config") = LearnerConfig{})
        .def(
            "replicate",
            [](const SwingupTask& t, const LearnerConfig& config, int n, int jobs) {
                ReplicateSummary s;
                {
                    py::gil_scoped_release release;
                    s = run_replicates(t, config, n, jobs);
                }
                std::vector<TrainingResult> runs;
                for (auto& r : s.runs) runs.push_back(r.result);
                return py::dict(py::arg("runs") = runs, py::arg("mean") = s.aggregate.mean,
                                py::arg("std") = s.aggregate.stddev, py::arg("min") = s.aggregate.min,
                                py::arg("max") = s.aggregate.max, py::arg("diverged") = s.diverged);
            },
            py::arg("config") = LearnerConfig{}, py::arg("replicates") = 2, py::arg("jobs") = 1)
        .def(
            "evaluate",
            [](const SwingupTask& t, const PolicyParams& params, double epsilon, double duration) {
                const EvaluationResult r =
                    evaluate_policy(t.policy, params, t.initial_state, epsilon, duration);
                return py::dict(py::arg("time") = r.time, py::arg("states") = stack(r.states),
                                py::arg("inputs") = r.inputs, py::arg("velocity") = r.velocity,
                                py::arg("success") = r.success,
                                py::arg("velocity_reversals") = r.velocity_reversals);
            },
            py::arg("params"), py::arg("epsilon") = 0.01, py::arg("duration") = 3.0)
        .def(
            "grids",
            [](const SwingupTask& t, const PolicyParams& params, int resolution) {
                const StabilityGrids g = stability_grids(t.policy, params, resolution);
                py::dict out;
                for (const GridField& f : g.fields) out[py::str(field_name(f.kind))] = field_matrix(f);
                out["q"] = g.fields.front().q;
                out["p"] = g.fields.front().p;
                out["sat_region_nodes"] = g.sat_region_nodes;
                out["sat_region_radius"] = g.sat_region_radius;
                return out;
            },
            py::arg("params"), py::arg("resolution") = 101)
        .def(
            "stability_report",
            [](const SwingupTask& t, const PolicyParams& params, int resolution) {
                return report_dict(local_stability_report(t.policy, params, resolution));
            },
            py::arg("params"), py::arg("resolution") = 101);

    m.def(
        "reward",
        [](const Vector& x, const Vector& u, const PendulumParams& params) {
            return reward(x, u, params);
        },
        py::arg("x"), py::arg("u"), py::arg("params") = PendulumParams{});
    m.def("td_error", &td_error, py::arg("reward"), py::arg("value_next"), py::arg("value_current"),
          py::arg("gamma"));
    m.def(
        "apply_exploration",
        [](const Vector& u_hat, const Vector& noise, double u_max) {
            const Exploration e = apply_exploration(u_hat, noise, u_max);
            return py::make_tuple(e.applied, e.adjusted);
        },
        py::arg("u_hat"), py::arg("noise"), py::arg("u_max"));

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"ebac"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            py::scoped_ostream_redirect out(std::cout, py::module_::import("sys").attr("stdout"));
            py::scoped_ostream_redirect err(std::cerr, py::module_::import("sys").attr("stderr"));
            return run_cli(static_cast<int>(argv.size()), argv.data(), std::cout, std::cerr);
        },
        py::arg("args"), "Run the command-line front end in-process; returns the exit status.");
}

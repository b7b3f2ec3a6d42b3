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

#include "ebac/ph_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebac {

namespace {

double wrap_into(double value, double lower, double upper) {
    const double width = upper - lower;
    double shifted = std::fmod(value - lower, width);
    if (shifted < 0.0) shifted += width;
    double wrapped = lower + shifted;
    // fmod of a value just below a multiple of the width can round up to it.
    if (wrapped >= upper) wrapped = lower;
    return wrapped;
}

}  // namespace

double wrap_angle(double angle) { return wrap_into(angle, -std::numbers::pi, std::numbers::pi); }

Matrix PortHamiltonianSystem::structure_matrix(const Vector& x) const {
    return interconnection(x) - dissipation(x);
}

void PortHamiltonianSystem::check_dims(const Vector& x, const Vector& u) const {
    if (x.size() != state_dim() || u.size() != input_dim()) {
        throw std::invalid_argument("state/input dimension mismatch: got (" +
                                    std::to_string(x.size()) + ", " + std::to_string(u.size()) +
                                    "), model expects (" + std::to_string(state_dim()) + ", " +
                                    std::to_string(input_dim()) + ")");
    }
}

Vector PortHamiltonianSystem::dynamics(const Vector& x, const Vector& u) const {
    check_dims(x, u);
    return structure_matrix(x) * hamiltonian_gradient(x) + input_map(x) * u;
}

Vector PortHamiltonianSystem::output(const Vector& x) const {
    if (x.size() != state_dim()) throw std::invalid_argument("state dimension mismatch");
    return input_map(x).transpose() * hamiltonian_gradient(x);
}

Vector PortHamiltonianSystem::project(const Vector& x) const {
    const Box& box = state_domain();
    Vector out = x;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const Interval& range = box[static_cast<std::size_t>(i)];
        out[i] = range.periodic ? wrap_into(out[i], range.lower, range.upper)
                                : std::clamp(out[i], range.lower, range.upper);
    }
    return out;
}

Vector Rk4Integrator::integrate(const PortHamiltonianSystem& model, const Vector& x,
                                const Vector& u, double sample_time,
                                std::vector<Vector>* nodes) const {
    if (!(sample_time > 0.0)) throw std::invalid_argument("sample time must be positive");
    if (substeps < 1) throw std::invalid_argument("integrator needs at least one substep");

    const double h = sample_time / substeps;
    Vector state = x;
    if (nodes) {
        nodes->clear();
        nodes->reserve(static_cast<std::size_t>(substeps) + 1);
        nodes->push_back(state);
    }
    for (int i = 0; i < substeps; ++i) {
        const Vector k1 = model.dynamics(state, u);
        const Vector k2 = model.dynamics(state + 0.5 * h * k1, u);
        const Vector k3 = model.dynamics(state + 0.5 * h * k2, u);
        const Vector k4 = model.dynamics(state + h * k3, u);
        state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!state.allFinite()) {
            throw NonFiniteStateError("non-finite state after substep " + std::to_string(i));
        }
        if (nodes) nodes->push_back(state);
    }
    return state;
}

Vector Rk4Integrator::step(const PortHamiltonianSystem& model, const Vector& x, const Vector& u,
                           double sample_time) const {
    return model.project(integrate(model, x, u, sample_time));
}

Vector step(const PortHamiltonianSystem& model, const Vector& x, const Vector& u,
            double sample_time, const Rk4Integrator& integrator) {
    return integrator.step(model, x, u, sample_time);
}

double supplied_power(const PortHamiltonianSystem& model, const Vector& x, const Vector& u) {
    const Vector grad = model.hamiltonian_gradient(x);
    const double dissipated = grad.dot(model.dissipation(x) * grad);
    return -dissipated + u.dot(model.output(x));
}

double power_balance_residual(const PortHamiltonianSystem& model, const Transition& transition,
                              const Rk4Integrator& integrator) {
    std::vector<Vector> nodes;
    const Vector& u = transition.input;
    const Vector end = integrator.integrate(model, transition.state, u, transition.sample_time, &nodes);

    // Simpson per substep; the interval midpoint comes from a half-length RK4 step.
    const Rk4Integrator half{1};
    const double h = transition.sample_time / integrator.substeps;
    double supplied = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const Vector mid = half.integrate(model, nodes[i], u, 0.5 * h);
        supplied += (h / 6.0) * (supplied_power(model, nodes[i], u) +
                                 4.0 * supplied_power(model, mid, u) +
                                 supplied_power(model, nodes[i + 1], u));
    }
    const double dH = model.hamiltonian(end) - model.hamiltonian(transition.state);
    return (dH - supplied) / transition.sample_time;
}

std::vector<double> power_balance_residual(const PortHamiltonianSystem& model,
                                           const std::vector<Transition>& trajectory,
                                           const Rk4Integrator& integrator) {
    std::vector<double> residuals;
    residuals.reserve(trajectory.size());
    for (const Transition& t : trajectory) {
        residuals.push_back(power_balance_residual(model, t, integrator));
    }
    return residuals;
}

}  // namespace ebac

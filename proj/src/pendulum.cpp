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

#include "ebac/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebac {

void PendulumParams::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"inertia", inertia},
        {"mass", mass},
        {"gravity", gravity},
        {"length", length},
        {"viscous_friction", viscous_friction},
        {"coulomb_friction", coulomb_friction},
        {"torque_constant", torque_constant},
        {"rotor_resistance", rotor_resistance},
        {"coulomb_epsilon", coulomb_epsilon},
    };
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw std::invalid_argument(std::string("pendulum parameter '") + name +
                                        "' must be positive and finite");
        }
    }
}

Pendulum::Pendulum(PendulumParams params) : params_(params) {
    params_.validate();
    const double p_max = 8.0 * std::numbers::pi * params_.inertia;
    domain_ = {{-std::numbers::pi, std::numbers::pi, true}, {-p_max, p_max, false}};
}

double Pendulum::damping(double qdot) const {
    const PendulumParams& c = params_;
    return c.viscous_friction + c.torque_constant * c.torque_constant / c.rotor_resistance +
           c.coulomb_friction / std::max(std::abs(qdot), c.coulomb_epsilon);
}

Matrix Pendulum::interconnection(const Vector&) const {
    Matrix j(2, 2);
    j << 0.0, 1.0, -1.0, 0.0;
    return j;
}

Matrix Pendulum::dissipation(const Vector& x) const {
    Matrix r = Matrix::Zero(2, 2);
    r(1, 1) = damping(velocity(x[1]));
    return r;
}

Matrix Pendulum::input_map(const Vector&) const {
    Matrix g(2, 1);
    g << 0.0, actuation_gain();
    return g;
}

double Pendulum::potential_energy(const Vector& q) const {
    return gravity_torque() * (1.0 + std::cos(q[0]));
}

Vector Pendulum::potential_gradient(const Vector& q) const {
    Vector grad(1);
    grad[0] = -gravity_torque() * std::sin(q[0]);
    return grad;
}

double Pendulum::hamiltonian(const Vector& x) const {
    const double p = x[1];
    return p * p / (2.0 * params_.inertia) + gravity_torque() * (1.0 + std::cos(x[0]));
}

Vector Pendulum::hamiltonian_gradient(const Vector& x) const {
    return Eigen::Vector2d(-gravity_torque() * std::sin(x[0]), velocity(x[1]));
}

Vector Pendulum::dynamics(const Vector& x, const Vector& u) const {
    check_dims(x, u);
    const double qdot = velocity(x[1]);
    const double dq_H = -gravity_torque() * std::sin(x[0]);
    return Eigen::Vector2d(qdot, -dq_H - damping(qdot) * qdot + actuation_gain() * u[0]);
}

Pendulum pendulum_model(const PendulumParams& params) { return Pendulum(params); }

}  // namespace ebac

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

#ifndef EBAC_PENDULUM_HPP
#define EBAC_PENDULUM_HPP

#include "ebac/ph_model.hpp"

namespace ebac {

/// DC-motor driven pendulum. Defaults are the identified lab setup.
struct PendulumParams {
    double inertia = 1.90e-4;           // J_p [kg m^2]
    double mass = 5.2e-2;               // M_p [kg]
    double gravity = 9.81;              // g_p [m/s^2]
    double length = 4.20e-2;            // l_p [m]
    double viscous_friction = 2.48e-6;  // b_p [N m s]
    double coulomb_friction = 1.0e-3;   // sigma_p [N m]
    double torque_constant = 5.60e-2;   // K_p [N m/A]
    double rotor_resistance = 9.92;     // R_p [Ohm]
    double coulomb_epsilon = 0.5;       // |qdot| floor for the Coulomb term [rad/s]

    /// Throws std::invalid_argument naming the first non-positive parameter.
    void validate() const;
};

/**
 * @brief Pendulum as a port-Hamiltonian system, x = [q, p]
 *
 *   J = [0 1; -1 0],  R = diag(0, Rbar(qdot)),  g = [0, K_p/R_p]^T
 *   H = p^2/(2 J_p) + M_p g_p l_p (1 + cos q)
 *   Rbar(qdot) = b_p + K_p^2/R_p + sigma_p / max(|qdot|, eps)
 *
 * q = 0 is upright. The angle wraps into [-pi, pi); the momentum is clipped to
 * [-8 pi J_p, 8 pi J_p].
 */
class Pendulum final : public MechanicalSystem {
public:
    explicit Pendulum(PendulumParams params = {});

    const PendulumParams& params() const { return params_; }

    int state_dim() const override { return 2; }
    int input_dim() const override { return 1; }

    Matrix interconnection(const Vector& x) const override;
    Matrix dissipation(const Vector& x) const override;
    Matrix input_map(const Vector& x) const override;
    double hamiltonian(const Vector& x) const override;
    Vector hamiltonian_gradient(const Vector& x) const override;
    Vector dynamics(const Vector& x, const Vector& u) const override;
    const Box& state_domain() const override { return domain_; }

    double potential_energy(const Vector& q) const override;
    Vector potential_gradient(const Vector& q) const override;

    double velocity(double p) const { return p / params_.inertia; }
    /// Rbar(qdot), strictly positive.
    double damping(double qdot) const;
    /// K_p / R_p, the voltage-to-torque gain.
    double actuation_gain() const { return params_.torque_constant / params_.rotor_resistance; }
    /// M_p g_p l_p.
    double gravity_torque() const { return params_.mass * params_.gravity * params_.length; }
    double momentum_limit() const { return domain_[1].upper; }

private:
    PendulumParams params_;
    Box domain_;
};

Pendulum pendulum_model(const PendulumParams& params = {});

inline Vector pendulum_state(double q, double p) { return Eigen::Vector2d(q, p); }

}  // namespace ebac

#endif  // EBAC_PENDULUM_HPP

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

#ifndef EBAC_PH_MODEL_HPP
#define EBAC_PH_MODEL_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ebac {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Closed interval [lower, upper]. Periodic coordinates are wrapped into
/// [lower, upper) instead of being clipped.
struct Interval {
    double lower = 0.0;
    double upper = 1.0;
    bool periodic = false;

    double width() const { return upper - lower; }
};

using Box = std::vector<Interval>;

/// Raised when integration produces a NaN or infinite state.
class NonFiniteStateError : public std::runtime_error {
public:
    explicit NonFiniteStateError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * @brief Input-state-output port-Hamiltonian system
 *
 *   xdot = [J(x) - R(x)] grad H(x) + g(x) u
 *   y    = g(x)^T grad H(x)
 *
 * Concrete models supply J, R, g, H and grad H. The default dynamics() and
 * output() are assembled from those; a model may override dynamics() with a
 * closed form as long as it agrees with the structured expression.
 */
class PortHamiltonianSystem {
public:
    virtual ~PortHamiltonianSystem() = default;

    virtual int state_dim() const = 0;
    virtual int input_dim() const = 0;

    virtual Matrix interconnection(const Vector& x) const = 0;  // J(x)
    virtual Matrix dissipation(const Vector& x) const = 0;      // R(x)
    virtual Matrix input_map(const Vector& x) const = 0;        // g(x)
    virtual double hamiltonian(const Vector& x) const = 0;
    virtual Vector hamiltonian_gradient(const Vector& x) const = 0;

    /// F(x) = J(x) - R(x).
    Matrix structure_matrix(const Vector& x) const;

    virtual Vector dynamics(const Vector& x, const Vector& u) const;
    Vector output(const Vector& x) const;

    /// Admissible state box. Periodic coordinates wrap, the others are clipped.
    virtual const Box& state_domain() const = 0;

    /// Maps a state back into state_domain(): wraps periodic coordinates,
    /// saturates the rest.
    Vector project(const Vector& x) const;

protected:
    void check_dims(const Vector& x, const Vector& u) const;
};

/**
 * Fully actuated mechanical system with x = [q; p], H = kinetic(q, p) + P(q).
 * The configuration block q is the part of the state whose energy can be
 * reshaped by feedback; p must keep the plant's gradient.
 */
class MechanicalSystem : public PortHamiltonianSystem {
public:
    int configuration_dim() const { return state_dim() / 2; }

    virtual double potential_energy(const Vector& q) const = 0;
    virtual Vector potential_gradient(const Vector& q) const = 0;
};

/// One zero-order-hold control period.
struct Transition {
    Vector state;
    Vector input;
    double sample_time = 0.0;
};

/// Classical RK4 with a fixed number of uniform substeps, control held constant.
struct Rk4Integrator {
    int substeps = 20;

    /// Integrates over one control period and projects the result into the
    /// model's state domain. Throws NonFiniteStateError on blow-up.
    Vector step(const PortHamiltonianSystem& model, const Vector& x, const Vector& u,
                double sample_time) const;

    /// Same integration without the final projection. If nodes is non-null it
    /// receives substeps + 1 states, including x and the end point.
    Vector integrate(const PortHamiltonianSystem& model, const Vector& x, const Vector& u,
                     double sample_time, std::vector<Vector>* nodes = nullptr) const;
};

Vector step(const PortHamiltonianSystem& model, const Vector& x, const Vector& u,
            double sample_time, const Rk4Integrator& integrator = {});

/**
 * Power-balance residual of one period:
 *
 *   (H(x_end) - H(x)) / T_s - (1/T_s) * int_0^T_s (-grad H^T R grad H + u^T y) dt
 *
 * The supply integral uses composite Simpson over the integrator's substep
 * nodes (with the interval midpoints integrated separately), and x_end is taken
 * before projection so that momentum clipping does not count as dissipation.
 */
double power_balance_residual(const PortHamiltonianSystem& model, const Transition& transition,
                              const Rk4Integrator& integrator = {});

std::vector<double> power_balance_residual(const PortHamiltonianSystem& model,
                                           const std::vector<Transition>& trajectory,
                                           const Rk4Integrator& integrator = {});

/// Instantaneous -grad H^T R grad H + u^T y.
double supplied_power(const PortHamiltonianSystem& model, const Vector& x, const Vector& u);

double wrap_angle(double angle);

}  // namespace ebac

#endif  // EBAC_PH_MODEL_HPP

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

#ifndef EBAC_POLICY_HPP
#define EBAC_POLICY_HPP

#include <memory>

#include "ebac/fourier_basis.hpp"
#include "ebac/ph_model.hpp"

namespace ebac {

/**
 * @brief Damping parameter tensor Psi of shape m x m x f, symmetric in (i, j)
 *
 * Only the pairs i <= j are stored, so [Psi]_ijl == [Psi]_jil holds by
 * construction after any update. Packed layout: pair-major, feature-minor,
 * pairs enumerated (0,0), (0,1), ..., (0,m-1), (1,1), ...
 */
class DampingParameters {
public:
    DampingParameters() = default;
    DampingParameters(int inputs, int features);

    int inputs() const { return inputs_; }
    int features() const { return features_; }
    int pair_count() const { return inputs_ * (inputs_ + 1) / 2; }
    int pair_index(int i, int j) const;

    double operator()(int i, int j, int l) const { return packed_[pair_index(i, j) * features_ + l]; }
    double& operator()(int i, int j, int l) { return packed_[pair_index(i, j) * features_ + l]; }

    const Vector& packed() const { return packed_; }
    Vector& packed() { return packed_; }

    /// [K]_ij = sum_l [Psi]_ijl phi_l.
    Matrix gain(const Vector& features) const;

private:
    int inputs_ = 0;
    int features_ = 0;
    Vector packed_;
};

/// Actor parameters: xi for the shaped potential, Psi for the damping gain.
struct PolicyParams {
    Vector xi;
    DampingParameters psi;

    bool all_finite() const { return xi.allFinite() && psi.packed().allFinite(); }
};

/// Gradients of the saturated control with respect to xi (m x e) and the
/// packed Psi (m x pair_count*f). Rows of saturated inputs are zero.
struct PolicyGradient {
    Matrix xi;
    Matrix psi;
};

/// Componentwise clamp to [-u_max, u_max].
Vector saturate(const Vector& u, double u_max);

/**
 * @brief Energy-balancing control law with learnable potential and damping
 *
 *   Hd(x)  = H(x) - P(q) + xi^T phi_H(q)
 *   K(x)   = sum_l Psi_l phi_K(x)
 *   u(x)   = g^+ F [grad_q Hd - grad_q H; 0] - K g^T grad Hd
 *
 * Only the configuration coordinates are reshaped; the momentum block of
 * grad Hd equals the plant's, so the matching condition holds for every xi.
 * K is symmetric but deliberately left sign-indefinite.
 */
class EnergyBalancingPolicy {
public:
    EnergyBalancingPolicy(std::shared_ptr<const MechanicalSystem> system,
                          FourierBasis potential_basis, FourierBasis damping_basis, double u_max);

    /// Order-3 bases: 1-D over the configuration interval for phi_H, full
    /// state box for phi_K.
    static EnergyBalancingPolicy with_default_bases(std::shared_ptr<const MechanicalSystem> system,
                                                    double u_max, int order = 3);

    const MechanicalSystem& system() const { return *system_; }
    std::shared_ptr<const MechanicalSystem> system_ptr() const { return system_; }
    const FourierBasis& potential_basis() const { return potential_basis_; }
    const FourierBasis& damping_basis() const { return damping_basis_; }
    double u_max() const { return u_max_; }

    PolicyParams zero_params() const;
    void check(const PolicyParams& params) const;

    double desired_potential(const Vector& q, const Vector& xi) const;
    Vector desired_potential_gradient(const Vector& q, const Vector& xi) const;
    double desired_hamiltonian(const Vector& x, const Vector& xi) const;
    Vector desired_hamiltonian_gradient(const Vector& x, const Vector& xi) const;
    Matrix damping_gain(const Vector& x, const DampingParameters& psi) const;

    /// Unsaturated control.
    Vector control(const Vector& x, const PolicyParams& params) const;
    Vector saturate(const Vector& u) const { return ebac::saturate(u, u_max_); }

    /// Gradients of saturate(control) at x; u_hat must be control(x, params).
    /// |u_i| == u_max counts as unsaturated.
    PolicyGradient gradients(const Vector& x, const PolicyParams& params, const Vector& u_hat) const;

    /// grad Hd^T xdot along the closed loop, with or without input saturation.
    double hd_rate(const Vector& x, const PolicyParams& params, bool saturated) const;
    /// -grad Hd^T (R + g K g^T) grad Hd, the unsaturated target-dynamics rate.
    double hd_rate_target(const Vector& x, const PolicyParams& params) const;

    /// Energy-shaping part g^+ F [grad_q Hd - grad_q H; 0] of the control.
    Vector energy_shaping_control(const Vector& x, const Vector& xi) const;

private:
    Vector configuration(const Vector& x) const { return x.head(system_->configuration_dim()); }
    Matrix input_pseudo_inverse(const Matrix& g) const;

    std::shared_ptr<const MechanicalSystem> system_;
    FourierBasis potential_basis_;
    FourierBasis damping_basis_;
    double u_max_;
};

}  // namespace ebac

#endif  // EBAC_POLICY_HPP

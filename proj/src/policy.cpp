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

#include "ebac/policy.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ebac {

DampingParameters::DampingParameters(int inputs, int features)
    : inputs_(inputs), features_(features) {
    if (inputs < 1 || features < 1) throw std::invalid_argument("damping tensor needs m, f >= 1");
    packed_ = Vector::Zero(static_cast<Eigen::Index>(pair_count()) * features);
}

int DampingParameters::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    // rows 0..i-1 contribute m, m-1, ..., m-i+1 pairs
    return i * inputs_ - i * (i - 1) / 2 + (j - i);
}

Matrix DampingParameters::gain(const Vector& features) const {
    Matrix k(inputs_, inputs_);
    for (int i = 0; i < inputs_; ++i) {
        for (int j = i; j < inputs_; ++j) {
            const double kij = packed_.segment(pair_index(i, j) * features_, features_).dot(features);
            k(i, j) = kij;
            k(j, i) = kij;
        }
    }
    return k;
}

Vector saturate(const Vector& u, double u_max) {
    return u.cwiseMax(-u_max).cwiseMin(u_max);
}

EnergyBalancingPolicy::EnergyBalancingPolicy(std::shared_ptr<const MechanicalSystem> system,
                                             FourierBasis potential_basis,
                                             FourierBasis damping_basis, double u_max)
    : system_(std::move(system)),
      potential_basis_(std::move(potential_basis)),
      damping_basis_(std::move(damping_basis)),
      u_max_(u_max) {
    if (!system_) throw std::invalid_argument("policy needs a system");
    if (!(u_max_ > 0.0)) throw std::invalid_argument("u_max must be positive");
    if (potential_basis_.dims() != system_->configuration_dim()) {
        throw std::invalid_argument("potential basis must span the configuration coordinates");
    }
    if (damping_basis_.dims() != system_->state_dim()) {
        throw std::invalid_argument("damping basis must span the full state");
    }
}

EnergyBalancingPolicy EnergyBalancingPolicy::with_default_bases(
    std::shared_ptr<const MechanicalSystem> system, double u_max, int order) {
    const Box& full = system->state_domain();
    Box configuration(full.begin(), full.begin() + system->configuration_dim());
    FourierBasis potential(order, configuration);
    FourierBasis damping(order, full);
    return EnergyBalancingPolicy(std::move(system), std::move(potential), std::move(damping), u_max);
}

PolicyParams EnergyBalancingPolicy::zero_params() const {
    return {Vector::Zero(potential_basis_.size()),
            DampingParameters(system_->input_dim(), damping_basis_.size())};
}

void EnergyBalancingPolicy::check(const PolicyParams& params) const {
    if (params.xi.size() != potential_basis_.size() ||
        params.psi.inputs() != system_->input_dim() ||
        params.psi.features() != damping_basis_.size()) {
        throw std::invalid_argument("policy parameters do not match the policy's bases");
    }
}

double EnergyBalancingPolicy::desired_potential(const Vector& q, const Vector& xi) const {
    return xi.dot(potential_basis_.features(q));
}

Vector EnergyBalancingPolicy::desired_potential_gradient(const Vector& q, const Vector& xi) const {
    return potential_basis_.jacobian(potential_basis_.scale(q)).transpose() * xi;
}

double EnergyBalancingPolicy::desired_hamiltonian(const Vector& x, const Vector& xi) const {
    const Vector q = configuration(x);
    return system_->hamiltonian(x) - system_->potential_energy(q) + desired_potential(q, xi);
}

Vector EnergyBalancingPolicy::desired_hamiltonian_gradient(const Vector& x, const Vector& xi) const {
    const int d = system_->configuration_dim();
    const Vector q = configuration(x);
    Vector grad = system_->hamiltonian_gradient(x);
    grad.head(d) += desired_potential_gradient(q, xi) - system_->potential_gradient(q);
    return grad;
}

Matrix EnergyBalancingPolicy::damping_gain(const Vector& x, const DampingParameters& psi) const {
    return psi.gain(damping_basis_.features(x));
}

Matrix EnergyBalancingPolicy::input_pseudo_inverse(const Matrix& g) const {
    // g has full column rank, so g^+ = (g^T g)^{-1} g^T.
    return (g.transpose() * g).ldlt().solve(g.transpose());
}

Vector EnergyBalancingPolicy::energy_shaping_control(const Vector& x, const Vector& xi) const {
    const int d = system_->configuration_dim();
    const Vector q = configuration(x);
    Vector assignable = Vector::Zero(system_->state_dim());
    assignable.head(d) = desired_potential_gradient(q, xi) - system_->potential_gradient(q);
    return input_pseudo_inverse(system_->input_map(x)) * (system_->structure_matrix(x) * assignable);
}

Vector EnergyBalancingPolicy::control(const Vector& x, const PolicyParams& params) const {
    const Matrix g = system_->input_map(x);
    const Vector grad_hd = desired_hamiltonian_gradient(x, params.xi);
    return energy_shaping_control(x, params.xi) -
           damping_gain(x, params.psi) * (g.transpose() * grad_hd);
}

PolicyGradient EnergyBalancingPolicy::gradients(const Vector& x, const PolicyParams& params,
                                                const Vector& u_hat) const {
    const int n = system_->state_dim();
    const int m = system_->input_dim();
    const int d = system_->configuration_dim();
    const int f = damping_basis_.size();

    const Matrix g = system_->input_map(x);
    const Vector phi_k = damping_basis_.features(x);
    const Matrix k = params.psi.gain(phi_k);

    // xi enters u through the configuration block of grad Hd only:
    // du/dxi = (g^+ F - K g^T) [dphi_H/dq^T; 0]
    Matrix lift = Matrix::Zero(n, potential_basis_.size());
    lift.topRows(d) = potential_basis_.jacobian(potential_basis_.scale(configuration(x))).transpose();
    PolicyGradient grad;
    grad.xi = (input_pseudo_inverse(g) * system_->structure_matrix(x) - k * g.transpose()) * lift;

    // u = ... - K v with v = g^T grad Hd; a stored off-diagonal entry drives K_ab and K_ba.
    const Vector v = g.transpose() * desired_hamiltonian_gradient(x, params.xi);
    grad.psi = Matrix::Zero(m, params.psi.packed().size());
    for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) {
            auto block = grad.psi.middleCols(params.psi.pair_index(a, b) * f, f);
            block.row(a) -= v[b] * phi_k.transpose();
            if (a != b) block.row(b) -= v[a] * phi_k.transpose();
        }
    }

    for (int i = 0; i < m; ++i) {
        if (std::abs(u_hat[i]) > u_max_) {
            grad.xi.row(i).setZero();
            grad.psi.row(i).setZero();
        }
    }
    return grad;
}

double EnergyBalancingPolicy::hd_rate(const Vector& x, const PolicyParams& params,
                                      bool saturated) const {
    Vector u = control(x, params);
    if (saturated) u = saturate(u);
    return desired_hamiltonian_gradient(x, params.xi).dot(system_->dynamics(x, u));
}

double EnergyBalancingPolicy::hd_rate_target(const Vector& x, const PolicyParams& params) const {
    const Matrix g = system_->input_map(x);
    const Matrix r_d = system_->dissipation(x) + g * damping_gain(x, params.psi) * g.transpose();
    const Vector grad = desired_hamiltonian_gradient(x, params.xi);
    return -grad.dot(r_d * grad);
}

}  // namespace ebac

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

#ifndef EBAC_FOURIER_BASIS_HPP
#define EBAC_FOURIER_BASIS_HPP

#include <cstddef>

#include "ebac/ph_model.hpp"

namespace ebac {

/// Counts states that fell outside the scaling box and were clamped.
struct ScalingDiagnostics {
    std::size_t clamped = 0;
};

/// Affine map of each coordinate of x from its interval onto [-1, 1].
/// Periodic coordinates outside their interval are wrapped first; other
/// out-of-box coordinates are clamped and counted in diag.
Vector scale_state(const Box& domain, const Vector& x, ScalingDiagnostics* diag = nullptr);

/**
 * @brief Full Nth-order cosine basis phi_i(xbar) = cos(pi c_i^T xbar)
 *
 * The frequency matrix holds every vector in {0..N}^n as a column, in odometer
 * order with the first dimension advancing fastest, so column 0 is the
 * constant function and column 1 is (1, 0, ..., 0).
 */
class FourierBasis {
public:
    FourierBasis(int order, Box domain);

    int order() const { return order_; }
    int dims() const { return static_cast<int>(domain_.size()); }
    int size() const { return static_cast<int>(frequencies_.cols()); }
    const Eigen::MatrixXi& frequencies() const { return frequencies_; }
    const Box& domain() const { return domain_; }

    Vector scale(const Vector& x, ScalingDiagnostics* diag = nullptr) const {
        return scale_state(domain_, x, diag);
    }

    /// Features of an already scaled state.
    Vector evaluate(const Vector& xbar) const;
    /// d phi / d xbar, size() x dims().
    Matrix jacobian_scaled(const Vector& xbar) const;
    /// d phi / d x in raw coordinates (scaled Jacobian times 2/(max - min) per column).
    Matrix jacobian(const Vector& xbar) const;

    /// scale() followed by evaluate().
    Vector features(const Vector& x, ScalingDiagnostics* diag = nullptr) const {
        return evaluate(scale(x, diag));
    }

private:
    int order_;
    Box domain_;
    Eigen::MatrixXi frequencies_;
    Matrix frequencies_real_;
    Vector chain_factors_;
};

FourierBasis build_basis(int order, const Box& domain);

/// base / ||c_i||_2, with the constant feature keeping the base rate.
Vector scaled_learning_rates(double base_rate, const FourierBasis& basis);

}  // namespace ebac

#endif  // EBAC_FOURIER_BASIS_HPP

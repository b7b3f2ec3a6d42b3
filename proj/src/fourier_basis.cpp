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

#include "ebac/fourier_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebac {

namespace {

// cos(pi t) and sin(pi t) with exact zeros and signs at integer and
// half-integer t, so the features vanish exactly where they should.
double cospi(double t) {
    const double r = std::remainder(t, 2.0);  // exact, in [-1, 1]
    const double a = std::abs(r);
    if (a <= 0.5) return std::cos(std::numbers::pi * a);
    return -std::cos(std::numbers::pi * (1.0 - a));
}

double sinpi(double t) {
    const double r = std::remainder(t, 2.0);
    const double a = std::abs(r);
    const double s = a <= 0.5 ? std::sin(std::numbers::pi * a) : std::sin(std::numbers::pi * (1.0 - a));
    return r < 0.0 ? -s : s;
}

}  // namespace

Vector scale_state(const Box& domain, const Vector& x, ScalingDiagnostics* diag) {
    if (static_cast<std::size_t>(x.size()) != domain.size()) {
        throw std::invalid_argument("state dimension does not match scaling domain");
    }
    Vector xbar(x.size());
    bool clamped = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Interval& range = domain[static_cast<std::size_t>(i)];
        double xi = x[i];
        if (range.periodic && (xi < range.lower || xi > range.upper)) {
            xi = range.lower + std::fmod(xi - range.lower, range.width());
            if (xi < range.lower) xi += range.width();
        }
        double v = 2.0 * (xi - range.lower) / range.width() - 1.0;
        if (v < -1.0 || v > 1.0) {
            v = std::clamp(v, -1.0, 1.0);
            clamped = true;
        }
        xbar[i] = v;
    }
    if (clamped && diag) ++diag->clamped;
    return xbar;
}

FourierBasis::FourierBasis(int order, Box domain) : order_(order), domain_(std::move(domain)) {
    if (order_ < 0) throw std::invalid_argument("basis order must be non-negative");
    if (domain_.empty()) throw std::invalid_argument("basis needs at least one dimension");
    for (const Interval& range : domain_) {
        if (!(range.lower < range.upper) || !std::isfinite(range.width())) {
            throw std::invalid_argument("degenerate basis domain: need lower < upper");
        }
    }

    const int n = dims();
    const int radix = order_ + 1;
    long count = 1;
    for (int j = 0; j < n; ++j) count *= radix;

    frequencies_.resize(n, count);
    for (long i = 0; i < count; ++i) {
        long rest = i;
        for (int j = 0; j < n; ++j) {
            frequencies_(j, i) = static_cast<int>(rest % radix);
            rest /= radix;
        }
    }

    frequencies_real_ = frequencies_.cast<double>();
    chain_factors_.resize(n);
    for (int j = 0; j < n; ++j) chain_factors_[j] = 2.0 / domain_[static_cast<std::size_t>(j)].width();
}

Vector FourierBasis::evaluate(const Vector& xbar) const {
    const Vector arg = frequencies_real_.transpose() * xbar;
    return arg.unaryExpr([](double t) { return cospi(t); });
}

Matrix FourierBasis::jacobian_scaled(const Vector& xbar) const {
    const Vector s = (frequencies_real_.transpose() * xbar).unaryExpr([](double t) { return sinpi(t); });
    // d/dxbar_j cos(pi c^T xbar) = -pi c_j sin(pi c^T xbar)
    return -std::numbers::pi * (s.asDiagonal() * frequencies_real_.transpose());
}

Matrix FourierBasis::jacobian(const Vector& xbar) const {
    return jacobian_scaled(xbar) * chain_factors_.asDiagonal();
}

FourierBasis build_basis(int order, const Box& domain) { return FourierBasis(order, domain); }

Vector scaled_learning_rates(double base_rate, const FourierBasis& basis) {
    if (!(base_rate > 0.0)) throw std::invalid_argument("base learning rate must be positive");
    Vector rates(basis.size());
    for (int i = 0; i < basis.size(); ++i) {
        const double norm = basis.frequencies().col(i).cast<double>().norm();
        rates[i] = norm > 0.0 ? base_rate / norm : base_rate;
    }
    return rates;
}

}  // namespace ebac

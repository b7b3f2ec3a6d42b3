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


#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ebac/pendulum.hpp"
#include "test_support.hpp"

namespace ebac {
namespace {

using testing::kPi;

// Hand arithmetic on the default parameters.
constexpr double kMgl = 5.2e-2 * 9.81 * 4.20e-2;
constexpr double kGain = 5.60e-2 / 9.92;

/// Fixed-step forward Euler on the closed-form vector field, written out here
/// so it shares nothing with the library integrator.
Eigen::Vector2d euler_oracle(const PendulumParams& pp, Eigen::Vector2d x, double u, double T,
                             int steps) {
    const double h = T / steps;
    for (int k = 0; k < steps; ++k) {
        const double qdot = x(1) / pp.inertia;
        const double rbar = pp.viscous_friction +
                            pp.torque_constant * pp.torque_constant / pp.rotor_resistance +
                            pp.coulomb_friction / std::max(std::abs(qdot), pp.coulomb_epsilon);
        const double pdot = pp.mass * pp.gravity * pp.length * std::sin(x(0)) - rbar * qdot +
                            pp.torque_constant / pp.rotor_resistance * u;
        x += h * Eigen::Vector2d(qdot, pdot);
    }
    return x;
}

TEST(PendulumModel, HamiltonianValues) {
    const Pendulum model;
    EXPECT_NEAR(model.hamiltonian(pendulum_state(kPi, 0.0)), 0.0, 1e-18);
    EXPECT_NEAR(model.hamiltonian(pendulum_state(0.0, 0.0)), 2.0 * kMgl, 1e-15);
    EXPECT_NEAR(model.hamiltonian(pendulum_state(0.0, 0.0)), 4.28501e-2, 1e-7);
    const double J = model.params().inertia;
    EXPECT_NEAR(model.hamiltonian(pendulum_state(kPi, 2.0 * J)), 2.0 * J, 1e-15);
}

TEST(PendulumModel, InputMapAndOutput) {
    const Pendulum model;
    const Matrix g = model.input_map(pendulum_state(0.3, 0.0));
    ASSERT_EQ(g.rows(), 2);
    ASSERT_EQ(g.cols(), 1);
    EXPECT_EQ(g(0, 0), 0.0);
    EXPECT_NEAR(g(1, 0), kGain, 1e-15);
    EXPECT_NEAR(g(1, 0), 5.6452e-3, 1e-7);

    EXPECT_EQ(model.output(pendulum_state(1.1, 0.0))(0), 0.0);
    const double J = model.params().inertia;
    EXPECT_NEAR(model.output(pendulum_state(0.0, J))(0), kGain, 1e-15);
}

TEST(PendulumModel, DynamicsSignConvention) {
    const Pendulum model;
    const Vector zero = Vector::Zero(1);
    EXPECT_TRUE(model.dynamics(pendulum_state(0.0, 0.0), zero).isZero(0.0));

    const Vector f = model.dynamics(pendulum_state(kPi / 2, 0.0), zero);
    EXPECT_EQ(f(0), 0.0);
    EXPECT_NEAR(f(1), kMgl, 1e-15);
    EXPECT_NEAR(f(1), 2.14250e-2, 1e-7);

    const double p0 = 3.0e-4;
    EXPECT_NEAR(model.dynamics(pendulum_state(0.0, p0), zero)(0), p0 / model.params().inertia,
                1e-15);
}

TEST(PendulumModel, GeneralFormulaMatchesClosedForm) {
    const Pendulum model;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Vector x = testing::random_state(rng, model);
        const Vector u = testing::random_vector(rng, 1, 3.0);
        const Vector general = model.structure_matrix(x) * model.hamiltonian_gradient(x) +
                               model.input_map(x) * u;
        const Vector closed = model.dynamics(x, u);
        EXPECT_NEAR(general(0), closed(0), 1e-12 * std::max(1.0, std::abs(closed(0))));
        EXPECT_NEAR(general(1), closed(1), 1e-15);
    }
}

TEST(PendulumModel, DimensionMismatchThrows) {
    const Pendulum model;
    EXPECT_THROW(model.dynamics(Vector::Zero(3), Vector::Zero(1)), std::invalid_argument);
    EXPECT_THROW(model.dynamics(Vector::Zero(2), Vector::Zero(2)), std::invalid_argument);
}

TEST(PendulumModel, InvalidParamsRejected) {
    PendulumParams p;
    p.mass = 0.0;
    EXPECT_THROW(Pendulum{p}, std::invalid_argument);
    p = {};
    p.coulomb_epsilon = -1.0;
    EXPECT_THROW(Pendulum{p}, std::invalid_argument);
    p = {};
    p.inertia = std::nan("");
    EXPECT_THROW(Pendulum{p}, std::invalid_argument);
}

TEST(PendulumModel, StructureInvariantsOnRandomStates) {
    const Pendulum model;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Vector x = testing::random_state(rng, model);
        const Matrix J = model.interconnection(x);
        const Matrix R = model.dissipation(x);
        EXPECT_EQ((J + J.transpose()).norm(), 0.0);
        EXPECT_EQ((R - R.transpose()).norm(), 0.0);
        EXPECT_GT(R(1, 1), 0.0);
        EXPECT_EQ(R(0, 0), 0.0);
        const Matrix F = model.structure_matrix(x);
        EXPECT_EQ((F + F.transpose() + 2.0 * R).norm(), 0.0);
        EXPECT_GT(model.damping(x(1) / model.params().inertia), 0.0);
    }
    EXPECT_GT(model.damping(0.0), 0.0);
}

TEST(Integrator, EquilibriaAreFixedPoints) {
    const Pendulum model;
    const Vector zero = Vector::Zero(1);
    const Vector top = step(model, pendulum_state(0.0, 0.0), zero, 0.03);
    EXPECT_EQ(top(0), 0.0);
    EXPECT_EQ(top(1), 0.0);
    for (double Ts : {0.001, 0.03, 1.0}) {
        EXPECT_TRUE(step(model, pendulum_state(0.0, 0.0), zero, Ts).isZero(0.0));
    }
    const Vector bottom = step(model, pendulum_state(kPi, 0.0), zero, 0.03);
    EXPECT_LT(std::abs(wrap_angle(bottom(0) - kPi)), 1e-6);
    EXPECT_LT(std::abs(bottom(1)), 1e-6);
}

TEST(Integrator, MatchesFineEulerOracle) {
    const Pendulum model;
    const double Ts = 0.03;
    struct Case {
        double q, p, u;
    };
    const double J = model.params().inertia;
    for (const Case c : {Case{kPi / 2, 0.0, 0.0}, Case{2.5, 10 * J, 1.5}, Case{-0.7, -5 * J, -3.0},
                         Case{3.0, 0.0, 3.0}}) {
        // Richardson: two Euler refinements at Ts/1000 and Ts/2000 cancel the O(h) term.
        const Eigen::Vector2d coarse =
            euler_oracle(model.params(), Eigen::Vector2d(c.q, c.p), c.u, Ts, 1000);
        const Eigen::Vector2d fine =
            euler_oracle(model.params(), Eigen::Vector2d(c.q, c.p), c.u, Ts, 2000);
        const Eigen::Vector2d oracle = 2.0 * fine - coarse;
        const Vector x =
            Rk4Integrator{}.integrate(model, pendulum_state(c.q, c.p), Vector::Constant(1, c.u), Ts);
        EXPECT_NEAR(x(0), oracle(0), 1e-6) << "q=" << c.q;
        EXPECT_NEAR(x(1), oracle(1), 1e-6) << "q=" << c.q;
    }
    // First-order prediction of the momentum change from rest.
    const Vector x = step(model, pendulum_state(kPi / 2, 0.0), Vector::Zero(1), Ts);
    EXPECT_NEAR(x(1), kMgl * Ts, 0.1 * kMgl * Ts);
}

TEST(Integrator, UnforcedEnergyNeverIncreases) {
    const Pendulum model;
    std::vector<Vector> starts = {pendulum_state(kPi - 0.1, 0.0), pendulum_state(0.01, 0.0),
                                  pendulum_state(-2.0, 3e-3)};
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) starts.push_back(testing::random_state(rng, model));
    for (const Vector& start : starts) {
        Vector x = start;
        double H = model.hamiltonian(x);
        for (int k = 0; k < 300; ++k) {
            x = step(model, x, Vector::Zero(1), 0.03);
            const double next = model.hamiltonian(x);
            EXPECT_LE(next - H, 1e-8);
            H = next;
        }
    }
}

TEST(Integrator, PowerBalanceResidualOnRandomForcedSteps) {
    const Pendulum model;
    const Rk4Integrator integrator;
    std::mt19937_64 rng(17);
    const double Ts = 0.03;
    for (int i = 0; i < 100; ++i) {
        const Transition t{testing::random_state(rng, model), testing::random_vector(rng, 1, 3.0), Ts};
        const Vector end = integrator.integrate(model, t.state, t.input, Ts);
        const double rate = (model.hamiltonian(end) - model.hamiltonian(t.state)) / Ts;
        const double residual = power_balance_residual(model, t, integrator);
        EXPECT_LT(std::abs(residual), 1e-4 * std::max(std::abs(rate), 1.0));
    }
    // Equilibrium trajectory has zero residual.
    const std::vector<Transition> rest(5, Transition{pendulum_state(0.0, 0.0), Vector::Zero(1), Ts});
    for (double r : power_balance_residual(model, rest, integrator)) EXPECT_EQ(r, 0.0);
}

TEST(Integrator, PowerBalanceAgainstIndependentQuadrature) {
    // Energy change over one period versus a fine trapezoid integral of the
    // supplied power along a 2000-step Euler path.
    const Pendulum model;
    const PendulumParams& pp = model.params();
    const Eigen::Vector2d x0(2.0, 4e-3);
    const double u = 2.0, Ts = 0.03;
    const int n = 4000;
    Eigen::Vector2d x = x0;
    double supplied = 0.0;
    auto power = [&](const Eigen::Vector2d& s) {
        const double qdot = s(1) / pp.inertia;
        return -model.damping(qdot) * qdot * qdot + kGain * qdot * u;
    };
    double prev = power(x);
    for (int k = 0; k < n; ++k) {
        x = euler_oracle(pp, x, u, Ts / n, 1);
        const double cur = power(x);
        supplied += 0.5 * (prev + cur) * Ts / n;
        prev = cur;
    }
    const Vector end = Rk4Integrator{}.integrate(model, pendulum_state(x0(0), x0(1)),
                                                 Vector::Constant(1, u), Ts);
    const double dH = model.hamiltonian(end) - model.hamiltonian(pendulum_state(x0(0), x0(1)));
    EXPECT_NEAR(dH / Ts, supplied / Ts, 1e-3 * std::max(1.0, std::abs(dH / Ts)));
    const double residual = power_balance_residual(
        model, Transition{pendulum_state(x0(0), x0(1)), Vector::Constant(1, u), Ts});
    EXPECT_NEAR(residual, dH / Ts - supplied / Ts, 1e-3 * std::max(1.0, std::abs(dH / Ts)));
}

TEST(Integrator, DeterministicAndWrapped) {
    const Pendulum model;
    const double J = model.params().inertia;
    const Vector x = pendulum_state(kPi - 1e-3, 20.0 * J);
    const Vector a = step(model, x, Vector::Constant(1, 1.0), 0.03);
    const Vector b = step(model, x, Vector::Constant(1, 1.0), 0.03);
    EXPECT_EQ(a(0), b(0));
    EXPECT_EQ(a(1), b(1));
    EXPECT_GE(a(0), -kPi);
    EXPECT_LT(a(0), kPi);
    EXPECT_LT(a(0), 0.0);  // crossed the seam at pi
}

TEST(Integrator, MomentumClipped) {
    const Pendulum model;
    const double limit = model.momentum_limit();
    EXPECT_DOUBLE_EQ(limit, 8.0 * kPi * model.params().inertia);
    const Vector x = step(model, pendulum_state(kPi / 2, limit), Vector::Constant(1, 3.0), 0.03);
    EXPECT_LE(std::abs(x(1)), limit);
    const Vector y = step(model, pendulum_state(-kPi / 2, -limit), Vector::Constant(1, -3.0), 0.03);
    EXPECT_GE(y(1), -limit);
}

TEST(Integrator, NonFiniteStateThrows) {
    const Pendulum model;
    EXPECT_THROW(step(model, pendulum_state(0.0, 0.0), Vector::Constant(1, std::nan("")), 0.03),
                 NonFiniteStateError);
}

TEST(WrapAngle, MapsIntoHalfOpenInterval) {
    EXPECT_EQ(wrap_angle(0.0), 0.0);
    EXPECT_DOUBLE_EQ(wrap_angle(kPi), -kPi);
    EXPECT_DOUBLE_EQ(wrap_angle(-kPi), -kPi);
    EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-15);
    EXPECT_NEAR(wrap_angle(-5 * kPi / 2), -kPi / 2, 1e-14);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = d(rng);
        const double w = wrap_angle(a);
        EXPECT_GE(w, -kPi);
        EXPECT_LT(w, kPi);
        EXPECT_NEAR(std::sin(w), std::sin(a), 1e-12);
        EXPECT_NEAR(std::cos(w), std::cos(a), 1e-12);
    }
}

}  // namespace
}  // namespace ebac

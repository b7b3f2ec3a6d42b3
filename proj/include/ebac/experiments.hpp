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

#ifndef EBAC_EXPERIMENTS_HPP
#define EBAC_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "ebac/actor_critic.hpp"
#include "ebac/pendulum.hpp"
#include "ebac/policy.hpp"

namespace ebac {

/// rho(x, u) = Q (cos q - 1) - (R / J_p^2) p^2. Maximal (zero) at the upright rest state.
struct SwingupReward {
    double angle_weight = 25.0;
    double momentum_weight = 0.1;  // multiplied by 1/J_p^2
    double inertia = PendulumParams{}.inertia;

    double operator()(const Vector& x, const Vector& /*u*/) const;
};

double reward(const Vector& next_state, const Vector& input, const PendulumParams& params = {});

/// Everything needed to learn the swing-up: plant, policy, critic basis, reward.
struct SwingupTask {
    std::shared_ptr<const Pendulum> pendulum;
    EnergyBalancingPolicy policy;
    FourierBasis critic_basis;
    SwingupReward reward;
    Vector initial_state;  // hanging down at rest, (pi, 0)

    static SwingupTask create(const PendulumParams& params, double u_max, int basis_order = 3);
};

TrainingResult train_swingup(const SwingupTask& task, const LearnerConfig& config);

/// Per-trial statistics over replicate curves of equal length.
struct CurveAggregate {
    std::vector<double> mean;
    std::vector<double> stddev;  // sample standard deviation, 0 for a single curve
    std::vector<double> min;
    std::vector<double> max;
};

CurveAggregate aggregate_curves(const std::vector<std::vector<double>>& curves);

struct ReplicateRun {
    int index = 0;
    std::uint64_t seed = 0;
    TrainingResult result;
};

struct ReplicateSummary {
    std::vector<ReplicateRun> runs;  // in replicate order
    CurveAggregate aggregate;        // over non-diverged runs only
    int diverged = 0;
};

/// n independent runs with seeds config.seed + i, optionally on several threads.
/// Results never depend on the thread count.
ReplicateSummary run_replicates(const SwingupTask& task, const LearnerConfig& config,
                                int replicates, int jobs = 1);

struct EvaluationResult {
    std::vector<double> time;
    std::vector<Vector> states;
    std::vector<double> inputs;
    std::vector<double> velocity;  // qdot = dH/dp at each state
    bool success = false;
    int velocity_reversals = 0;  // sign changes of qdot along the rollout
};

/// Success thresholds applied over the final window of an evaluation rollout.
struct SuccessCriterion {
    double angle_tolerance = 0.2;   // |wrap(q)| [rad]
    double velocity_tolerance = std::numbers::pi;  // |qdot| [rad/s], i.e. |p| < 0.5 J_p 2 pi
    double final_window = 0.5;      // [s]
};

/**
 * Noise-free closed-loop rollout from x0 + (epsilon, 0) under the saturated
 * learned policy, sampled every sample_time.
 */
EvaluationResult evaluate_policy(const EnergyBalancingPolicy& policy, const PolicyParams& params,
                                 const Vector& x0, double epsilon, double duration,
                                 double sample_time = 0.03, int substeps = 20,
                                 const SuccessCriterion& criterion = {});

/// True when every sample in the final window is within both tolerances.
bool is_success(const EvaluationResult& rollout, const SuccessCriterion& criterion,
                double sample_time);

enum class FieldKind { Hd, Pd, SignK, SignHdDot, SatDiff };

std::string field_name(FieldKind kind);

/// Scalar field on a regular (q, p) grid. values[iq * p.size() + ip].
struct GridField {
    FieldKind kind = FieldKind::Hd;
    std::vector<double> q;
    std::vector<double> p;
    std::vector<double> values;

    double at(std::size_t iq, std::size_t ip) const { return values[iq * p.size() + ip]; }
};

/// Node coordinates lower + (upper - lower) * i/(n-1); the midpoint of a
/// symmetric interval is exactly 0 when n is odd.
std::vector<double> grid_axis(double lower, double upper, int resolution);

struct StabilityGrids {
    std::vector<GridField> fields;  // Hd, Pd, SignK, SignHdDot, SatDiff
    /// Node count of the 4-connected SatDiff == 0 component containing the origin node.
    std::size_t sat_region_nodes = 0;
    /// Largest r such that the (2r+1)^2 node square around the origin has SatDiff == 0.
    int sat_region_radius = 0;

    const GridField& field(FieldKind kind) const;
};

StabilityGrids stability_grids(const EnergyBalancingPolicy& policy, const PolicyParams& params,
                               int resolution = 101);

/// (f(x + h) - 2 f(x) + f(x - h)) / h^2.
double second_difference(const std::function<double(double)>& f, double x, double h);

struct StabilityCondition {
    std::string name;
    bool passed = false;
    int radius = 0;  // largest node radius around x* on which the condition holds
};

struct StabilityReport {
    std::vector<StabilityCondition> conditions;  // hd_positive, pd_minimum, k_positive, hd_dot_nonpositive
    int radius = 0;                              // min over conditions
    double pd_slope = 0.0;                       // dPd/dq at q = 0
    double pd_curvature = 0.0;                   // second difference at q = 0
    double hd_dot_at_goal = 0.0;
    int sat_region_radius = 0;

    bool all_passed() const;
};

/**
 * Numerical local-stability check around the upright state on the grid of the
 * given resolution (odd, so the origin is a node):
 *   Hd(x) - Hd(x*) > 0 for x != x*,
 *   Pd has zero slope, positive curvature and a strict minimum at q = 0,
 *   K(x) > 0,
 *   dHd/dt <= 0 with dHd/dt(x*) = 0.
 * Each condition reports the largest square neighbourhood (in grid nodes) on
 * which it holds; a condition passes when that radius is at least one node.
 */
StabilityReport local_stability_report(const EnergyBalancingPolicy& policy,
                                       const PolicyParams& params, int resolution = 101);

}  // namespace ebac

#endif  // EBAC_EXPERIMENTS_HPP

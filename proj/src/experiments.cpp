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

#include "ebac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <numbers>
#include <thread>

namespace ebac {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double SwingupReward::operator()(const Vector& x, const Vector&) const {
    const double p = x[1];
    return angle_weight * (std::cos(x[0]) - 1.0) - momentum_weight / (inertia * inertia) * p * p;
}

double reward(const Vector& next_state, const Vector& input, const PendulumParams& params) {
    return SwingupReward{25.0, 0.1, params.inertia}(next_state, input);
}

SwingupTask SwingupTask::create(const PendulumParams& params, double u_max, int basis_order) {
    auto pendulum = std::make_shared<const Pendulum>(params);
    EnergyBalancingPolicy policy = EnergyBalancingPolicy::with_default_bases(pendulum, u_max, basis_order);
    FourierBasis critic(basis_order, pendulum->state_domain());
    return SwingupTask{pendulum, std::move(policy), std::move(critic),
                       SwingupReward{25.0, 0.1, params.inertia},
                       pendulum_state(std::numbers::pi, 0.0)};
}

TrainingResult train_swingup(const SwingupTask& task, const LearnerConfig& config) {
    if (config.u_max != task.policy.u_max()) {
        throw std::invalid_argument("learner u_max differs from the policy's saturation bound");
    }
    return train(task.policy, task.critic_basis, task.reward, config, task.initial_state);
}

CurveAggregate aggregate_curves(const std::vector<std::vector<double>>& curves) {
    CurveAggregate agg;
    if (curves.empty()) return agg;
    const std::size_t length = curves.front().size();
    for (const auto& c : curves) {
        if (c.size() != length) throw std::invalid_argument("replicate curves differ in length");
    }
    const double n = static_cast<double>(curves.size());
    agg.mean.resize(length);
    agg.stddev.resize(length);
    agg.min.resize(length);
    agg.max.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
        double sum = 0.0;
        double lo = curves.front()[t];
        double hi = lo;
        for (const auto& c : curves) {
            sum += c[t];
            lo = std::min(lo, c[t]);
            hi = std::max(hi, c[t]);
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& c : curves) ss += (c[t] - mean) * (c[t] - mean);
        agg.mean[t] = std::clamp(mean, lo, hi);
        agg.stddev[t] = curves.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        agg.min[t] = lo;
        agg.max[t] = hi;
    }
    return agg;
}

ReplicateSummary run_replicates(const SwingupTask& task, const LearnerConfig& config,
                                int replicates, int jobs) {
    if (replicates < 1) throw std::invalid_argument("need at least one replicate");
    config.validate();

    ReplicateSummary summary;
    summary.runs.resize(static_cast<std::size_t>(replicates));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < replicates; i = next++) {
            LearnerConfig local = config;
            local.seed = config.seed + static_cast<std::uint64_t>(i);
            ReplicateRun& run = summary.runs[static_cast<std::size_t>(i)];
            run.index = i;
            run.seed = local.seed;
            run.result = train_swingup(task, local);
        }
    };
    const int threads = std::clamp(jobs, 1, replicates);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::vector<std::vector<double>> curves;
    for (const ReplicateRun& run : summary.runs) {
        if (run.result.diverged) {
            ++summary.diverged;
        } else {
            curves.push_back(run.result.scores);
        }
    }
    summary.aggregate = aggregate_curves(curves);
    return summary;
}

bool is_success(const EvaluationResult& rollout, const SuccessCriterion& criterion,
                double sample_time) {
    if (rollout.states.empty()) return false;
    const double end = rollout.time.back();
    const double start = end - criterion.final_window - 1e-9 * sample_time;
    bool any = false;
    for (std::size_t k = 0; k < rollout.states.size(); ++k) {
        if (rollout.time[k] < start) continue;
        any = true;
        if (std::abs(wrap_angle(rollout.states[k][0])) >= criterion.angle_tolerance ||
            std::abs(rollout.velocity[k]) >= criterion.velocity_tolerance) {
            return false;
        }
    }
    return any;
}

EvaluationResult evaluate_policy(const EnergyBalancingPolicy& policy, const PolicyParams& params,
                                 const Vector& x0, double epsilon, double duration,
                                 double sample_time, int substeps,
                                 const SuccessCriterion& criterion) {
    policy.check(params);
    if (!params.all_finite()) throw std::invalid_argument("policy parameters must be finite");
    const MechanicalSystem& system = policy.system();
    const int d = system.configuration_dim();
    const Rk4Integrator integrator{substeps};
    LearnerConfig timing;
    timing.sample_time = sample_time;
    timing.trial_duration = duration;
    const int steps = timing.steps_per_trial();

    EvaluationResult out;
    Vector start = x0;
    start[0] += epsilon;
    Vector x = system.project(start);
    auto record = [&](int k, const Vector& state) {
        out.time.push_back(k * sample_time);
        out.states.push_back(state);
        out.velocity.push_back(system.hamiltonian_gradient(state)[d]);
    };
    record(0, x);
    for (int k = 0; k < steps; ++k) {
        const Vector u = policy.saturate(policy.control(x, params));
        out.inputs.push_back(u[0]);
        x = integrator.step(system, x, u, sample_time);
        record(k + 1, x);
    }

    // Reversals of qdot, ignoring samples that sit at rest.
    double last = 0.0;
    for (double v : out.velocity) {
        if (std::abs(v) < 1e-3) continue;
        if (last != 0.0 && sign(v) != sign(last)) ++out.velocity_reversals;
        last = v;
    }
    out.success = is_success(out, criterion, sample_time);
    return out;
}

std::string field_name(FieldKind kind) {
    switch (kind) {
        case FieldKind::Hd: return "Hd";
        case FieldKind::Pd: return "Pd";
        case FieldKind::SignK: return "sgnK";
        case FieldKind::SignHdDot: return "sgnHdDot";
        case FieldKind::SatDiff: return "satDiff";
    }
    return "unknown";
}

std::vector<double> grid_axis(double lower, double upper, int resolution) {
    if (resolution < 2) throw std::invalid_argument("grid resolution must be at least 2");
    std::vector<double> axis(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double t = static_cast<double>(i) / (resolution - 1);
        axis[static_cast<std::size_t>(i)] = lower * (1.0 - t) + upper * t;
    }
    return axis;
}

const GridField& StabilityGrids::field(FieldKind kind) const {
    for (const GridField& f : fields) {
        if (f.kind == kind) return f;
    }
    throw std::out_of_range("no such grid field");
}

namespace {

double smallest_gain_eigenvalue(const Matrix& k) {
    if (k.rows() == 1) return k(0, 0);
    return Eigen::SelfAdjointEigenSolver<Matrix>(k, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

struct Grid {
    std::vector<double> q;
    std::vector<double> p;
    std::size_t centre_q = 0;
    std::size_t centre_p = 0;
};

Grid make_grid(const MechanicalSystem& system, int resolution) {
    if (system.state_dim() != 2) throw std::invalid_argument("grids need a two-dimensional state");
    const Box& box = system.state_domain();
    Grid grid{grid_axis(box[0].lower, box[0].upper, resolution),
              grid_axis(box[1].lower, box[1].upper, resolution)};
    auto nearest_zero = [](const std::vector<double>& axis) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < axis.size(); ++i) {
            if (std::abs(axis[i]) < std::abs(axis[best])) best = i;
        }
        return best;
    };
    grid.centre_q = nearest_zero(grid.q);
    grid.centre_p = nearest_zero(grid.p);
    return grid;
}

}  // namespace

StabilityGrids stability_grids(const EnergyBalancingPolicy& policy, const PolicyParams& params,
                               int resolution) {
    policy.check(params);
    if (!params.all_finite()) throw std::invalid_argument("policy parameters must be finite");
    const Grid grid = make_grid(policy.system(), resolution);
    const std::size_t nq = grid.q.size();
    const std::size_t np = grid.p.size();

    StabilityGrids out;
    for (FieldKind kind : {FieldKind::Hd, FieldKind::Pd, FieldKind::SignK, FieldKind::SignHdDot,
                           FieldKind::SatDiff}) {
        out.fields.push_back(GridField{kind, grid.q, grid.p, std::vector<double>(nq * np)});
    }

    for (std::size_t i = 0; i < nq; ++i) {
        const Vector q = Vector::Constant(1, grid.q[i]);
        const double pd = policy.desired_potential(q, params.xi);
        for (std::size_t j = 0; j < np; ++j) {
            const Vector x = pendulum_state(grid.q[i], grid.p[j]);
            const std::size_t at = i * np + j;
            const double rate = policy.hd_rate(x, params, false);
            const double rate_sat = policy.hd_rate(x, params, true);
            out.fields[0].values[at] = policy.desired_hamiltonian(x, params.xi);
            out.fields[1].values[at] = pd;
            out.fields[2].values[at] = sign(smallest_gain_eigenvalue(policy.damping_gain(x, params.psi)));
            out.fields[3].values[at] = sign(rate);
            out.fields[4].values[at] = sign(rate - rate_sat);
        }
    }

    // Connected SatDiff == 0 region around the origin node.
    const GridField& diff = out.fields[4];
    const std::size_t start = grid.centre_q * np + grid.centre_p;
    if (diff.values[start] == 0.0) {
        std::vector<char> seen(nq * np, 0);
        std::deque<std::size_t> queue{start};
        seen[start] = 1;
        while (!queue.empty()) {
            const std::size_t at = queue.front();
            queue.pop_front();
            ++out.sat_region_nodes;
            const std::size_t i = at / np;
            const std::size_t j = at % np;
            auto visit = [&](std::size_t ii, std::size_t jj) {
                const std::size_t k = ii * np + jj;
                if (!seen[k] && diff.values[k] == 0.0) {
                    seen[k] = 1;
                    queue.push_back(k);
                }
            };
            if (i > 0) visit(i - 1, j);
            if (i + 1 < nq) visit(i + 1, j);
            if (j > 0) visit(i, j - 1);
            if (j + 1 < np) visit(i, j + 1);
        }

        const int limit = static_cast<int>(std::min({grid.centre_q, nq - 1 - grid.centre_q,
                                                     grid.centre_p, np - 1 - grid.centre_p}));
        for (int r = 1; r <= limit; ++r) {
            bool ok = true;
            for (int di = -r; di <= r && ok; ++di) {
                for (int dj = -r; dj <= r && ok; ++dj) {
                    ok = diff.at(grid.centre_q + di, grid.centre_p + dj) == 0.0;
                }
            }
            if (!ok) break;
            out.sat_region_radius = r;
        }
    }
    return out;
}

double second_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

bool StabilityReport::all_passed() const {
    return !conditions.empty() &&
           std::all_of(conditions.begin(), conditions.end(),
                       [](const StabilityCondition& c) { return c.passed; });
}

StabilityReport local_stability_report(const EnergyBalancingPolicy& policy,
                                       const PolicyParams& params, int resolution) {
    const StabilityGrids grids = stability_grids(policy, params, resolution);
    const Grid grid = make_grid(policy.system(), resolution);
    const std::size_t cq = grid.centre_q;
    const std::size_t cp = grid.centre_p;
    const int limit = static_cast<int>(std::min({cq, grid.q.size() - 1 - cq, cp, grid.p.size() - 1 - cp}));

    StabilityReport report;
    report.sat_region_radius = grids.sat_region_radius;

    const Vector goal = pendulum_state(grid.q[cq], grid.p[cp]);
    report.hd_dot_at_goal = policy.hd_rate(goal, params, false);
    const Vector goal_q = goal.head(1);
    report.pd_slope = policy.desired_potential_gradient(goal_q, params.xi)[0];
    report.pd_curvature = second_difference(
        [&](double q) { return policy.desired_potential(Vector::Constant(1, q), params.xi); },
        goal[0], 1e-4);

    // Largest square radius on which node_ok holds for every node.
    auto radius_of = [&](auto&& node_ok) {
        int radius = 0;
        for (int r = 1; r <= limit; ++r) {
            bool ok = true;
            for (int di = -r; di <= r && ok; ++di) {
                for (int dj = -r; dj <= r && ok; ++dj) {
                    ok = node_ok(cq + di, cp + dj);
                }
            }
            if (!ok) break;
            radius = r;
        }
        return radius;
    };

    const GridField& hd = grids.field(FieldKind::Hd);
    const GridField& pd = grids.field(FieldKind::Pd);
    const GridField& sgn_k = grids.field(FieldKind::SignK);
    const double hd_goal = hd.at(cq, cp);
    const double pd_goal = pd.at(cq, cp);

    StabilityCondition hd_positive{"hd_positive", false,
                                   radius_of([&](std::size_t i, std::size_t j) {
                                       return (i == cq && j == cp) || hd.at(i, j) - hd_goal > 0.0;
                                   })};
    const bool pd_critical = std::abs(report.pd_slope) <= 1e-12 && report.pd_curvature > 0.0;
    StabilityCondition pd_minimum{"pd_minimum", false,
                                  pd_critical ? radius_of([&](std::size_t i, std::size_t j) {
                                      return i == cq || pd.at(i, j) - pd_goal > 0.0;
                                  })
                                              : 0};
    StabilityCondition k_positive{"k_positive", false,
                                  radius_of([&](std::size_t i, std::size_t j) {
                                      return sgn_k.at(i, j) > 0.0;
                                  })};
    const bool goal_rate_zero = std::abs(report.hd_dot_at_goal) <= 1e-12;
    StabilityCondition hd_dot{"hd_dot_nonpositive", false,
                              goal_rate_zero ? radius_of([&](std::size_t i, std::size_t j) {
                                  return grids.field(FieldKind::SignHdDot).at(i, j) <= 0.0;
                              })
                                             : 0};

    for (StabilityCondition* c : {&hd_positive, &pd_minimum, &k_positive, &hd_dot}) {
        c->passed = c->radius >= 1;
        report.conditions.push_back(*c);
    }
    report.radius = std::min({hd_positive.radius, pd_minimum.radius, k_positive.radius, hd_dot.radius});
    return report;
}

}  // namespace ebac

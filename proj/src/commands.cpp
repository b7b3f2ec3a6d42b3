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


#include "ebac/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <vector>

#include <CLI11.hpp>

#include "ebac/experiments.hpp"
#include "ebac/export.hpp"

namespace ebac {

namespace {

namespace fs = std::filesystem;

std::string in_dir(const RunConfig& config, const std::string& name) {
    return (fs::path(config.output_dir) / name).string();
}

std::string params_path(const CommandOptions& options, const RunConfig& config) {
    return options.params_path ? *options.params_path : in_dir(config, "params.json");
}

SwingupTask make_task(const RunConfig& config) {
    return SwingupTask::create(config.pendulum, config.learner.u_max);
}

int guarded(const char* command, std::ostream& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << command << ": configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        log << command << ": error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

RunConfig resolve_config(const CommandOptions& options) {
    RunConfig config = options.config_path ? load_run_config(*options.config_path) : RunConfig{};
    if (options.seed) config.learner.seed = *options.seed;
    if (options.trials) config.learner.trials = *options.trials;
    if (options.replicates) config.replicates = *options.replicates;
    if (options.resolution) config.resolution = *options.resolution;
    if (options.jobs) config.jobs = *options.jobs;
    if (options.epsilon) config.epsilon = *options.epsilon;
    if (options.out) config.output_dir = *options.out;
    config.validate();
    return config;
}

int cmd_train(const CommandOptions& options, std::ostream& log) {
    return guarded("train", log, [&] {
        const RunConfig config = resolve_config(options);
        const SwingupTask task = make_task(config);
        const TrainingResult result = train_swingup(task, config.learner);

        write_curve_csv(in_dir(config, "curve.csv"), result.scores);
        write_parameters(in_dir(config, "params.json"), task.policy, result.params,
                         result.critic_theta, task.critic_basis);
        write_metadata(in_dir(config, "train_metadata.json"), "train", config,
                       {"curve.csv", "params.json"},
                       {{"trials_completed", result.scores.size()},
                        {"diverged", result.diverged},
                        {"diverged_trial", result.diverged_trial},
                        {"divergence_reason", result.divergence_reason},
                        {"clamped_states", result.clamped_states}});

        if (result.diverged) {
            log << "train: diverged in trial " << result.diverged_trial << ": "
                << result.divergence_reason << '\n';
            return static_cast<int>(kExitDiverged);
        }
        log << "train: " << result.scores.size() << " trials, final score "
            << (result.scores.empty() ? 0.0 : result.scores.back()) << ", wrote "
            << config.output_dir << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_replicate(const CommandOptions& options, std::ostream& log) {
    return guarded("replicate", log, [&] {
        const RunConfig config = resolve_config(options);
        const SwingupTask task = make_task(config);
        const ReplicateSummary summary =
            run_replicates(task, config.learner, config.replicates, config.effective_jobs());

        std::vector<std::string> files;
        for (const auto& run : summary.runs) {
            char stem[32];
            std::snprintf(stem, sizeof stem, "replicate_%03d", run.index);
            const std::string curve = std::string(stem) + "_curve.csv";
            const std::string params = std::string(stem) + "_params.json";
            write_curve_csv(in_dir(config, curve), run.result.scores);
            write_parameters(in_dir(config, params), task.policy, run.result.params,
                             run.result.critic_theta, task.critic_basis);
            files.push_back(curve);
            files.push_back(params);
        }
        write_replicates_csv(in_dir(config, "replicates.csv"), summary);
        files.push_back("replicates.csv");
        if (!summary.aggregate.mean.empty()) {
            write_aggregate_csv(in_dir(config, "aggregate.csv"), summary.aggregate);
            files.push_back("aggregate.csv");
        }
        write_metadata(in_dir(config, "replicate_metadata.json"), "replicate", config, files,
                       {{"replicates", config.replicates},
                        {"diverged", summary.diverged},
                        {"replicate_seeds", "seed + replicate index"}});

        log << "replicate: " << summary.runs.size() << " runs, " << summary.diverged
            << " diverged, wrote " << config.output_dir << '\n';
        return static_cast<int>(summary.diverged > 0 ? kExitDiverged : kExitOk);
    });
}

int cmd_eval(const CommandOptions& options, std::ostream& log) {
    return guarded("eval", log, [&] {
        const RunConfig config = resolve_config(options);
        const SwingupTask task = make_task(config);
        const std::string source = params_path(options, config);
        const ParameterFile file = read_parameters(source, task.policy);

        const SuccessCriterion criterion;
        const EvaluationResult rollout = evaluate_policy(
            task.policy, file.params, task.initial_state, config.epsilon, config.eval_duration,
            config.learner.sample_time, config.learner.substeps, criterion);

        write_trajectory_csv(in_dir(config, "trajectory.csv"), rollout);
        write_metadata(in_dir(config, "eval_metadata.json"), "eval", config, {"trajectory.csv"},
                       {{"params_file", source},
                        {"success", rollout.success},
                        {"velocity_reversals", rollout.velocity_reversals},
                        {"angle_tolerance", criterion.angle_tolerance},
                        {"velocity_tolerance", criterion.velocity_tolerance},
                        {"final_window", criterion.final_window}});

        log << "eval: " << (rollout.success ? "success" : "failure") << " ("
            << rollout.velocity_reversals << " velocity reversals), wrote "
            << config.output_dir << '\n';
        return static_cast<int>(rollout.success ? kExitOk : kExitEvaluationFailed);
    });
}

int cmd_grids(const CommandOptions& options, std::ostream& log) {
    return guarded("grids", log, [&] {
        const RunConfig config = resolve_config(options);
        const SwingupTask task = make_task(config);
        const std::string source = params_path(options, config);
        const ParameterFile file = read_parameters(source, task.policy);

        const StabilityGrids grids = stability_grids(task.policy, file.params, config.resolution);
        const StabilityReport report =
            local_stability_report(task.policy, file.params, config.resolution);

        std::vector<std::string> files;
        for (const auto& field : grids.fields) {
            const std::string name = "grid_" + field_name(field.kind) + ".csv";
            write_grid_csv(in_dir(config, name), field);
            files.push_back(name);
        }
        nlohmann::json report_doc = stability_report_json(report);
        report_doc["sat_region_nodes"] = grids.sat_region_nodes;
        {
            std::ofstream out(in_dir(config, "stability_report.json"));
            if (!out) throw std::runtime_error("cannot write stability_report.json");
            out << report_doc.dump(2) << '\n';
        }
        files.push_back("stability_report.json");
        write_metadata(in_dir(config, "grids_metadata.json"), "grids", config, files,
                       {{"params_file", source}});

        log << "grids: " << config.resolution << "x" << config.resolution
            << " nodes, local stability " << (report.all_passed() ? "passed" : "failed")
            << " (radius " << report.radius << "), wrote " << config.output_dir << '\n';
        return static_cast<int>(kExitOk);
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy-balancing actor-critic for port-Hamiltonian systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    CommandOptions options;
    std::string config_path, out_dir, params;
    std::uint64_t seed = 0;
    int trials = 0, replicates = 0, resolution = 0, jobs = 0;
    double epsilon = 0.0;

    struct Entry {
        const char* name;
        const char* help;
        int (*run)(const CommandOptions&, std::ostream&);
        bool needs_params;
    };
    const Entry entries[] = {
        {"train", "Learn the swing-up once and write curve, parameters and metadata", cmd_train,
         false},
        {"replicate", "Repeat training with seeds seed+i and aggregate the curves", cmd_replicate,
         false},
        {"eval", "Roll out learned parameters from the perturbed hanging state", cmd_eval, true},
        {"grids", "Write stability grids and the local stability report", cmd_grids, true},
    };

    std::vector<std::pair<CLI::App*, const Entry*>> subcommands;
    for (const auto& entry : entries) {
        CLI::App* sub = app.add_subcommand(entry.name, entry.help);
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "Base random seed");
        sub->add_option("--trials", trials, "Trials per run");
        sub->add_option("--replicates", replicates, "Independent runs for replicate");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--resolution", resolution, "Grid nodes per axis (odd)");
        sub->add_option("--epsilon", epsilon, "Initial angle perturbation for eval [rad]");
        sub->add_option("--jobs", jobs, "Worker threads for replicate (0 = all cores)");
        if (entry.needs_params) {
            sub->add_option("--params", params, "Parameter file (default <out>/params.json)")
                ->check(CLI::ExistingFile);
        }
        subcommands.emplace_back(sub, &entry);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitConfigError);
    }

    for (const auto& [sub, entry] : subcommands) {
        if (!sub->parsed()) continue;
        auto given = [sub](const char* flag) { return sub->count(flag) > 0; };
        if (given("--config")) options.config_path = config_path;
        if (given("--seed")) options.seed = seed;
        if (given("--trials")) options.trials = trials;
        if (given("--replicates")) options.replicates = replicates;
        if (given("--out")) options.out = out_dir;
        if (given("--resolution")) options.resolution = resolution;
        if (given("--epsilon")) options.epsilon = epsilon;
        if (given("--jobs")) options.jobs = jobs;
        if (entry->needs_params && given("--params")) options.params_path = params;
        return entry->run(options, err);
    }
    return static_cast<int>(kExitFailure);
}

}  // namespace ebac

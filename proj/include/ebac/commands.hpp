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


#ifndef EBAC_COMMANDS_HPP
#define EBAC_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ebac/run_config.hpp"

namespace ebac {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfigError = 2,
    kExitDiverged = 3,
    kExitEvaluationFailed = 4,
};

/// Config file path plus command-line overrides.
struct CommandOptions {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> replicates;
    std::optional<int> resolution;
    std::optional<int> jobs;
    std::optional<double> epsilon;
    std::optional<std::string> out;
    std::optional<std::string> params_path;  // eval and grids; defaults to <out>/params.json
};

/// Defaults, then the config file, then overrides. Throws ConfigError.
RunConfig resolve_config(const CommandOptions& options);

int cmd_train(const CommandOptions& options, std::ostream& log);
int cmd_replicate(const CommandOptions& options, std::ostream& log);
int cmd_eval(const CommandOptions& options, std::ostream& log);
int cmd_grids(const CommandOptions& options, std::ostream& log);

/// Full command line front end; returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ebac

#endif  // EBAC_COMMANDS_HPP

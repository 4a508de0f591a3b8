// Copyright 2026 The qctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "qctl/io.hpp"

namespace qctl::cli {

/// Exit codes: 0 success, 2 validation error (all schema problems listed on
/// stderr), 3 numerical failure (diagnostic JSON written when possible).
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 2;
inline constexpr int kNumericalError = 3;

std::vector<std::string> known_commands();

/// Validate and run one batch command, writing artifacts into out_dir.
int dispatch(const std::string& command, const io::json& config,
             const std::string& out_dir);

/// The slh subcommand takes its inputs as files rather than one config.
int run_slh(const std::string& components_path, const std::string& network_path,
            const std::string& emit, const std::string& out_dir);

/// Schema plus a worked example config for a command; throws on unknown.
std::string describe(const std::string& command);

/// Parallelism cap: QCTL_THREADS when set, else hardware concurrency.
int thread_budget();

}  // namespace qctl::cli

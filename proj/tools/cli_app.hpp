// Copyright 2026 The mobopc Authors
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

#ifndef MOBOPC_TOOLS_CLI_APP_HPP
#define MOBOPC_TOOLS_CLI_APP_HPP

namespace mobopc::cli {

/// Entry point for the `mobopc` command-line tool. Exit codes: 0 success,
/// 1 runtime failure (partial outputs flagged), 2 invalid configuration or
/// usage.
int run_cli(int argc, char** argv);

}  // namespace mobopc::cli

#endif  // MOBOPC_TOOLS_CLI_APP_HPP

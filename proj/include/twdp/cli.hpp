// SPDX-License-Identifier: Apache-2.0
//
// twdp-sim: sum-of-sinusoids simulator for TWDP fading channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef TWDP_CLI_HPP
#define TWDP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace twdp
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1; // validation failed, or a run-time error while producing output
inline constexpr int exit_usage = 2;   // unknown subcommand or flag, bad flag value, bad config

/// Runs one command line (program name excluded). Series and reports go to `out` unless --out names a
/// file; the resolved scenario and diagnostics go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace twdp

#endif

// Copyright 2026 The Restless Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Command-line front end. Each subcommand writes its artifacts into the
 * --out directory:
 *
 *   calibrate      calibrate.json
 *   leakage-trace  leakage_trace.{csv,svg,json}
 *   fine-amp       fine_amp.{csv,svg,json}
 *   iterate        iterate.{csv,svg,json}
 *   orbit          orbit.{csv,svg,json}, plus orbit_sweep.{csv,svg,json}
 *                  when --depths is given
 *
 * Flags take nanoseconds, microseconds and megahertz.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "restless/experiments.hpp"

namespace restless::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// "lo:hi:count" or a comma-separated list. Throws ValidationError.
std::vector<double> parse_beta_grid(const std::string &text);

/// beta_prefactor,r_c,f_seq,stderr,mode
void write_orbit_csv(std::ostream &out, const OrbitReport &report);
/// depth,beta_prefactor,r_c,f_seq,stderr,mode
void write_depth_sweep_csv(std::ostream &out, const DepthSweep &sweep, ExecutionMode mode);
/// iteration,amplitude,infidelity,normalized_infidelity,leakage,delta_theta_rad,delta_theta_fraction,fit_converged
void write_iterate_csv(std::ostream &out, const IterativeReport &report);

} // namespace restless::cli

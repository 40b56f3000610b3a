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
 * JSON run records. Keys keep insertion order so emitted documents are
 * stable. Everything that depends on wall-clock time lives under "timing",
 * outside the "result" payload, so identical inputs give identical results.
 */

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "restless/experiments.hpp"

namespace restless {

using Json = nlohmann::ordered_json;

inline constexpr int kRunRecordSchemaVersion = 1;

/// Git blob hash (SHA-1 of "blob <size>\0<content>") in lowercase hex.
std::string git_blob_hash(const std::string &content);

Json to_json(const TransmonModel &model);
Json to_json(const DragPulse &pulse);
Json to_json(const CalibratedPulse &pulse);
Json to_json(const TransitionMatrix &t);
Json to_json(const ProbabilitySeries &series);
Json to_json(const FitResult &fit);
Json to_json(const FineAmplitudeFit &fit);
Json to_json(const RbFit &fit);
Json to_json(const FineAmplitudeReport &report);
Json to_json(const IterativeReport &report);
Json to_json(const OrbitReport &report);
Json to_json(const DepthSweep &sweep);
/// Summary of the trace (window, final-quartile mean, length); the full
/// trace goes to CSV.
Json to_json(const BuildupReport &report);
Json to_json(const ExperimentConfig &config);

/// {schema_version, command, config, seed, input_hash, result, timing}.
/// input_hash is the git blob hash of the compact config dump.
Json make_run_record(const std::string &command, const Json &config, std::uint64_t seed,
                     const Json &result, double wall_seconds);

} // namespace restless

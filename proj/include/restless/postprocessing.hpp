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
 * Observables computed from shot streams and the two curve fits
 * (fine-amplitude oscillation and randomized-benchmarking decay).
 *
 * All estimators accept several streams and pool their shots; a single
 * stream is the one-element case.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "restless/fitting.hpp"
#include "restless/restless_core.hpp"

namespace restless {

enum class ExecutionMode : std::uint8_t { Restless, Standard };

std::string_view to_string(ExecutionMode mode);
/// Accepts "restless" or "standard"; throws ValidationError otherwise.
ExecutionMode parse_execution_mode(std::string_view text);
/// Identity for restless execution, reset for standard execution.
PostMeasurementMatrix post_measurement_for(ExecutionMode mode);

/// Per-circuit probability estimates.
struct ProbabilitySeries {
    std::vector<double> p;
    /// sqrt(p (1 - p) / count)
    std::vector<double> standard_error;
    std::vector<std::int64_t> count;

    std::size_t size() const { return p.size(); }
    void push(std::int64_t hits, std::int64_t total);
};

struct XorOptions {
    /// Compare the very first outcome against the known ground-state start.
    /// When false, zeta = 0 is left out of circuit 0's estimate.
    bool compare_first_to_ground = true;
};

/// Fraction of shots of circuit k whose outcome differs from the previous
/// outcome in execution order. Throws ProcessingError on non-binary outcomes.
ProbabilitySeries xor_state_change(const std::vector<ShotStream> &streams,
                                   const XorOptions &options = {});

/// 1 - xor_state_change, per circuit.
ProbabilitySeries restless_sequence_fidelity(const std::vector<ShotStream> &streams,
                                             const XorOptions &options = {});

/// Restless: Pr[outcome differs from previous]. Standard: Pr[outcome = '1'].
ProbabilitySeries compose_to_x_sequence_fidelity(const std::vector<ShotStream> &streams,
                                                 ExecutionMode mode,
                                                 const XorOptions &options = {});

/// Per-circuit fraction of '0' outcomes.
ProbabilitySeries ground_state_probability(const std::vector<ShotStream> &streams);

/// Per-circuit fraction of '1' outcomes. Throws ProcessingError on non-binary outcomes.
ProbabilitySeries excited_state_probability(const std::vector<ShotStream> &streams);

/// Moving-averaged |2> population per execution index.
struct LeakageTrace {
    int window = 16;
    /// Mean over realizations of the windowed |2> fraction.
    std::vector<double> p2;
    /// Standard deviation of that mean across realizations.
    std::vector<double> sem;

    /// Mean of p2 over the last quarter of the execution indices.
    double final_quartile_mean() const;
};

/// p2_zeta = n2 / R averaged over the trailing window [zeta - w + 1, zeta]
/// (truncated at zeta = 0). Throws ProcessingError without basis-state records.
LeakageTrace leakage_trace(const std::vector<ShotStream> &streams, int window = 16);

/// Fit of a cos((theta_t + dtheta) n - pi / 2) + b.
struct FineAmplitudeFit {
    FitResult fit;
    double a = 0.0;
    double b = 0.0;
    double delta_theta = 0.0;        ///< radians
    double delta_theta_stderr = 0.0; ///< radians
    double fraction = 0.0;           ///< delta_theta / theta_t
    double fraction_stderr = 0.0;
    /// True when a was pinned to kMaxFineAmplitudeContrast.
    bool contrast_fixed = false;
    bool converged() const { return fit.converged; }
};

/// Largest oscillation amplitude a probability signal can carry.
inline constexpr double kMaxFineAmplitudeContrast = 0.5;
/// Free fits with a smaller contrast are treated as unresolved.
inline constexpr double kMinFineAmplitudeContrast = 0.1;

/// Series index n is the number of repeated gates. The fit is seeded from a
/// 100-point grid of dtheta in [-0.3, 0.3] rad and reported with a >= 0.
/// Near theta_t = pi and small dtheta only the product a * dtheta is
/// identifiable; when the free fit fails, returns a outside
/// [kMinFineAmplitudeContrast, kMaxFineAmplitudeContrast] or is not a
/// significant improvement, a is pinned to the upper bound and (b, dtheta) refit.
FineAmplitudeFit fit_fine_amplitude(const ProbabilitySeries &series, double target_angle);
FineAmplitudeFit fit_fine_amplitude(const std::vector<double> &values, double target_angle);

/// Fit of A alpha^m + B.
struct RbFit {
    FitResult fit;
    double amplitude = 0.0; ///< A
    double alpha = 0.0;
    double offset = 0.0; ///< B
    double amplitude_stderr = 0.0;
    double alpha_stderr = 0.0;
    double offset_stderr = 0.0;
    /// False when the data carry no decay (constant values) so A and B are inseparable.
    bool identifiable = true;
    bool converged() const { return fit.converged && identifiable; }
};

/// Needs at least three distinct depths. Converged fits have alpha in (0, 1].
RbFit fit_rb_decay(const std::vector<double> &depths, const std::vector<double> &values);

/// CSV with header circuit_index,n,p,stderr.
void write_probability_series_csv(std::ostream &out, const ProbabilitySeries &series);
/// CSV with header zeta,p2_mean,p2_sem.
void write_leakage_trace_csv(std::ostream &out, const LeakageTrace &trace);

} // namespace restless

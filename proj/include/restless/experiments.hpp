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
 * End-to-end experiments: leakage build-up, fine-amplitude calibration
 * (single run and iterative) and ORBIT over a DRAG-coefficient grid.
 */

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "restless/channels.hpp"
#include "restless/clifford.hpp"
#include "restless/postprocessing.hpp"
#include "restless/pulse_engine.hpp"
#include "restless/restless_core.hpp"

namespace restless {

/// SplitMix64 finalizer of (seed, stream); used to derive per-item seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// `count` equally spaced prefactors in [lo, hi].
std::vector<double> default_beta_grid(int count = 30, double lo = -2.0, double hi = 2.0);

struct ExperimentConfig {
    TransmonModel model = TransmonModel::standard();
    double duration = 10e-9; ///< seconds
    double rotation_error = 0.0;
    ExecutionMode mode = ExecutionMode::Restless;
    bool damping = false;
    DampingParams damping_params{};
    int shots = 1000;
    int realizations = 512;
    std::uint64_t seed = 0;

    int circuit_count = 17; ///< fine-amplitude circuits, n = 0 .. K-1
    int window = 16;        ///< leakage-trace moving-average window

    int depth = 120; ///< ORBIT m; sequences hold m + 1 Cliffords
    int sequences = 100;
    ComposeTarget compose_target = ComposeTarget::Identity;
    std::vector<double> beta_grid = default_beta_grid();

    CalibrationOptions calibration{};
    int jobs = 1;

    /// Throws ValidationError on non-positive counts or duration.
    void validate() const;
};

/// Thread-safe memo of calibrate_pulse results.
class CalibrationCache {
  public:
    CalibratedPulse get(const TransmonModel &model, double duration, double target_angle,
                        RotationAxis axis, double rotation_error,
                        const CalibrationOptions &options);
    void clear();

    static CalibrationCache &shared();

  private:
    using Key = std::tuple<double, double, double, double, double, int, double, bool, int, double>;
    std::mutex mutex_;
    std::map<Key, CalibratedPulse> entries_;
};

/// Ideal sqrt(X) = R_x(pi / 2) embedded in the qutrit.
QutritMatrix ideal_sqrt_x();

using GateSequence = std::vector<QutritChannel>;

/// C_k = U_X^k sqrt(X) for k = 0 .. K-1. The damping channel, when given,
/// follows every leaky X gate; the ideal sqrt(X) is not damped.
std::vector<GateSequence> fine_amplitude_circuits(const QutritMatrix &x_unitary, int circuit_count,
                                                  const QutritChannel *damping = nullptr);

/// Transition matrices paired with the post-measurement matrix of `mode`.
std::vector<CircuitStep> to_circuit_steps(const std::vector<TransitionMatrix> &transitions,
                                          ExecutionMode mode);

struct FineAmplitudeReport {
    CalibratedPulse pulse;
    std::vector<TransitionMatrix> transitions;
    ProbabilitySeries series;
    FineAmplitudeFit fit;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

/// Calibrates an x pulse against R_x(pi (1 + epsilon)) and measures it.
FineAmplitudeReport run_fine_amplitude(const ExperimentConfig &config);

/// Measures a given x pulse with a single chain of `shots` repetitions.
/// The observable is the XOR signal for restless execution and Pr['1'] for
/// standard execution.
FineAmplitudeReport run_fine_amplitude(const ExperimentConfig &config, const DragPulse &pulse);

struct IterationRecord {
    int iteration = 0;
    double amplitude = 0.0;
    double infidelity = 0.0;            ///< E = 1 - Phi against R_x(pi)
    double normalized_infidelity = 0.0; ///< (E - E_opt) / E_opt
    double leakage = 0.0;
    double delta_theta = 0.0;
    double fraction = 0.0;
    double fraction_stderr = 0.0;
    bool fit_converged = false;
};

struct IterativeReport {
    double optimal_infidelity = 0.0; ///< E_opt of the epsilon = 0 pulse
    std::vector<IterationRecord> iterations;
    bool diverged = false;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

/// Records iterations 0 .. `iterations`; record i describes the pulse after i
/// amplitude updates a <- a theta_t / (theta_t + dtheta).
IterativeReport iterative_calibration(const ExperimentConfig &config, int iterations);

/// r_c = 1 - ((2 Phi + 1) / 3)^N_c. Throws DomainError for Phi outside [0, 1].
double error_per_clifford(double mean_process_fidelity,
                          double generators_per_clifford =
                              CliffordGroup::instance().mean_generator_count());

struct OrbitPoint {
    double beta_prefactor = 0.0;
    double mean_fidelity = 0.0; ///< Phi averaged over the four generators
    double mean_leakage = 0.0;
    double error_per_clifford = 0.0;
    double f_seq = 0.0;
    double stderr_f_seq = 0.0; ///< spread over sequences / sqrt(sequences)
};

struct OrbitReport {
    ExecutionMode mode = ExecutionMode::Restless;
    ComposeTarget compose_target = ComposeTarget::Identity;
    int depth = 0;
    int sequences = 0;
    double generators_per_clifford = 0.0;
    std::vector<OrbitPoint> points;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;

    /// Point with the largest error per Clifford.
    const OrbitPoint &worst() const;
    /// Point with the smallest error per Clifford.
    const OrbitPoint &best() const;
};

/// Sequence fidelity of one circuit set for the mode and target in `config`.
ProbabilitySeries orbit_observable(const std::vector<ShotStream> &streams, ExecutionMode mode,
                                   ComposeTarget target);

OrbitReport run_orbit(const ExperimentConfig &config);

/// f_seq against depth for every prefactor in the config's beta grid, with
/// an A alpha^m + B fit per prefactor.
struct DepthSweep {
    std::vector<int> depths;
    /// reports[d] is run_orbit at depths[d].
    std::vector<OrbitReport> reports;
    /// fits[b] belongs to beta_grid[b].
    std::vector<RbFit> fits;
};

/// Needs at least three distinct depths.
DepthSweep orbit_depth_sweep(const ExperimentConfig &config, const std::vector<int> &depths);

/// -2 A m (1 - 2 r_c)^(m - 1). Throws DomainError for r_c outside [0, 1/2) or m < 1.
double orbit_sensitivity(double amplitude, double error_per_clifford, double depth);

struct SensitivityPeak {
    bool defined = false;     ///< false for r_c = 0
    double depth = 0.0;       ///< m* = -1 / ln(1 - 2 r_c)
    double value = 0.0;       ///< sensitivity at m*
    double approximation = 0.0; ///< -A / (e r_c)
};

SensitivityPeak orbit_sensitivity_peak(double amplitude, double error_per_clifford);

struct BuildupReport {
    CalibratedPulse pulse;
    LeakageTrace trace;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

/// R realizations of the K-circuit fine-amplitude chain with `shots` shots each.
BuildupReport leakage_buildup_experiment(const ExperimentConfig &config);

/// Same as above for an explicit set of transition matrices.
LeakageTrace leakage_buildup(const std::vector<TransitionMatrix> &transitions,
                             const ExperimentConfig &config);

} // namespace restless

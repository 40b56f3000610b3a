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

#include "restless/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>

#include "restless/parallel.hpp"

namespace restless {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::optional<QutritChannel> damping_channel(const ExperimentConfig &config) {
    if (!config.damping) {
        return std::nullopt;
    }
    return amplitude_damping(config.duration, config.damping_params);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> default_beta_grid(int count, double lo, double hi) {
    if (count < 1) {
        throw ValidationError("beta grid needs at least one point");
    }
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid[static_cast<std::size_t>(i)] =
            count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    return grid;
}

void ExperimentConfig::validate() const {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw ValidationError("pulse duration must be positive");
    }
    if (!std::isfinite(rotation_error)) {
        throw ValidationError("rotation error must be finite");
    }
    if (shots < 1 || realizations < 1 || circuit_count < 1 || window < 1 || sequences < 1) {
        throw ValidationError("shots, realizations, circuits, window and sequences must be >= 1");
    }
    if (depth < 0) {
        throw ValidationError("ORBIT depth must be non-negative");
    }
    if (beta_grid.empty()) {
        throw ValidationError("beta grid must not be empty");
    }
}

CalibratedPulse CalibrationCache::get(const TransmonModel &model, double duration,
                                      double target_angle, RotationAxis axis,
                                      double rotation_error, const CalibrationOptions &options) {
    const Key key{model.qubit_frequency(),
                  model.anharmonicity(),
                  model.coupling_rate(),
                  duration,
                  target_angle,
                  static_cast<int>(axis),
                  rotation_error,
                  options.propagator.rotating_wave,
                  options.propagator.steps,
                  options.simplex_tolerance};
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            return it->second;
        }
    }
    CalibratedPulse result =
        calibrate_pulse(model, duration, target_angle, axis, rotation_error, options);
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.emplace(key, result);
    return result;
}

void CalibrationCache::clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.clear();
}

CalibrationCache &CalibrationCache::shared() {
    static CalibrationCache cache;
    return cache;
}

QutritMatrix ideal_sqrt_x() { return embed(rotation(RotationAxis::X, kPi / 2.0)); }

std::vector<GateSequence> fine_amplitude_circuits(const QutritMatrix &x_unitary, int circuit_count,
                                                  const QutritChannel *damping) {
    if (circuit_count < 1) {
        throw ValidationError("fine_amplitude_circuits: need at least one circuit");
    }
    const QutritChannel sqrt_x = unitary_channel(ideal_sqrt_x());
    const QutritChannel x_gate = unitary_channel(x_unitary);
    std::vector<GateSequence> circuits;
    circuits.reserve(static_cast<std::size_t>(circuit_count));
    for (int k = 0; k < circuit_count; ++k) {
        GateSequence gates{sqrt_x};
        for (int i = 0; i < k; ++i) {
            gates.push_back(x_gate);
            if (damping != nullptr) {
                gates.push_back(*damping);
            }
        }
        circuits.push_back(std::move(gates));
    }
    return circuits;
}

std::vector<CircuitStep> to_circuit_steps(const std::vector<TransitionMatrix> &transitions,
                                          ExecutionMode mode) {
    const PostMeasurementMatrix post = post_measurement_for(mode);
    std::vector<CircuitStep> steps;
    steps.reserve(transitions.size());
    for (const auto &t : transitions) {
        steps.push_back(CircuitStep{t, post});
    }
    return steps;
}

namespace {

std::vector<TransitionMatrix> fine_amplitude_transitions(const ExperimentConfig &config,
                                                         const QutritMatrix &x_unitary) {
    const auto damping = damping_channel(config);
    const auto circuits =
        fine_amplitude_circuits(x_unitary, config.circuit_count, damping ? &*damping : nullptr);
    std::vector<TransitionMatrix> out;
    out.reserve(circuits.size());
    for (const auto &c : circuits) {
        out.push_back(transition_matrix(c));
    }
    return out;
}

} // namespace

FineAmplitudeReport run_fine_amplitude(const ExperimentConfig &config) {
    config.validate();
    const CalibratedPulse calibrated =
        CalibrationCache::shared().get(config.model, config.duration, kPi, RotationAxis::X,
                                       config.rotation_error, config.calibration);
    return run_fine_amplitude(config, calibrated.pulse);
}

FineAmplitudeReport run_fine_amplitude(const ExperimentConfig &config, const DragPulse &pulse) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    FineAmplitudeReport report;
    report.pulse = evaluate_pulse(config.model, pulse, config.calibration.propagator);
    report.transitions = fine_amplitude_transitions(config, report.pulse.unitary);
    report.seed = config.seed;

    const auto steps = to_circuit_steps(report.transitions, config.mode);
    const std::vector<ShotStream> streams{
        run(steps, config.shots, default_assignment(), RunOptions{config.seed, 0, false})};
    report.series = config.mode == ExecutionMode::Restless ? xor_state_change(streams)
                                                           : excited_state_probability(streams);
    report.fit = fit_fine_amplitude(report.series, kPi);
    report.wall_seconds = seconds_since(start);
    return report;
}

IterativeReport iterative_calibration(const ExperimentConfig &config, int iterations) {
    config.validate();
    if (iterations < 1) {
        throw ValidationError("iterative_calibration: iterations must be >= 1");
    }
    const auto start = std::chrono::steady_clock::now();
    auto &cache = CalibrationCache::shared();
    IterativeReport report;
    report.seed = config.seed;
    report.optimal_infidelity =
        cache.get(config.model, config.duration, kPi, RotationAxis::X, 0.0, config.calibration)
            .infidelity();
    DragPulse pulse = cache
                          .get(config.model, config.duration, kPi, RotationAxis::X,
                               config.rotation_error, config.calibration)
                          .pulse;
    const QubitMatrix target = rotation(RotationAxis::X, kPi);

    int rising = 0;
    for (int i = 0; i <= iterations; ++i) {
        IterationRecord rec;
        rec.iteration = i;
        rec.amplitude = pulse.amplitude;

        ExperimentConfig run_config = config;
        run_config.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
        const FineAmplitudeReport measured = run_fine_amplitude(run_config, pulse);

        rec.infidelity = 1.0 - process_fidelity(measured.pulse.unitary, target);
        rec.normalized_infidelity =
            (rec.infidelity - report.optimal_infidelity) / report.optimal_infidelity;
        rec.leakage = measured.pulse.leakage;
        rec.delta_theta = measured.fit.delta_theta;
        rec.fraction = measured.fit.fraction;
        rec.fraction_stderr = measured.fit.fraction_stderr;
        rec.fit_converged = measured.fit.converged();

        if (!report.iterations.empty()) {
            // E_norm starts at 0 for an ideal pulse; the optimum's own scale (1)
            // then serves as the reference.
            const double first =
                std::max(std::abs(report.iterations.front().normalized_infidelity), 1.0);
            const bool grew = rec.normalized_infidelity > report.iterations.back().normalized_infidelity;
            rising = grew && rec.normalized_infidelity > 10.0 * first ? rising + 1 : 0;
            if (rising >= 3) {
                report.diverged = true;
            }
        }
        report.iterations.push_back(rec);

        if (rec.fit_converged) {
            pulse.amplitude *= kPi / (kPi + rec.delta_theta);
        }
    }
    report.wall_seconds = seconds_since(start);
    return report;
}

double error_per_clifford(double mean_process_fidelity, double generators_per_clifford) {
    if (!(mean_process_fidelity >= 0.0 && mean_process_fidelity <= 1.0)) {
        throw DomainError("error_per_clifford: fidelity must be in [0, 1]");
    }
    const double average_gate_fidelity = (2.0 * mean_process_fidelity + 1.0) / 3.0;
    return 1.0 - std::pow(average_gate_fidelity, generators_per_clifford);
}

const OrbitPoint &OrbitReport::worst() const {
    return *std::max_element(points.begin(), points.end(), [](const auto &a, const auto &b) {
        return a.error_per_clifford < b.error_per_clifford;
    });
}

const OrbitPoint &OrbitReport::best() const {
    return *std::min_element(points.begin(), points.end(), [](const auto &a, const auto &b) {
        return a.error_per_clifford < b.error_per_clifford;
    });
}

ProbabilitySeries orbit_observable(const std::vector<ShotStream> &streams, ExecutionMode mode,
                                   ComposeTarget target) {
    if (target == ComposeTarget::X) {
        return compose_to_x_sequence_fidelity(streams, mode);
    }
    return mode == ExecutionMode::Restless ? restless_sequence_fidelity(streams)
                                           : ground_state_probability(streams);
}

OrbitReport run_orbit(const ExperimentConfig &config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto &group = CliffordGroup::instance();
    OrbitReport report;
    report.mode = config.mode;
    report.compose_target = config.compose_target;
    report.depth = config.depth;
    report.sequences = config.sequences;
    report.generators_per_clifford = group.mean_generator_count();
    report.seed = config.seed;

    std::array<CalibratedPulse, kGeneratorCount> calibrated;
    for (int gi = 0; gi < kGeneratorCount; ++gi) {
        const auto g = static_cast<Generator>(gi);
        calibrated[static_cast<std::size_t>(gi)] = CalibrationCache::shared().get(
            config.model, config.duration, angle_of(g), axis_of(g), 0.0, config.calibration);
    }

    // The same sequences are measured at every prefactor.
    std::vector<std::vector<Generator>> words(static_cast<std::size_t>(config.sequences));
    const std::uint64_t sequence_seed = derive_seed(config.seed, 0x5e9);
    for (std::size_t s = 0; s < words.size(); ++s) {
        ChainRng rng(sequence_seed, s);
        words[s] = flatten(random_clifford_sequence(config.depth, config.compose_target, rng));
    }

    const auto damping = damping_channel(config);
    report.points.resize(config.beta_grid.size());
    parallel_for(config.beta_grid.size(), config.jobs, [&](std::size_t b) {
        OrbitPoint point;
        point.beta_prefactor = config.beta_grid[b];
        std::array<QutritMatrix, kGeneratorCount> unitaries;
        for (int gi = 0; gi < kGeneratorCount; ++gi) {
            const auto g = static_cast<Generator>(gi);
            const DragPulse pulse =
                scale_beta(calibrated[static_cast<std::size_t>(gi)].pulse, point.beta_prefactor);
            unitaries[static_cast<std::size_t>(gi)] =
                propagate(config.model, pulse, config.calibration.propagator);
            point.mean_fidelity += process_fidelity(unitaries[static_cast<std::size_t>(gi)],
                                                    generator_unitary(g)) /
                                   kGeneratorCount;
            point.mean_leakage += leakage_of(unitaries[static_cast<std::size_t>(gi)]) /
                                  kGeneratorCount;
        }
        point.error_per_clifford =
            error_per_clifford(std::clamp(point.mean_fidelity, 0.0, 1.0),
                               report.generators_per_clifford);

        std::vector<TransitionMatrix> transitions;
        transitions.reserve(words.size());
        std::vector<QutritMatrix> gates;
        for (const auto &word : words) {
            gates.clear();
            for (Generator g : word) {
                gates.push_back(unitaries[static_cast<std::size_t>(g)]);
            }
            transitions.push_back(transition_matrix(gates, damping ? &*damping : nullptr));
        }
        const auto steps = to_circuit_steps(transitions, config.mode);
        const std::vector<ShotStream> streams{
            run(steps, config.shots, default_assignment(),
                RunOptions{derive_seed(config.seed, 0x1000 + b), 0, false})};
        const ProbabilitySeries series =
            orbit_observable(streams, config.mode, config.compose_target);

        double sum = 0.0;
        double sum_sq = 0.0;
        for (double v : series.p) {
            sum += v;
            sum_sq += v * v;
        }
        const double k = static_cast<double>(series.size());
        point.f_seq = sum / k;
        point.stderr_f_seq =
            k > 1 ? std::sqrt(std::max(0.0, (sum_sq - k * point.f_seq * point.f_seq) / (k - 1)) / k)
                  : series.standard_error.front();
        report.points[b] = point;
    });
    report.wall_seconds = seconds_since(start);
    return report;
}

DepthSweep orbit_depth_sweep(const ExperimentConfig &config, const std::vector<int> &depths) {
    config.validate();
    DepthSweep sweep;
    sweep.depths = depths;
    for (int m : depths) {
        ExperimentConfig c = config;
        c.depth = m;
        sweep.reports.push_back(run_orbit(c));
    }
    const std::vector<double> x(depths.begin(), depths.end());
    for (std::size_t b = 0; b < config.beta_grid.size(); ++b) {
        std::vector<double> y;
        for (const auto &r : sweep.reports) {
            y.push_back(r.points[b].f_seq);
        }
        sweep.fits.push_back(fit_rb_decay(x, y));
    }
    return sweep;
}

double orbit_sensitivity(double amplitude, double error_per_clifford, double depth) {
    if (!(error_per_clifford >= 0.0 && error_per_clifford < 0.5)) {
        throw DomainError("orbit_sensitivity: r_c must be in [0, 1/2)");
    }
    if (!(depth >= 1.0)) {
        throw DomainError("orbit_sensitivity: depth must be >= 1");
    }
    if (error_per_clifford == 0.0) {
        return -2.0 * amplitude * depth;
    }
    return -2.0 * amplitude * depth * std::pow(1.0 - 2.0 * error_per_clifford, depth - 1.0);
}

SensitivityPeak orbit_sensitivity_peak(double amplitude, double error_per_clifford) {
    if (!(error_per_clifford >= 0.0 && error_per_clifford < 0.5)) {
        throw DomainError("orbit_sensitivity_peak: r_c must be in [0, 1/2)");
    }
    SensitivityPeak peak;
    if (error_per_clifford == 0.0) {
        return peak;
    }
    const double alpha = 1.0 - 2.0 * error_per_clifford;
    peak.defined = true;
    peak.depth = -1.0 / std::log(alpha);
    peak.value = -2.0 * amplitude * peak.depth * std::pow(alpha, peak.depth - 1.0);
    peak.approximation = -amplitude / (std::numbers::e * error_per_clifford);
    return peak;
}

LeakageTrace leakage_buildup(const std::vector<TransitionMatrix> &transitions,
                             const ExperimentConfig &config) {
    const auto steps = to_circuit_steps(transitions, config.mode);
    const auto streams = run_realizations(steps, config.shots, default_assignment(), config.seed,
                                          config.realizations, true, config.jobs);
    return leakage_trace(streams, config.window);
}

BuildupReport leakage_buildup_experiment(const ExperimentConfig &config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    BuildupReport report;
    report.pulse = CalibrationCache::shared().get(config.model, config.duration, kPi,
                                                  RotationAxis::X, config.rotation_error,
                                                  config.calibration);
    report.seed = config.seed;
    report.trace = leakage_buildup(fine_amplitude_transitions(config, report.pulse.unitary), config);
    report.wall_seconds = seconds_since(start);
    return report;
}

} // namespace restless

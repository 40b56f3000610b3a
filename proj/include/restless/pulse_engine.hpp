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
 * Three-level transmon dynamics under DRAG pulses: envelope, propagator,
 * leakage / process-fidelity figures of merit and the (amplitude, beta)
 * calibration loop.
 *
 * Frame and sign conventions
 * --------------------------
 * The propagator is computed in the frame rotating at the qubit frequency
 * for all levels, leaving the drift diag(0, 0, anharmonicity). The drive
 * term is
 *
 *     H_d(t) = (lambda / 2) [c(t) a^dagger + conj(c(t)) a],
 *     c(t)   = Omega(t) + conj(Omega(t)) exp(2 i omega t),
 *
 * where the second (counter-rotating) term is dropped when the rotating-wave
 * approximation is requested. On the qubit subspace a real envelope drives
 * sigma_x and an imaginary envelope drives sigma_y, so a pulse of area A
 * implements R(lambda * A) = exp(-i lambda A sigma / 2).
 *
 * The complex envelope of an x-axis pulse is amp * (g(t) + i beta g'(t)),
 * with g the lifted Gaussian (exactly zero at t = 0 and t = tau, unit peak).
 * A y-axis pulse multiplies that by i, i.e. the quadratures are swapped with
 * Omega_x = -beta amp g'(t) and Omega_y = amp g(t).
 */

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "restless/qutrit.hpp"

namespace restless {

/// Fixed-frequency transmon truncated to three levels. All rates in rad/s.
class TransmonModel {
  public:
    TransmonModel(double qubit_frequency, double anharmonicity, double coupling_rate);

    /// 2pi x 5 GHz qubit, 2pi x (-300 MHz) anharmonicity, 2pi x 100 MHz drive coupling.
    static TransmonModel standard();

    double qubit_frequency() const { return qubit_frequency_; }
    double anharmonicity() const { return anharmonicity_; }
    double coupling_rate() const { return coupling_rate_; }

  private:
    double qubit_frequency_;
    double anharmonicity_;
    double coupling_rate_;
};

enum class RotationAxis : std::uint8_t { X, Y };

std::string_view to_string(RotationAxis axis);
RotationAxis parse_rotation_axis(std::string_view text);

/// Gaussian DRAG pulse with sigma = duration / 4.
struct DragPulse {
    double duration = 0.0;         ///< seconds
    double amplitude = 0.0;        ///< dimensionless, signed
    double drag_coefficient = 0.0; ///< beta, seconds
    RotationAxis axis = RotationAxis::X;
    double target_angle = kPi;     ///< radians
    double rotation_error = 0.0;   ///< epsilon, fraction of target_angle

    double sigma() const { return duration / 4.0; }

    /// Throws ValidationError on non-positive duration or non-finite parameters.
    void validate() const;
};

/// Lifted Gaussian g(t) with unit peak at tau/2 and g(0) = g(tau) = 0.
double lifted_gaussian(double duration, double t);
/// Time derivative of lifted_gaussian.
double lifted_gaussian_derivative(double duration, double t);
/// Integral of lifted_gaussian over [0, duration].
double lifted_gaussian_area(double duration);

/// Complex drive envelope Omega(t). Throws DomainError outside [0, tau].
Complex drag_envelope(const DragPulse &pulse, double t);

struct PropagatorOptions {
    bool rotating_wave = false;
    /// Fixed step count; 0 selects one from the fastest frequency in H(t).
    int steps = 0;
    /// Upper bound on |H| dt per step used for the automatic step count.
    double max_phase_per_step = 0.1;
    int min_steps = 200;
    /// Re-run with twice the steps and throw IntegrationError on disagreement.
    bool verify_convergence = false;
    double convergence_tolerance = 1e-8;
};

/// Number of integration steps propagate() will use for this pulse.
int step_count(const TransmonModel &model, const DragPulse &pulse,
               const PropagatorOptions &options);

/// Rotating-frame propagator over [0, tau], built from a fourth-order
/// commutator-free Magnus scheme (two exponentials per step).
QutritMatrix propagate(const TransmonModel &model, const DragPulse &pulse,
                       const PropagatorOptions &options = {});

/// |<2|U|0>|^2
double leakage_of(const QutritMatrix &u);

/// (1/4) |Tr(P U^dagger P^dagger U_target)|^2 with P the projector on {|0>, |1>}.
double process_fidelity(const QutritMatrix &u, const QubitMatrix &target);

/// exp(-i angle sigma_axis / 2)
QubitMatrix rotation(RotationAxis axis, double angle);

struct CalibrationOptions {
    PropagatorOptions propagator{};
    /// Simplex size (in normalized coordinates) at which the search stops.
    double simplex_tolerance = 1e-7;
    int max_iterations = 1000;
};

struct CalibratedPulse {
    DragPulse pulse;
    QutritMatrix unitary = QutritMatrix::Identity();
    double fidelity = 0.0;
    double leakage = 0.0;
    int iterations = 0;

    double infidelity() const { return 1.0 - fidelity; }
};

/// Raised when the simplex never improves on its starting point.
class CalibrationError : public Error {
  public:
    CalibrationError(const std::string &what, CalibratedPulse best)
        : Error(what), best_(std::move(best)) {}
    const CalibratedPulse &best() const { return best_; }

  private:
    CalibratedPulse best_;
};

/// Maximizes the process fidelity against R_axis(angle (1 + epsilon)) over
/// (amplitude, beta), starting from the pulse-area estimate and beta = -1/anharmonicity.
CalibratedPulse calibrate_pulse(const TransmonModel &model, double duration, double target_angle,
                                RotationAxis axis, double rotation_error = 0.0,
                                const CalibrationOptions &options = {});

/// Builds and evaluates a pulse with fixed parameters.
CalibratedPulse evaluate_pulse(const TransmonModel &model, const DragPulse &pulse,
                               const PropagatorOptions &options = {});

/// Clifford generators, in a fixed order used throughout the library.
enum class Generator : std::uint8_t { XPlus = 0, XMinus = 1, YPlus = 2, YMinus = 3 };
inline constexpr int kGeneratorCount = 4;

std::string_view to_string(Generator g);
RotationAxis axis_of(Generator g);
double angle_of(Generator g);

/// R_x(+pi/2), R_x(-pi/2), R_y(+pi/2), R_y(-pi/2), each calibrated separately.
struct RotationSet {
    std::array<CalibratedPulse, kGeneratorCount> pulses;

    const CalibratedPulse &operator[](Generator g) const {
        return pulses[static_cast<std::size_t>(g)];
    }
    /// Process fidelity averaged over the four generators.
    double mean_fidelity() const;
};

RotationSet build_rotation_set(const TransmonModel &model, double duration,
                               const CalibrationOptions &options = {});

/// Returns the pulse with beta replaced by prefactor * beta.
DragPulse scale_beta(const DragPulse &pulse, double prefactor);

} // namespace restless

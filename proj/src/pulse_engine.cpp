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

#include "restless/pulse_engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <gsl/gsl_multimin.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace restless {

TransmonModel::TransmonModel(double qubit_frequency, double anharmonicity, double coupling_rate)
    : qubit_frequency_(qubit_frequency), anharmonicity_(anharmonicity),
      coupling_rate_(coupling_rate) {
    if (!(anharmonicity < 0.0)) {
        throw ValidationError("anharmonicity must be strictly negative");
    }
    if (!(coupling_rate > 0.0)) {
        throw ValidationError("coupling rate must be strictly positive");
    }
    if (!std::isfinite(qubit_frequency) || qubit_frequency < 0.0) {
        throw ValidationError("qubit frequency must be finite and non-negative");
    }
}

TransmonModel TransmonModel::standard() {
    return TransmonModel(kTwoPi * 5e9, kTwoPi * -300e6, kTwoPi * 100e6);
}

std::string_view to_string(RotationAxis axis) { return axis == RotationAxis::X ? "x" : "y"; }

RotationAxis parse_rotation_axis(std::string_view text) {
    if (text == "x" || text == "X") {
        return RotationAxis::X;
    }
    if (text == "y" || text == "Y") {
        return RotationAxis::Y;
    }
    throw ValidationError("rotation axis must be x or y");
}

void DragPulse::validate() const {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw ValidationError("pulse duration must be positive");
    }
    if (!std::isfinite(amplitude) || !std::isfinite(drag_coefficient) ||
        !std::isfinite(target_angle) || !std::isfinite(rotation_error)) {
        throw ValidationError("pulse parameters must be finite");
    }
}

namespace {

double raw_gaussian(double duration, double t) {
    const double sigma = duration / 4.0;
    const double x = t - duration / 2.0;
    return std::exp(-x * x / (2.0 * sigma * sigma));
}

// Value of the unlifted Gaussian at the pulse edges: exp(-2) for tau = 4 sigma.
double edge_value(double duration) { return raw_gaussian(duration, 0.0); }

} // namespace

double lifted_gaussian(double duration, double t) {
    const double g0 = edge_value(duration);
    return (raw_gaussian(duration, t) - g0) / (1.0 - g0);
}

double lifted_gaussian_derivative(double duration, double t) {
    const double sigma = duration / 4.0;
    const double g0 = edge_value(duration);
    return -(t - duration / 2.0) / (sigma * sigma) * raw_gaussian(duration, t) / (1.0 - g0);
}

double lifted_gaussian_area(double duration) {
    const double sigma = duration / 4.0;
    const double g0 = edge_value(duration);
    const double gaussian_area =
        sigma * std::sqrt(kTwoPi) * std::erf(duration / (2.0 * std::sqrt(2.0) * sigma));
    return (gaussian_area - duration * g0) / (1.0 - g0);
}

namespace {

Complex envelope_unchecked(const DragPulse &pulse, double t) {
    const Complex shape(lifted_gaussian(pulse.duration, t),
                        pulse.drag_coefficient *
                            lifted_gaussian_derivative(pulse.duration, t));
    const Complex value = pulse.amplitude * shape;
    return pulse.axis == RotationAxis::X ? value : Complex(0.0, 1.0) * value;
}

} // namespace

Complex drag_envelope(const DragPulse &pulse, double t) {
    if (!(t >= 0.0 && t <= pulse.duration)) {
        throw DomainError("drag_envelope: t outside [0, tau]");
    }
    return envelope_unchecked(pulse, t);
}

namespace {

QutritMatrix hamiltonian(const TransmonModel &model, const DragPulse &pulse, bool rwa,
                         double t) {
    const Complex omega = envelope_unchecked(pulse, t);
    Complex c = omega;
    if (!rwa) {
        c += std::conj(omega) * std::polar(1.0, 2.0 * model.qubit_frequency() * t);
    }
    const Complex up = 0.5 * model.coupling_rate() * c;
    QutritMatrix h = QutritMatrix::Zero();
    h(2, 2) = model.anharmonicity();
    h(1, 0) = up;
    h(0, 1) = std::conj(up);
    h(2, 1) = std::sqrt(2.0) * up;
    h(1, 2) = std::conj(h(2, 1));
    return h;
}

QutritMatrix propagate_fixed(const TransmonModel &model, const DragPulse &pulse, bool rwa,
                             int steps) {
    // Commutator-free Magnus integrator of order four (Gauss-Legendre nodes).
    static const double sqrt3 = std::sqrt(3.0);
    static const double a1 = (3.0 - 2.0 * sqrt3) / 12.0;
    static const double a2 = (3.0 + 2.0 * sqrt3) / 12.0;
    static const double c1 = 0.5 - sqrt3 / 6.0;
    static const double c2 = 0.5 + sqrt3 / 6.0;

    const double h = pulse.duration / steps;
    const Complex minus_ih(0.0, -h);
    QutritMatrix u = QutritMatrix::Identity();
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const QutritMatrix h1 = hamiltonian(model, pulse, rwa, t + c1 * h);
        const QutritMatrix h2 = hamiltonian(model, pulse, rwa, t + c2 * h);
        const QutritMatrix first = (minus_ih * (a2 * h1 + a1 * h2)).exp();
        const QutritMatrix second = (minus_ih * (a1 * h1 + a2 * h2)).exp();
        u = second * first * u;
    }
    return u;
}

} // namespace

int step_count(const TransmonModel &model, const DragPulse &pulse,
               const PropagatorOptions &options) {
    if (options.steps > 0) {
        return options.steps;
    }
    // Peak of |g'| for the lifted Gaussian sits at t = tau/2 +- sigma.
    const double peak_slope =
        std::abs(lifted_gaussian_derivative(pulse.duration, pulse.duration / 2.0 - pulse.sigma()));
    const double peak_drive = std::abs(pulse.amplitude) *
                              std::hypot(1.0, pulse.drag_coefficient * peak_slope) *
                              model.coupling_rate() * std::sqrt(2.0) *
                              (options.rotating_wave ? 0.5 : 1.0);
    const double fastest = std::abs(model.anharmonicity()) + peak_drive +
                           (options.rotating_wave ? 0.0 : 2.0 * model.qubit_frequency());
    const double steps = std::ceil(pulse.duration * fastest / options.max_phase_per_step);
    return std::max(options.min_steps, static_cast<int>(std::min(steps, 1e8)));
}

QutritMatrix propagate(const TransmonModel &model, const DragPulse &pulse,
                       const PropagatorOptions &options) {
    pulse.validate();
    const int steps = step_count(model, pulse, options);
    QutritMatrix u = propagate_fixed(model, pulse, options.rotating_wave, steps);
    if (options.verify_convergence) {
        const QutritMatrix fine = propagate_fixed(model, pulse, options.rotating_wave, 2 * steps);
        const double disagreement = (fine - u).cwiseAbs().maxCoeff();
        if (disagreement > options.convergence_tolerance) {
            throw IntegrationError("propagate: step-halving disagreement " +
                                   std::to_string(disagreement) + " with " +
                                   std::to_string(steps) + " steps");
        }
        u = fine;
    }
    return u;
}

double leakage_of(const QutritMatrix &u) { return std::norm(u(2, 0)); }

double process_fidelity(const QutritMatrix &u, const QubitMatrix &target) {
    const Complex overlap = (u.topLeftCorner<2, 2>().adjoint() * target).trace();
    return std::norm(overlap) / 4.0;
}

QubitMatrix rotation(RotationAxis axis, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    QubitMatrix r;
    if (axis == RotationAxis::X) {
        r << c, Complex(0.0, -s), Complex(0.0, -s), c;
    } else {
        r << c, -s, s, c;
    }
    return r;
}

CalibratedPulse evaluate_pulse(const TransmonModel &model, const DragPulse &pulse,
                               const PropagatorOptions &options) {
    CalibratedPulse out;
    out.pulse = pulse;
    out.unitary = propagate(model, pulse, options);
    out.fidelity = process_fidelity(
        out.unitary,
        rotation(pulse.axis, pulse.target_angle * (1.0 + pulse.rotation_error)));
    out.leakage = leakage_of(out.unitary);
    return out;
}

namespace {

struct SimplexContext {
    const TransmonModel *model;
    DragPulse base;
    QubitMatrix target;
    PropagatorOptions options;
    double amplitude_scale;
    double beta_scale;

    DragPulse pulse_at(const gsl_vector *x) const {
        DragPulse p = base;
        p.amplitude = gsl_vector_get(x, 0) * amplitude_scale;
        p.drag_coefficient = gsl_vector_get(x, 1) * beta_scale;
        return p;
    }
};

double simplex_objective(const gsl_vector *x, void *params) {
    const auto *ctx = static_cast<const SimplexContext *>(params);
    const QutritMatrix u = propagate(*ctx->model, ctx->pulse_at(x), ctx->options);
    return 1.0 - process_fidelity(u, ctx->target);
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer *m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
    void operator()(gsl_vector *v) const { gsl_vector_free(v); }
};

} // namespace

CalibratedPulse calibrate_pulse(const TransmonModel &model, double duration, double target_angle,
                                RotationAxis axis, double rotation_error,
                                const CalibrationOptions &options) {
    if (!(duration > 0.0)) {
        throw ValidationError("calibrate_pulse: duration must be positive");
    }
    const double effective_angle = target_angle * (1.0 + rotation_error);

    SimplexContext ctx{};
    ctx.model = &model;
    ctx.base.duration = duration;
    ctx.base.axis = axis;
    ctx.base.target_angle = target_angle;
    ctx.base.rotation_error = rotation_error;
    ctx.target = rotation(axis, effective_angle);
    ctx.options = options.propagator;
    // Work in units of the area estimate and of 1/|anharmonicity|.
    ctx.amplitude_scale = effective_angle / (model.coupling_rate() * lifted_gaussian_area(duration));
    ctx.beta_scale = 1.0 / std::abs(model.anharmonicity());
    if (ctx.amplitude_scale == 0.0) {
        ctx.amplitude_scale = 1.0 / (model.coupling_rate() * lifted_gaussian_area(duration));
    }

    std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(2));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(2));
    const double initial_amp = effective_angle == 0.0 ? 0.0 : 1.0;
    gsl_vector_set(start.get(), 0, initial_amp);
    gsl_vector_set(start.get(), 1, 1.0);
    gsl_vector_set(step.get(), 0, 0.05);
    gsl_vector_set(step.get(), 1, 0.3);

    gsl_multimin_function objective{&simplex_objective, 2, &ctx};
    const double initial_value = simplex_objective(start.get(), &ctx);

    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
    gsl_multimin_fminimizer_set(minimizer.get(), &objective, start.get(), step.get());

    int iteration = 0;
    for (; iteration < options.max_iterations; ++iteration) {
        if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) {
            break;
        }
        if (gsl_multimin_fminimizer_size(minimizer.get()) < options.simplex_tolerance) {
            break;
        }
    }

    CalibratedPulse best = evaluate_pulse(model, ctx.pulse_at(minimizer->x), options.propagator);
    best.iterations = iteration;
    if (!(minimizer->fval < initial_value)) {
        throw CalibrationError("calibrate_pulse: simplex did not improve on its initial point",
                               best);
    }
    return best;
}

std::string_view to_string(Generator g) {
    switch (g) {
    case Generator::XPlus:
        return "x+";
    case Generator::XMinus:
        return "x-";
    case Generator::YPlus:
        return "y+";
    case Generator::YMinus:
        return "y-";
    }
    return "?";
}

RotationAxis axis_of(Generator g) {
    return (g == Generator::XPlus || g == Generator::XMinus) ? RotationAxis::X : RotationAxis::Y;
}

double angle_of(Generator g) {
    return (g == Generator::XPlus || g == Generator::YPlus) ? kPi / 2.0 : -kPi / 2.0;
}

double RotationSet::mean_fidelity() const {
    double sum = 0.0;
    for (const auto &p : pulses) {
        sum += p.fidelity;
    }
    return sum / kGeneratorCount;
}

RotationSet build_rotation_set(const TransmonModel &model, double duration,
                               const CalibrationOptions &options) {
    RotationSet set;
    for (int i = 0; i < kGeneratorCount; ++i) {
        const auto g = static_cast<Generator>(i);
        set.pulses[static_cast<std::size_t>(i)] =
            calibrate_pulse(model, duration, angle_of(g), axis_of(g), 0.0, options);
    }
    return set;
}

DragPulse scale_beta(const DragPulse &pulse, double prefactor) {
    DragPulse out = pulse;
    out.drag_coefficient = prefactor * pulse.drag_coefficient;
    return out;
}

} // namespace restless

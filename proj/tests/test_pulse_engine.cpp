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

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "restless/pulse_engine.hpp"
#include "test_support.hpp"

namespace restless {
namespace {

const TransmonModel kModel = TransmonModel::standard();

// Calibrations are shared between tests; each takes a second or two.
const CalibratedPulse &calibrated(double tau_ns, double epsilon = 0.0,
                                  RotationAxis axis = RotationAxis::X, double angle = kPi) {
    static std::map<std::tuple<double, double, int, double>, CalibratedPulse> cache;
    const auto key = std::make_tuple(tau_ns, epsilon, static_cast<int>(axis), angle);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, calibrate_pulse(kModel, tau_ns * 1e-9, angle, axis, epsilon)).first;
    }
    return it->second;
}

DragPulse test_pulse(double amplitude, double beta) {
    DragPulse p;
    p.duration = 10e-9;
    p.amplitude = amplitude;
    p.drag_coefficient = beta;
    return p;
}

TEST(DragEnvelope, ImaginaryPartVanishesAtCentre) {
    for (double beta : {-3e-10, 0.0, 2e-10, 1e-9}) {
        EXPECT_EQ(drag_envelope(test_pulse(0.7, beta), 5e-9).imag(), 0.0) << beta;
    }
}

TEST(DragEnvelope, ZeroAmplitudeIsZeroEverywhere) {
    const DragPulse p = test_pulse(0.0, 3e-10);
    for (int i = 0; i <= 20; ++i) {
        EXPECT_EQ(drag_envelope(p, 10e-9 * i / 20.0), Complex(0.0, 0.0));
    }
}

TEST(DragEnvelope, EvenAboutCentreWithoutDrag) {
    const DragPulse p = test_pulse(0.9, 0.0);
    EXPECT_NEAR(drag_envelope(p, 2.5e-9).real(), drag_envelope(p, 7.5e-9).real(), 1e-15);
}

TEST(DragEnvelope, LiftedGaussianVanishesAtEdges) {
    EXPECT_NEAR(lifted_gaussian(10e-9, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(lifted_gaussian(10e-9, 10e-9), 0.0, 1e-15);
    EXPECT_NEAR(lifted_gaussian(10e-9, 5e-9), 1.0, 1e-15);
}

TEST(DragEnvelope, DerivativeMatchesFiniteDifference) {
    const double tau = 10e-9;
    const double h = 1e-15;
    for (double t : {1e-9, 3.3e-9, 6e-9, 8.7e-9}) {
        const double fd = (lifted_gaussian(tau, t + h) - lifted_gaussian(tau, t - h)) / (2 * h);
        EXPECT_NEAR(lifted_gaussian_derivative(tau, t), fd, 1e-6 * std::abs(fd) + 1e3);
    }
}

TEST(DragEnvelope, YAxisIsQuarterTurnOfX) {
    DragPulse x = test_pulse(0.8, 2e-10);
    DragPulse y = x;
    y.axis = RotationAxis::Y;
    for (double t : {1e-9, 4e-9, 7e-9}) {
        const Complex diff = drag_envelope(y, t) - Complex(0.0, 1.0) * drag_envelope(x, t);
        EXPECT_LT(std::abs(diff), 1e-15);
    }
}

TEST(DragEnvelope, RejectsTimesOutsidePulse) {
    EXPECT_THROW(drag_envelope(test_pulse(1.0, 0.0), -1e-12), DomainError);
    EXPECT_THROW(drag_envelope(test_pulse(1.0, 0.0), 10.1e-9), DomainError);
}

TEST(Propagate, ZeroAmplitudeIsDriftOnly) {
    const QutritMatrix u = propagate(kModel, test_pulse(0.0, 0.0));
    const double phase = -kModel.anharmonicity() * 10e-9;
    EXPECT_LT(std::abs(u(0, 0) - 1.0), 1e-12);
    EXPECT_LT(std::abs(u(1, 1) - 1.0), 1e-12);
    EXPECT_LT(std::abs(u(2, 2) - std::polar(1.0, phase)), 1e-12);
    EXPECT_EQ(leakage_of(u), 0.0);
    EXPECT_NEAR(process_fidelity(u, QubitMatrix::Identity()), 1.0, 1e-12);
}

TEST(Propagate, UnitaryToTolerance) {
    for (double amp : {0.3, 1.0, 2.5}) {
        for (bool rwa : {false, true}) {
            PropagatorOptions o;
            o.rotating_wave = rwa;
            EXPECT_LT(unitarity_defect(propagate(kModel, test_pulse(amp, 3e-10), o)), 1e-10);
        }
    }
}

TEST(Propagate, StepHalvingConverges) {
    const DragPulse p = calibrated(10.0).pulse;
    PropagatorOptions o;
    const int n = step_count(kModel, p, o);
    o.steps = n;
    const QutritMatrix a = propagate(kModel, p, o);
    o.steps = 2 * n;
    const QutritMatrix b = propagate(kModel, p, o);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8);

    PropagatorOptions verify;
    verify.verify_convergence = true;
    EXPECT_NO_THROW(propagate(kModel, p, verify));
}

TEST(Propagate, TooFewStepsFailsVerification) {
    PropagatorOptions o;
    o.steps = 4;
    o.verify_convergence = true;
    EXPECT_THROW(propagate(kModel, test_pulse(1.0, 2e-10), o), IntegrationError);
}

TEST(Leakage, IdentityAndPermutation) {
    EXPECT_EQ(leakage_of(QutritMatrix::Identity()), 0.0);
    QutritMatrix perm = QutritMatrix::Zero();
    perm(2, 0) = 1.0;
    perm(0, 1) = 1.0;
    perm(1, 2) = 1.0;
    EXPECT_EQ(leakage_of(perm), 1.0);
}

TEST(ProcessFidelity, IdentityAndGlobalPhase) {
    const QubitMatrix x = rotation(RotationAxis::X, kPi);
    EXPECT_NEAR(process_fidelity(embed(x), x), 1.0, 1e-14);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    const QutritMatrix u = calibrated(10.0).unitary;
    const double base = process_fidelity(u, x);
    for (int i = 0; i < 10; ++i) {
        EXPECT_NEAR(process_fidelity(u * std::polar(1.0, phase(rng)), x), base, 1e-12);
    }
}

TEST(ProcessFidelity, OrthogonalPaulisGiveZero) {
    // |Tr(Z^dagger X)|^2 / 4 = 0 by hand.
    QubitMatrix z;
    z << 1, 0, 0, -1;
    QubitMatrix x;
    x << 0, 1, 1, 0;
    EXPECT_NEAR(process_fidelity(embed(x), z), 0.0, 1e-15);
}

TEST(Calibration, LeakageOrderOfMagnitude) {
    // The pulse-convention sensitivity of absolute leakage is tracked by the
    // acceptance criterion; here only the decade is checked.
    EXPECT_GT(calibrated(3.0).leakage, 1e-2);
    EXPECT_LT(calibrated(3.0).leakage, 1e-1);
    EXPECT_GT(calibrated(20.0).leakage, 1e-7);
    EXPECT_LT(calibrated(20.0).leakage, 1e-4);
}

TEST(Calibration, LeakageStrictlyDecreasing) {
    double previous = 1.0;
    for (double tau : {3.0, 3.5, 4.0, 4.5, 5.0, 10.0, 20.0}) {
        const double leak = calibrated(tau).leakage;
        EXPECT_LT(leak, previous) << tau;
        previous = leak;
    }
}

TEST(Calibration, RotationErrorScalesAmplitudeLinearly) {
    // Area theorem: the rotation angle is proportional to the amplitude when
    // leakage is negligible, so a 5% over-rotation needs 5% more amplitude.
    const double ratio = calibrated(20.0, 0.05).pulse.amplitude / calibrated(20.0).pulse.amplitude;
    EXPECT_NEAR(ratio, 1.05, 2e-3);
}

TEST(Calibration, LocalOptimum) {
    const CalibratedPulse &best = calibrated(10.0);
    const QubitMatrix target = rotation(RotationAxis::X, kPi);
    for (double da : {-0.01, 0.01}) {
        for (double db : {-0.01, 0.0, 0.01}) {
            DragPulse p = best.pulse;
            p.amplitude *= 1.0 + da;
            p.drag_coefficient *= 1.0 + db;
            EXPECT_LE(process_fidelity(propagate(kModel, p), target), best.fidelity + 1e-7);
        }
    }
}

TEST(Calibration, InfidelityAtTenNanoseconds) {
    const double e = calibrated(10.0).infidelity();
    EXPECT_GT(e, 0.0);
    EXPECT_LT(e, 5e-4);
}

TEST(RotationSet, HalfTurnsComposeToX) {
    const CalibratedPulse &half = calibrated(20.0, 0.0, RotationAxis::X, kPi / 2);
    const QutritMatrix twice = half.unitary * half.unitary;
    EXPECT_GE(process_fidelity(twice, rotation(RotationAxis::X, kPi)), 0.99);
    EXPECT_LE(half.leakage, 1e-4);
}

TEST(RotationSet, OppositeHalfTurnsCancel) {
    const CalibratedPulse &plus = calibrated(20.0, 0.0, RotationAxis::X, kPi / 2);
    const CalibratedPulse &minus = calibrated(20.0, 0.0, RotationAxis::X, -kPi / 2);
    EXPECT_GE(process_fidelity(minus.unitary * plus.unitary, QubitMatrix::Identity()), 0.99);
    EXPECT_LE(minus.leakage, 1e-4);
}

TEST(RotationSet, GeneratorsMatchTheirAngles) {
    EXPECT_EQ(axis_of(Generator::YMinus), RotationAxis::Y);
    EXPECT_DOUBLE_EQ(angle_of(Generator::XPlus), kPi / 2);
    EXPECT_DOUBLE_EQ(angle_of(Generator::XMinus), -kPi / 2);
}

TEST(ScaleBeta, IdentityAndZero) {
    const DragPulse p = calibrated(5.0).pulse;
    EXPECT_EQ(scale_beta(p, 1.0).drag_coefficient, p.drag_coefficient);
    EXPECT_EQ(scale_beta(p, 1.0).amplitude, p.amplitude);
    EXPECT_EQ(scale_beta(p, 0.0).drag_coefficient, 0.0);
}

TEST(ScaleBeta, WrongSignIncreasesLeakage) {
    const DragPulse p = calibrated(5.0).pulse;
    EXPECT_GT(leakage_of(propagate(kModel, scale_beta(p, -2.0))),
              leakage_of(propagate(kModel, scale_beta(p, 1.0))));
}

TEST(DragPulse, ValidationRejectsNonPositiveDuration) {
    DragPulse p = test_pulse(1.0, 0.0);
    p.duration = 0.0;
    EXPECT_THROW(p.validate(), ValidationError);
    EXPECT_THROW(calibrate_pulse(kModel, -1e-9, kPi, RotationAxis::X), ValidationError);
}

} // namespace
} // namespace restless

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
 * Common linear-algebra aliases and the error hierarchy shared by every
 * module of the restless simulator.
 */

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace restless {

using Complex = std::complex<double>;

/// Operators and density matrices on the three-level transmon {|0>, |1>, |2>}.
using QutritMatrix = Eigen::Matrix3cd;
/// Operators on the computational subspace {|0>, |1>}.
using QubitMatrix = Eigen::Matrix2cd;
/// Real 3x3 matrices (transition / post-measurement matrices).
using RealMatrix3 = Eigen::Matrix3d;
using ProbabilityVector3 = Eigen::Vector3d;

inline constexpr int kQutritDim = 3;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (e.g. t outside [0, tau]).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Input violates a structural invariant (non-unitary, non-stochastic, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Step-halving disagreement above tolerance.
class IntegrationError : public Error {
  public:
    using Error::Error;
};

/// A physical parameter (decay rate, relaxation time) is out of range.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// Shot-stream post-processing received data it cannot interpret.
class ProcessingError : public Error {
  public:
    using Error::Error;
};

/// Requested work exceeds a configured size bound.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Embeds a 2x2 operator into the qutrit space, acting as identity on |2>.
inline QutritMatrix embed(const QubitMatrix &u) {
    QutritMatrix out = QutritMatrix::Zero();
    out.topLeftCorner<2, 2>() = u;
    out(2, 2) = 1.0;
    return out;
}

/// Largest absolute entry of U^dagger U - I.
inline double unitarity_defect(const QutritMatrix &u) {
    return (u.adjoint() * u - QutritMatrix::Identity()).cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const QubitMatrix &u) {
    return (u.adjoint() * u - QubitMatrix::Identity()).cwiseAbs().maxCoeff();
}

/// Multiplies by a global phase so that the <0|U|1> entry is real and
/// non-negative. Matrices with a vanishing <0|U|1> entry are returned as is.
inline QutritMatrix normalize_global_phase(const QutritMatrix &u) {
    const double mag = std::abs(u(0, 1));
    if (mag < 1e-14) {
        return u;
    }
    return u * (std::conj(u(0, 1)) / mag);
}

} // namespace restless

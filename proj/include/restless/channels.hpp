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
 * CPTP maps on qutrit density matrices in Kraus form, and the sequential
 * |2> -> |1> -> |0> amplitude-damping channel.
 */

#pragma once

#include <vector>

#include "restless/qutrit.hpp"

namespace restless {

/// Row-major vectorization: vec(rho)[3 i + j] = rho(i, j).
using Superoperator = Eigen::Matrix<Complex, 9, 9>;

/// Completely positive trace-preserving map stored as a list of Kraus operators.
class QutritChannel {
  public:
    /// Identity channel.
    QutritChannel();
    /// Throws ValidationError unless sum K^dagger K = I within 1e-10.
    explicit QutritChannel(std::vector<QutritMatrix> kraus);

    const std::vector<QutritMatrix> &kraus() const { return kraus_; }

    /// Lambda(rho) with no validation of rho; used on hot paths.
    QutritMatrix apply_unchecked(const QutritMatrix &rho) const;

    Superoperator superoperator() const;
    /// Choi matrix sum_ij |i><j| (x) Lambda(|i><j|).
    Superoperator choi() const;

  private:
    std::vector<QutritMatrix> kraus_;
};

/// Largest absolute entry of sum K^dagger K - I.
double trace_preservation_defect(const std::vector<QutritMatrix> &kraus);

/// Single-Kraus channel {U}. Throws ValidationError if U is not unitary to 1e-10.
QutritChannel unitary_channel(const QutritMatrix &u);

/// Relaxation times for the sequential decay model. The direct 2 -> 0 rate is zero.
struct DampingParams {
    double t01 = 100e-6; ///< seconds, |1> -> |0>
    double t12 = 73e-6;  ///< seconds, |2> -> |1>

    static DampingParams standard() { return {}; }
    /// Variant with a 71 us |2> -> |1> relaxation time.
    static DampingParams short_t12() { return {100e-6, 71e-6}; }
};

/// Gamma_01 = 1 - exp(-tau / T01), Gamma_12 = 1 - exp(-tau / T12).
/// Throws ParameterError for tau < 0 or non-positive relaxation times.
QutritChannel amplitude_damping(double gate_duration, const DampingParams &params);

/// second o first, with Kraus set {K2_j K1_i}.
QutritChannel compose(const QutritChannel &first, const QutritChannel &second);

/// Throws ValidationError unless rho is Hermitian, unit-trace and PSD within 1e-10.
void validate_density_matrix(const QutritMatrix &rho);

/// Lambda(rho), validating rho first.
QutritMatrix apply(const QutritChannel &channel, const QutritMatrix &rho);

/// |n><n| for a basis state n in {0, 1, 2}.
QutritMatrix basis_density(int n);

} // namespace restless

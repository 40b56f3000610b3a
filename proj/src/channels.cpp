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

#include "restless/channels.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace restless {

namespace {
constexpr double kTolerance = 1e-10;
} // namespace

double trace_preservation_defect(const std::vector<QutritMatrix> &kraus) {
    QutritMatrix sum = QutritMatrix::Zero();
    for (const auto &k : kraus) {
        sum += k.adjoint() * k;
    }
    return (sum - QutritMatrix::Identity()).cwiseAbs().maxCoeff();
}

QutritChannel::QutritChannel() : kraus_{QutritMatrix::Identity()} {}

QutritChannel::QutritChannel(std::vector<QutritMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
        throw ValidationError("channel needs at least one Kraus operator");
    }
    if (trace_preservation_defect(kraus_) > kTolerance) {
        throw ValidationError("Kraus operators are not trace preserving");
    }
}

QutritMatrix QutritChannel::apply_unchecked(const QutritMatrix &rho) const {
    QutritMatrix out = QutritMatrix::Zero();
    for (const auto &k : kraus_) {
        out.noalias() += k * rho * k.adjoint();
    }
    return out;
}

Superoperator QutritChannel::superoperator() const {
    // Row-major vec: vec(K rho K^dagger) = (K (x) conj(K)) vec(rho).
    Superoperator s = Superoperator::Zero();
    for (const auto &k : kraus_) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        s(3 * i + j, 3 * a + b) += k(i, a) * std::conj(k(j, b));
                    }
                }
            }
        }
    }
    return s;
}

Superoperator QutritChannel::choi() const {
    Superoperator c = Superoperator::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            QutritMatrix e = QutritMatrix::Zero();
            e(i, j) = 1.0;
            c.block<3, 3>(3 * i, 3 * j) = apply_unchecked(e);
        }
    }
    return c;
}

QutritChannel unitary_channel(const QutritMatrix &u) {
    if (unitarity_defect(u) > kTolerance) {
        throw ValidationError("unitary_channel: matrix is not unitary");
    }
    return QutritChannel({u});
}

QutritChannel amplitude_damping(double gate_duration, const DampingParams &params) {
    if (!(gate_duration >= 0.0) || !std::isfinite(gate_duration)) {
        throw ParameterError("amplitude_damping: gate duration must be non-negative");
    }
    if (!(params.t01 > 0.0) || !(params.t12 > 0.0)) {
        throw ParameterError("amplitude_damping: relaxation times must be positive");
    }
    const double g01 = -std::expm1(-gate_duration / params.t01);
    const double g12 = -std::expm1(-gate_duration / params.t12);
    const double g02 = 0.0;
    for (double g : {g01, g12, g12 + g02}) {
        if (!(g >= 0.0 && g <= 1.0)) {
            throw ParameterError("amplitude_damping: decay probability outside [0, 1]");
        }
    }
    QutritMatrix k0 = QutritMatrix::Zero();
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g01);
    k0(2, 2) = std::sqrt(1.0 - g12 - g02);
    QutritMatrix k1 = QutritMatrix::Zero();
    k1(0, 1) = std::sqrt(g01);
    QutritMatrix k2 = QutritMatrix::Zero();
    k2(1, 2) = std::sqrt(g12);
    QutritMatrix k3 = QutritMatrix::Zero();
    k3(0, 2) = std::sqrt(g02);
    return QutritChannel({k0, k1, k2, k3});
}

QutritChannel compose(const QutritChannel &first, const QutritChannel &second) {
    std::vector<QutritMatrix> kraus;
    kraus.reserve(first.kraus().size() * second.kraus().size());
    for (const auto &k2 : second.kraus()) {
        for (const auto &k1 : first.kraus()) {
            kraus.push_back(k2 * k1);
        }
    }
    return QutritChannel(std::move(kraus));
}

void validate_density_matrix(const QutritMatrix &rho) {
    if (!rho.allFinite()) {
        throw ValidationError("density matrix has non-finite entries");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
        throw ValidationError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > kTolerance) {
        throw ValidationError("density matrix does not have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<QutritMatrix> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kTolerance) {
        throw ValidationError("density matrix is not positive semidefinite");
    }
}

QutritMatrix apply(const QutritChannel &channel, const QutritMatrix &rho) {
    validate_density_matrix(rho);
    return channel.apply_unchecked(rho);
}

QutritMatrix basis_density(int n) {
    if (n < 0 || n >= kQutritDim) {
        throw DomainError("basis_density: level must be 0, 1 or 2");
    }
    QutritMatrix rho = QutritMatrix::Zero();
    rho(n, n) = 1.0;
    return rho;
}

} // namespace restless

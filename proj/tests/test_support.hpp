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

// Shared helpers for the unit tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/SVD>

#include "restless/qutrit.hpp"
#include "restless/restless_core.hpp"

namespace restless::testing {

inline QutritMatrix random_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    QutritMatrix m;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            m(r, c) = Complex(n(rng), n(rng));
        }
    }
    return m;
}

/// G G^dagger / Tr(G G^dagger) with Gaussian G.
inline QutritMatrix random_density(std::mt19937_64 &rng) {
    const QutritMatrix g = random_complex(rng);
    QutritMatrix rho = g * g.adjoint();
    return rho / rho.trace();
}

/// Unitary factor of the polar decomposition, i.e. the nearest unitary.
inline QutritMatrix nearest_unitary(const QutritMatrix &m) {
    Eigen::JacobiSVD<QutritMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

inline QutritMatrix random_unitary(std::mt19937_64 &rng) { return nearest_unitary(random_complex(rng)); }

/// Largest |f - p| / sigma over every zeta and basis state, where f is the
/// fraction of realizations in state mu at zeta and p the exact marginal.
/// sigma = sqrt(p (1 - p) / R), floored at the one-count level sqrt(1 / R^2)
/// so that a single hit on a tiny p is not scored as a many-sigma event.
inline double max_oracle_z(const std::vector<ShotStream> &streams,
                           const std::vector<ProbabilityVector3> &exact) {
    const double r = static_cast<double>(streams.size());
    double worst = 0.0;
    for (std::size_t z = 0; z < exact.size(); ++z) {
        double counts[3] = {0.0, 0.0, 0.0};
        for (const auto &s : streams) {
            counts[s.basis_state_at(z)] += 1.0;
        }
        for (int mu = 0; mu < 3; ++mu) {
            const double p = exact[z](mu);
            const double f = counts[mu] / r;
            const double sigma = std::sqrt(std::max(p * (1.0 - p), 1.0 / r) / r);
            worst = std::max(worst, std::abs(f - p) / sigma);
        }
    }
    return worst;
}

} // namespace restless::testing

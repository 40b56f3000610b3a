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

#include "restless/restless_core.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "restless/parallel.hpp"

namespace restless {

namespace {
constexpr double kTolerance = 1e-10;

// Removes rounding noise (|x| below tolerance outside [0, 1]) from a
// probability matrix built out of density-matrix diagonals.
RealMatrix3 clean_probabilities(RealMatrix3 m) {
    for (int c = 0; c < 3; ++c) {
        for (int r = 0; r < 3; ++r) {
            m(r, c) = std::clamp(m(r, c), 0.0, 1.0);
        }
    }
    return m;
}
} // namespace

void validate_column_stochastic(const Eigen::MatrixXd &m, const char *what) {
    if (!m.allFinite()) {
        throw ValidationError(std::string(what) + ": non-finite entry");
    }
    if (m.minCoeff() < -kTolerance || m.maxCoeff() > 1.0 + kTolerance) {
        throw ValidationError(std::string(what) + ": entry outside [0, 1]");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (std::abs(m.col(c).sum() - 1.0) > kTolerance) {
            throw ValidationError(std::string(what) + ": column does not sum to 1");
        }
    }
}

TransitionMatrix::TransitionMatrix(const RealMatrix3 &m) : m_(m) {
    validate_column_stochastic(m_, "transition matrix");
}

PostMeasurementMatrix::PostMeasurementMatrix(const RealMatrix3 &m) : m_(m) {
    validate_column_stochastic(m_, "post-measurement matrix");
}

PostMeasurementMatrix standard_reset_matrix() {
    RealMatrix3 m = RealMatrix3::Zero();
    m.row(0).setOnes();
    return PostMeasurementMatrix(m);
}

PostMeasurementMatrix restless_identity_matrix() {
    return PostMeasurementMatrix(RealMatrix3::Identity());
}

AssignmentMatrix::AssignmentMatrix(const Eigen::MatrixXd &m) : m_(m) {
    if (m_.cols() != kQutritDim || m_.rows() < 2) {
        throw ValidationError("assignment matrix must have 3 columns and at least 2 rows");
    }
    validate_column_stochastic(m_, "assignment matrix");
}

AssignmentMatrix default_assignment() {
    Eigen::MatrixXd m(2, 3);
    m << 1, 0, 0, 0, 1, 1;
    return AssignmentMatrix(m);
}

AssignmentMatrix qutrit_assignment() { return AssignmentMatrix(Eigen::MatrixXd::Identity(3, 3)); }

TransitionMatrix transition_matrix(const QutritChannel &circuit) {
    RealMatrix3 t;
    for (int nu = 0; nu < 3; ++nu) {
        const QutritMatrix rho = circuit.apply_unchecked(basis_density(nu));
        t.col(nu) = rho.diagonal().real();
    }
    return TransitionMatrix(clean_probabilities(t));
}

TransitionMatrix transition_matrix(const std::vector<QutritChannel> &gates) {
    RealMatrix3 t;
    for (int nu = 0; nu < 3; ++nu) {
        QutritMatrix rho = basis_density(nu);
        for (const auto &g : gates) {
            rho = g.apply_unchecked(rho);
        }
        t.col(nu) = rho.diagonal().real();
    }
    return TransitionMatrix(clean_probabilities(t));
}

TransitionMatrix transition_matrix(const std::vector<QutritMatrix> &unitaries,
                                   const QutritChannel *after) {
    RealMatrix3 t;
    for (int nu = 0; nu < 3; ++nu) {
        QutritMatrix rho = basis_density(nu);
        for (const auto &u : unitaries) {
            rho = u * rho * u.adjoint();
            if (after != nullptr) {
                rho = after->apply_unchecked(rho);
            }
        }
        t.col(nu) = rho.diagonal().real();
    }
    return TransitionMatrix(clean_probabilities(t));
}

ShotStream::ShotStream(int circuit_count, int shots, std::uint64_t seed,
                       std::uint64_t realization, bool record_basis_states)
    : circuit_count_(circuit_count), shots_(shots), seed_(seed), realization_(realization) {
    if (circuit_count < 1 || shots < 1) {
        throw ValidationError("shot stream needs K >= 1 and N >= 1");
    }
    const std::size_t n = static_cast<std::size_t>(circuit_count) * static_cast<std::size_t>(shots);
    outcomes_.assign(n, 0);
    if (record_basis_states) {
        basis_states_.assign(n, 0);
    }
}

int ShotStream::basis_state_at(std::size_t zeta) const {
    if (basis_states_.empty()) {
        throw ProcessingError("shot stream has no basis-state record");
    }
    return basis_states_[zeta];
}

void ShotStream::set(std::size_t zeta, int outcome, int basis_state) {
    outcomes_[zeta] = static_cast<std::uint8_t>(outcome);
    if (!basis_states_.empty()) {
        basis_states_[zeta] = static_cast<std::uint8_t>(basis_state);
    }
}

ChainRng::ChainRng(std::uint64_t seed, std::uint64_t realization) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(realization),
                      static_cast<std::uint32_t>(realization >> 32)};
    engine_.seed(seq);
}

double ChainRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

ShotStream run(const std::vector<CircuitStep> &circuits, int shots,
               const AssignmentMatrix &assignment, const RunOptions &options) {
    if (circuits.empty()) {
        throw ValidationError("run: at least one circuit is required");
    }
    if (shots < 1) {
        throw ValidationError("run: at least one shot is required");
    }
    // The matrix classes validate on construction; re-check in case the
    // caller bypassed them through default construction paths.
    for (const auto &c : circuits) {
        validate_column_stochastic(c.transition.matrix(), "transition matrix");
        validate_column_stochastic(c.post.matrix(), "post-measurement matrix");
    }
    validate_column_stochastic(assignment.matrix(), "assignment matrix");

    const int k_count = static_cast<int>(circuits.size());
    ShotStream stream(k_count, shots, options.seed, options.realization,
                      options.record_basis_states);
    ChainRng rng(options.seed, options.realization);
    const Eigen::MatrixXd &a = assignment.matrix();

    int input = 0;
    std::size_t zeta = 0;
    for (int j = 0; j < shots; ++j) {
        for (int k = 0; k < k_count; ++k, ++zeta) {
            const CircuitStep &c = circuits[static_cast<std::size_t>(k)];
            const int phi = rng.categorical(c.transition.matrix().col(input));
            const int outcome = rng.categorical(a.col(phi));
            input = rng.categorical(c.post.matrix().col(phi));
            stream.set(zeta, outcome, phi);
        }
    }
    return stream;
}

std::vector<ShotStream> run_realizations(const std::vector<CircuitStep> &circuits, int shots,
                                         const AssignmentMatrix &assignment, std::uint64_t seed,
                                         int realizations, bool record_basis_states, int jobs) {
    if (realizations < 1) {
        throw ValidationError("run_realizations: at least one realization is required");
    }
    std::vector<ShotStream> out;
    out.reserve(static_cast<std::size_t>(realizations));
    for (int r = 0; r < realizations; ++r) {
        out.emplace_back(static_cast<int>(std::max<std::size_t>(circuits.size(), 1)),
                         std::max(shots, 1), seed, static_cast<std::uint64_t>(r),
                         record_basis_states);
    }
    parallel_for(out.size(), jobs, [&](std::size_t r) {
        out[r] = run(circuits, shots, assignment,
                     RunOptions{seed, static_cast<std::uint64_t>(r), record_basis_states});
    });
    return out;
}

std::vector<ProbabilityVector3> exact_marginals(const std::vector<CircuitStep> &circuits,
                                                int shots, std::size_t bound) {
    if (circuits.empty() || shots < 1) {
        throw ValidationError("exact_marginals: K >= 1 and N >= 1 required");
    }
    const std::size_t total = circuits.size() * static_cast<std::size_t>(shots);
    if (total > bound) {
        throw SizeError("exact_marginals: K * N = " + std::to_string(total) +
                        " exceeds the bound of " + std::to_string(bound));
    }
    std::vector<ProbabilityVector3> out;
    out.reserve(total);
    ProbabilityVector3 d(1.0, 0.0, 0.0);
    for (int j = 0; j < shots; ++j) {
        for (const auto &c : circuits) {
            const ProbabilityVector3 o = c.transition.matrix() * d;
            out.push_back(o);
            d = c.post.matrix() * o;
        }
    }
    return out;
}

void write_shot_stream_csv(std::ostream &out, const std::vector<ShotStream> &streams) {
    out << "realization,j,k,zeta,outcome,basis_state\n";
    for (const auto &s : streams) {
        const int k_count = s.circuit_count();
        for (std::size_t z = 0; z < s.size(); ++z) {
            const auto j = z / static_cast<std::size_t>(k_count);
            const auto k = z % static_cast<std::size_t>(k_count);
            out << s.realization() << ',' << j << ',' << k << ',' << z << ','
                << s.outcome_at(z) << ',';
            if (s.has_basis_states()) {
                out << s.basis_state_at(z);
            }
            out << '\n';
        }
    }
}

} // namespace restless

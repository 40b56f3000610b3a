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
 * Markov-chain sampling of time-ordered measurement records.
 *
 * Every circuit k is reduced to a column-stochastic transition matrix
 * [T_k]_{mu nu} = Pr[measure |mu> | input |nu>]. A run visits the circuits
 * in execution order zeta = j K + k (shot j of circuit k) and, starting from
 * the ground state, repeats
 *
 *     O   = T_k I        (output distribution)
 *     phi ~ O            (projected basis state)
 *     M   ~ A phi        (classified outcome)
 *     I   ~ P_k phi      (next input; P_k is a reset or the identity)
 *
 * Standard execution uses the reset matrix for P_k, restless execution the
 * identity.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "restless/channels.hpp"
#include "restless/qutrit.hpp"

namespace restless {

/// Throws ValidationError unless every entry is in [0, 1] (within 1e-10) and
/// every column sums to 1 within 1e-10.
void validate_column_stochastic(const Eigen::MatrixXd &m, const char *what);

/// 3x3 column-stochastic basis-state transition matrix.
class TransitionMatrix {
  public:
    TransitionMatrix() : m_(RealMatrix3::Identity()) {}
    explicit TransitionMatrix(const RealMatrix3 &m);

    const RealMatrix3 &matrix() const { return m_; }
    double operator()(int mu, int nu) const { return m_(mu, nu); }

  private:
    RealMatrix3 m_;
};

/// 3x3 column-stochastic map applied to the projected state before the next circuit.
class PostMeasurementMatrix {
  public:
    PostMeasurementMatrix() : m_(RealMatrix3::Identity()) {}
    explicit PostMeasurementMatrix(const RealMatrix3 &m);

    const RealMatrix3 &matrix() const { return m_; }

  private:
    RealMatrix3 m_;
};

/// Every basis state is reset to |0>.
PostMeasurementMatrix standard_reset_matrix();
/// The projected state is the next input.
PostMeasurementMatrix restless_identity_matrix();

/// Outcome-label probabilities given a projected basis state; one row per label.
class AssignmentMatrix {
  public:
    explicit AssignmentMatrix(const Eigen::MatrixXd &m);

    const Eigen::MatrixXd &matrix() const { return m_; }
    int outcome_count() const { return static_cast<int>(m_.rows()); }

  private:
    Eigen::MatrixXd m_;
};

/// [[1, 0, 0], [0, 1, 1]]: |2> is read out as '1'.
AssignmentMatrix default_assignment();
/// 3x3 identity: outcomes '0', '1', '2'.
AssignmentMatrix qutrit_assignment();

/// [T]_{mu nu} = <mu| C(|nu><nu|) |mu>.
TransitionMatrix transition_matrix(const QutritChannel &circuit);

/// Same as above for the channel sequence gates[0], gates[1], ..., obtained by
/// pushing each basis density matrix through the gates in order.
TransitionMatrix transition_matrix(const std::vector<QutritChannel> &gates);

/// Transition matrix of a sequence of unitaries, each followed by `after`
/// when it is non-null.
TransitionMatrix transition_matrix(const std::vector<QutritMatrix> &unitaries,
                                   const QutritChannel *after);

struct CircuitStep {
    TransitionMatrix transition;
    PostMeasurementMatrix post;
};

/// Outcomes of one realization, stored in execution order zeta = j K + k.
class ShotStream {
  public:
    ShotStream(int circuit_count, int shots, std::uint64_t seed, std::uint64_t realization,
               bool record_basis_states);

    int circuit_count() const { return circuit_count_; }
    int shots() const { return shots_; }
    std::size_t size() const { return outcomes_.size(); }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t realization() const { return realization_; }
    bool has_basis_states() const { return !basis_states_.empty(); }

    static std::size_t zeta(int k, int j, int circuit_count) {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(circuit_count) +
               static_cast<std::size_t>(k);
    }

    int outcome_at(std::size_t zeta) const { return outcomes_[zeta]; }
    int outcome(int k, int j) const { return outcomes_[zeta(k, j, circuit_count_)]; }
    /// Throws ProcessingError when basis states were not recorded.
    int basis_state_at(std::size_t zeta) const;
    int basis_state(int k, int j) const { return basis_state_at(zeta(k, j, circuit_count_)); }

    const std::vector<std::uint8_t> &outcomes() const { return outcomes_; }
    const std::vector<std::uint8_t> &basis_states() const { return basis_states_; }

    void set(std::size_t zeta, int outcome, int basis_state);

  private:
    int circuit_count_;
    int shots_;
    std::uint64_t seed_;
    std::uint64_t realization_;
    std::vector<std::uint8_t> outcomes_;
    std::vector<std::uint8_t> basis_states_;
};

/// Deterministic per-(seed, realization) generator with a platform-independent
/// uniform draw.
class ChainRng {
  public:
    ChainRng(std::uint64_t seed, std::uint64_t realization);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Inverse-CDF draw from a probability column.
    template <typename Vec>
    int categorical(const Vec &p) {
        const double u = uniform();
        double cumulative = 0.0;
        const int n = static_cast<int>(p.size());
        for (int i = 0; i < n - 1; ++i) {
            cumulative += p(i);
            if (u < cumulative) {
                return i;
            }
        }
        // Guard against rounding in the last bucket: pick the last non-empty category.
        for (int i = n - 1; i > 0; --i) {
            if (p(i) > 0.0) {
                return i;
            }
        }
        return 0;
    }

  private:
    std::mt19937_64 engine_;
};

struct RunOptions {
    std::uint64_t seed = 0;
    std::uint64_t realization = 0;
    bool record_basis_states = true;
};

/// Samples one realization of the chain over `shots` repetitions of the circuit list.
/// Validation of all matrices happens before any sampling.
ShotStream run(const std::vector<CircuitStep> &circuits, int shots,
               const AssignmentMatrix &assignment, const RunOptions &options = {});

/// Realizations 0 .. realizations-1 with the same seed, run on up to `jobs` threads.
std::vector<ShotStream> run_realizations(const std::vector<CircuitStep> &circuits, int shots,
                                         const AssignmentMatrix &assignment, std::uint64_t seed,
                                         int realizations, bool record_basis_states = true,
                                         int jobs = 1);

/// Pr[phi_zeta = |mu>] for every zeta, from exact propagation of the state
/// distribution. Throws SizeError when K * N exceeds `bound`.
std::vector<ProbabilityVector3> exact_marginals(const std::vector<CircuitStep> &circuits,
                                                int shots, std::size_t bound = 100000);

/// CSV with header realization,j,k,zeta,outcome,basis_state. basis_state is
/// empty when it was not recorded.
void write_shot_stream_csv(std::ostream &out, const std::vector<ShotStream> &streams);

} // namespace restless

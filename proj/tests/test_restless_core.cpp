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
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "restless/pulse_engine.hpp"
#include "restless/restless_core.hpp"
#include "test_support.hpp"

namespace restless {
namespace {

using testing::max_oracle_z;
using testing::nearest_unitary;
using testing::random_unitary;

QutritMatrix hadamard() {
    QubitMatrix h;
    h << 1, 1, 1, -1;
    return embed(h / std::sqrt(2.0));
}

QutritMatrix x_gate() { return embed(rotation(RotationAxis::X, kPi)); }

TransitionMatrix of(const QutritMatrix &u) { return transition_matrix(unitary_channel(u)); }

// Reference leaky X gates, given to three significant figures.
// Rounding leaves them slightly non-unitary, so the nearest unitary
// is used.
QutritMatrix reference_x_5ns() {
    using C = Complex;
    QutritMatrix u;
    u << C(2.62e-2, -3.43e-4), C(1.00, 0.0), C(-2.08e-2, 8.66e-2),   //
        C(1.00, -4.14e-5), C(-3.08e-2, 6.04e-3), C(5.72e-2, 6.74e-2), //
        C(5.14e-2, -7.39e-2), C(-2.85e-2, -8.26e-2), C(-9.89e-1, 7.36e-2);
    return nearest_unitary(u);
}

QutritMatrix reference_x_10ns() {
    using C = Complex;
    QutritMatrix u;
    u << C(-7.33e-6, 8.05e-5), C(1.00, 0.0), C(-10.00e-4, 1.33e-2),    //
        C(1.00, -5.86e-8), C(7.68e-5, -8.44e-5), C(-1.19e-2, -6.10e-3), //
        C(-5.88e-3, 1.20e-2), C(-8.79e-3, -1.01e-2), C(-8.01e-1, 0.60);
    return nearest_unitary(u);
}

TransitionMatrix fine_amplitude_transition(const QutritMatrix &x, int k) {
    std::vector<QutritMatrix> gates{embed(rotation(RotationAxis::X, kPi / 2))};
    for (int i = 0; i < k; ++i) {
        gates.push_back(x);
    }
    return transition_matrix(gates, nullptr);
}

// Entry-wise: 20% relative above 1e-3, 5e-4 absolute otherwise.
void expect_matches(const TransitionMatrix &t, const RealMatrix3 &expected) {
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double e = expected(r, c);
            const double tol = e > 1e-3 ? 0.2 * e : 5e-4;
            EXPECT_NEAR(t(r, c), e, tol) << "entry (" << r << ", " << c << ")";
        }
    }
}

std::vector<CircuitStep> steps(const std::vector<QutritMatrix> &unitaries,
                               const PostMeasurementMatrix &post) {
    std::vector<CircuitStep> out;
    for (const auto &u : unitaries) {
        out.push_back({of(u), post});
    }
    return out;
}

TEST(TransitionMatrix, HadamardSplitsQubitEvenly) {
    const TransitionMatrix t = of(hadamard());
    for (int mu = 0; mu < 2; ++mu) {
        for (int nu = 0; nu < 2; ++nu) {
            EXPECT_NEAR(t(mu, nu), 0.5, 1e-15);
        }
    }
    EXPECT_NEAR(t(2, 2), 1.0, 1e-15);
}

TEST(TransitionMatrix, IdentityCircuit) {
    EXPECT_LT((of(QutritMatrix::Identity()).matrix() - RealMatrix3::Identity()).cwiseAbs().maxCoeff(),
              1e-15);
}

TEST(TransitionMatrix, ReferenceFiveNanosecondMatrices) {
    const QutritMatrix x = reference_x_5ns();
    RealMatrix3 t1;
    t1 << 0.50, 0.50, 7.93e-3, 0.50, 0.49, 7.81e-3, 1.52e-3, 1.42e-2, 0.98;
    expect_matches(fine_amplitude_transition(x, 1), t1);
    RealMatrix3 t16;
    t16 << 0.34, 0.43, 0.23, 0.37, 0.30, 0.33, 0.29, 0.27, 0.44;
    expect_matches(fine_amplitude_transition(x, 16), t16);
}

TEST(TransitionMatrix, ReferenceTenNanosecondMatrices) {
    const QutritMatrix x = reference_x_10ns();
    RealMatrix3 t1;
    t1 << 0.50, 0.50, 1.79e-4, 0.50, 0.50, 1.79e-4, 3.44e-4, 1.40e-5, 1.00;
    expect_matches(fine_amplitude_transition(x, 1), t1);
    RealMatrix3 t16;
    t16 << 0.50, 0.50, 1.53e-3, 0.50, 0.50, 6.24e-4, 1.08e-3, 1.08e-3, 1.00;
    expect_matches(fine_amplitude_transition(x, 16), t16);
}

TEST(TransitionMatrix, ChannelAndUnitaryRoutesAgree) {
    std::mt19937_64 rng(11);
    const QutritMatrix a = random_unitary(rng);
    const QutritMatrix b = random_unitary(rng);
    const QutritChannel damp = amplitude_damping(20e-6, {});
    const TransitionMatrix via_channels =
        transition_matrix(std::vector<QutritChannel>{unitary_channel(a), damp, unitary_channel(b), damp});
    const TransitionMatrix via_unitaries = transition_matrix({a, b}, &damp);
    EXPECT_LT((via_channels.matrix() - via_unitaries.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Stochastic, RejectsBadColumns) {
    RealMatrix3 m = RealMatrix3::Identity();
    m(0, 0) = 0.9;
    EXPECT_THROW(TransitionMatrix{m}, ValidationError);
    m(1, 0) = 0.1;
    EXPECT_NO_THROW(TransitionMatrix{m});
    RealMatrix3 neg = RealMatrix3::Identity();
    neg(0, 1) = -0.1;
    neg(1, 1) = 1.1;
    EXPECT_THROW(PostMeasurementMatrix{neg}, ValidationError);
    EXPECT_THROW(AssignmentMatrix(Eigen::MatrixXd::Identity(2, 2)), ValidationError);
}

TEST(Stochastic, ConstructedMatricesSumToOne) {
    std::mt19937_64 rng(12);
    const QutritChannel damp = amplitude_damping(3e-6, {});
    for (int i = 0; i < 50; ++i) {
        const TransitionMatrix t = transition_matrix({random_unitary(rng), random_unitary(rng)}, &damp);
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(t.matrix().col(c).sum(), 1.0, 1e-10);
        }
    }
    for (const auto &a : {default_assignment(), qutrit_assignment()}) {
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(a.matrix().col(c).sum(), 1.0, 1e-15);
        }
    }
}

TEST(PostMeasurement, ResetAndIdentity) {
    const RealMatrix3 p = standard_reset_matrix().matrix();
    EXPECT_EQ(p * ProbabilityVector3(0, 0, 1), ProbabilityVector3(1, 0, 0));
    EXPECT_EQ(p * p, p);
    const ProbabilityVector3 v(0.2, 0.3, 0.5);
    EXPECT_EQ(restless_identity_matrix().matrix() * v, v);
}

TEST(Assignment, SecondExcitedReadsAsOne) {
    const Eigen::MatrixXd a = default_assignment().matrix();
    EXPECT_EQ(a * Eigen::Vector3d(0, 0, 1), Eigen::Vector2d(0, 1));
    EXPECT_EQ(a * Eigen::Vector3d(1, 0, 0), Eigen::Vector2d(1, 0));
    EXPECT_EQ(qutrit_assignment().matrix(), Eigen::MatrixXd::Identity(3, 3));
    EXPECT_EQ(qutrit_assignment().outcome_count(), 3);
}

TEST(Run, IdealXRestlessAlternates) {
    const auto c = steps({x_gate()}, restless_identity_matrix());
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const ShotStream s = run(c, 50, default_assignment(), {seed, 0, true});
        for (std::size_t z = 0; z < s.size(); ++z) {
            EXPECT_EQ(s.outcome_at(z), z % 2 == 0 ? 1 : 0);
        }
    }
}

TEST(Run, HadamardFromExcitedIsFair) {
    // X then H from the reset state: input |1>, output (1/2, 1/2).
    const QutritMatrix u = hadamard() * x_gate();
    const auto c = steps({u}, standard_reset_matrix());
    const int n = 10000;
    const ShotStream s = run(c, n, default_assignment(), {5, 0, false});
    int ones = 0;
    for (std::size_t z = 0; z < s.size(); ++z) {
        ones += s.outcome_at(z);
    }
    const double sigma = std::sqrt(0.25 / n);
    EXPECT_NEAR(ones / static_cast<double>(n), 0.5, 3 * sigma);
}

TEST(Run, DeterministicForFixedSeed) {
    std::mt19937_64 rng(13);
    const auto c = steps({random_unitary(rng), random_unitary(rng), random_unitary(rng)},
                         restless_identity_matrix());
    const ShotStream a = run(c, 200, default_assignment(), {42, 3, true});
    const ShotStream b = run(c, 200, default_assignment(), {42, 3, true});
    EXPECT_EQ(a.outcomes(), b.outcomes());
    EXPECT_EQ(a.basis_states(), b.basis_states());
    const ShotStream other = run(c, 200, default_assignment(), {42, 4, true});
    EXPECT_NE(a.basis_states(), other.basis_states());

    const auto par = run_realizations(c, 50, default_assignment(), 42, 8, true, 4);
    const auto ser = run_realizations(c, 50, default_assignment(), 42, 8, true, 1);
    for (std::size_t r = 0; r < par.size(); ++r) {
        EXPECT_EQ(par[r].outcomes(), ser[r].outcomes());
    }
}

TEST(Run, ZetaOrdering) {
    EXPECT_EQ(ShotStream::zeta(2, 3, 5), 17U);
    ShotStream s(5, 4, 0, 0, true);
    s.set(ShotStream::zeta(1, 2, 5), 1, 2);
    EXPECT_EQ(s.outcome(1, 2), 1);
    EXPECT_EQ(s.basis_state(1, 2), 2);
    ShotStream bare(5, 4, 0, 0, false);
    EXPECT_THROW(bare.basis_state_at(0), ProcessingError);
}

TEST(ChainRng, UniformInUnitInterval) {
    ChainRng rng(1, 2);
    double lo = 1.0;
    double hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    Eigen::Vector3d p(0.0, 1.0, 0.0);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(rng.categorical(p), 1);
    }
}

TEST(ExactMarginals, IdealXAlternates) {
    const auto m = exact_marginals(steps({x_gate()}, restless_identity_matrix()), 6);
    for (std::size_t z = 0; z < m.size(); ++z) {
        const ProbabilityVector3 expected =
            z % 2 == 0 ? ProbabilityVector3(0, 1, 0) : ProbabilityVector3(1, 0, 0);
        EXPECT_LT((m[z] - expected).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(ExactMarginals, HadamardFixedPoint) {
    const auto m = exact_marginals(steps({hadamard()}, restless_identity_matrix()), 20);
    for (const auto &v : m) {
        EXPECT_LT((v - ProbabilityVector3(0.5, 0.5, 0.0)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ExactMarginals, SizeBound) {
    const auto c = steps({x_gate(), hadamard()}, restless_identity_matrix());
    EXPECT_THROW(exact_marginals(c, 60000), SizeError);
    EXPECT_NO_THROW(exact_marginals(c, 50000));
}

class OracleEquivalence : public ::testing::TestWithParam<bool> {};

TEST_P(OracleEquivalence, SamplerMatchesExactMarginals) {
    const bool restless = GetParam();
    std::mt19937_64 rng(21);
    const QutritChannel damp = amplitude_damping(2e-6, {});
    std::vector<CircuitStep> c;
    const PostMeasurementMatrix post =
        restless ? restless_identity_matrix() : standard_reset_matrix();
    for (int k = 0; k < 6; ++k) {
        c.push_back({transition_matrix({random_unitary(rng)}, &damp), post});
    }
    const int shots = 30;
    const auto streams = run_realizations(c, shots, default_assignment(), 77, 512);
    EXPECT_LT(max_oracle_z(streams, exact_marginals(c, shots)), 4.0);
}

INSTANTIATE_TEST_SUITE_P(Modes, OracleEquivalence, ::testing::Values(true, false));

TEST(Markov, NextStateDependsOnlyOnPrevious) {
    // Restless: phi_zeta ~ T_k e_{phi_{zeta-1}}. Conditional frequencies over
    // all realizations must match the transition column.
    std::mt19937_64 rng(31);
    std::vector<CircuitStep> c;
    for (int k = 0; k < 3; ++k) {
        c.push_back({of(random_unitary(rng)), restless_identity_matrix()});
    }
    const int shots = 20;
    const auto streams = run_realizations(c, shots, default_assignment(), 5, 2000);
    const int kk = static_cast<int>(c.size());
    double counts[3][3][3] = {};
    for (const auto &s : streams) {
        for (std::size_t z = 1; z < s.size(); ++z) {
            const int k = static_cast<int>(z % kk);
            counts[k][s.basis_state_at(z - 1)][s.basis_state_at(z)] += 1.0;
        }
    }
    for (int k = 0; k < kk; ++k) {
        for (int nu = 0; nu < 3; ++nu) {
            const double total = counts[k][nu][0] + counts[k][nu][1] + counts[k][nu][2];
            ASSERT_GT(total, 100.0);
            for (int mu = 0; mu < 3; ++mu) {
                const double p = c[static_cast<std::size_t>(k)].transition(mu, nu);
                const double sigma = std::sqrt(std::max(p * (1 - p), 1.0 / total) / total);
                EXPECT_LT(std::abs(counts[k][nu][mu] / total - p), 4 * sigma);
            }
        }
    }
}

TEST(StandardExecution, OrderDoesNotMatter) {
    std::mt19937_64 rng(41);
    std::vector<QutritMatrix> u{random_unitary(rng), random_unitary(rng), random_unitary(rng)};
    const auto forward = steps(u, standard_reset_matrix());
    const auto backward = steps({u[2], u[1], u[0]}, standard_reset_matrix());
    const int shots = 4000;
    const ShotStream a = run(forward, shots, default_assignment(), {1, 0, false});
    const ShotStream b = run(backward, shots, default_assignment(), {2, 0, false});
    for (int k = 0; k < 3; ++k) {
        double fa = 0.0;
        double fb = 0.0;
        for (int j = 0; j < shots; ++j) {
            fa += a.outcome(k, j);
            fb += b.outcome(2 - k, j);
        }
        fa /= shots;
        fb /= shots;
        const double p = 0.5 * (fa + fb);
        const double sigma = std::sqrt(2.0 * std::max(p * (1 - p), 1.0 / shots) / shots);
        EXPECT_LT(std::abs(fa - fb), 4 * sigma) << k;
    }
}

TEST(ShotStreamCsv, HeaderAndRows) {
    const auto c = steps({x_gate(), hadamard()}, restless_identity_matrix());
    const auto streams = run_realizations(c, 2, default_assignment(), 3, 2);
    std::ostringstream out;
    write_shot_stream_csv(out, streams);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "realization,j,k,zeta,outcome,basis_state");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 8), "0,0,0,0,");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 7);
}

} // namespace
} // namespace restless

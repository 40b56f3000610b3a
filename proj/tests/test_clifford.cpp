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
#include <set>

#include <gtest/gtest.h>

#include "restless/clifford.hpp"
#include "restless/experiments.hpp"
#include "restless/restless_core.hpp"

namespace restless {
namespace {

const CliffordGroup &group() { return CliffordGroup::instance(); }

QubitMatrix pauli_x() {
    QubitMatrix x;
    x << 0, 1, 1, 0;
    return x;
}

TEST(CliffordGroup, HasTwentyFourDistinctElements) {
    for (int i = 0; i < CliffordGroup::kSize; ++i) {
        EXPECT_EQ(group()[i].index, i);
        EXPECT_TRUE(equal_up_to_phase(word_unitary(group()[i].word), group()[i].unitary));
        for (int j = 0; j < i; ++j) {
            EXPECT_FALSE(equal_up_to_phase(group()[i].unitary, group()[j].unitary)) << i << " " << j;
        }
    }
    EXPECT_TRUE(group()[group().identity()].word.empty());
}

TEST(CliffordGroup, MeanGeneratorCount) {
    // Independent breadth-first search: 1, 4, 10, 8, 1 elements at lengths
    // 0..4, so 4 + 20 + 24 + 4 = 52 generators.
    EXPECT_DOUBLE_EQ(group().mean_generator_count(), 52.0 / 24.0);
}

TEST(CliffordGroup, TableAndInverseAreConsistent) {
    for (int a = 0; a < CliffordGroup::kSize; ++a) {
        EXPECT_EQ(group().then(a, group().inverse(a)), group().identity());
        for (int b = 0; b < CliffordGroup::kSize; ++b) {
            const QubitMatrix u = group()[b].unitary * group()[a].unitary;
            EXPECT_EQ(group().then(a, b), group().index_of(u));
        }
    }
}

TEST(CliffordGroup, IndexOfRejectsNonClifford) {
    EXPECT_THROW(group().index_of(rotation(RotationAxis::X, 0.3)), ValidationError);
}

TEST(Word, TimeOrder) {
    const std::vector<Generator> w{Generator::XPlus, Generator::YPlus};
    const QubitMatrix expected = generator_unitary(Generator::YPlus) * generator_unitary(Generator::XPlus);
    EXPECT_TRUE(equal_up_to_phase(word_unitary(w), expected));
}

TEST(RandomSequence, DepthZeroIsTarget) {
    ChainRng rng(1, 0);
    const auto id = random_clifford_sequence(0, ComposeTarget::Identity, rng);
    ASSERT_EQ(id.size(), 1U);
    EXPECT_EQ(id[0], group().identity());
    const auto x = random_clifford_sequence(0, ComposeTarget::X, rng);
    EXPECT_TRUE(equal_up_to_phase(group()[x[0]].unitary, pauli_x()));
}

TEST(RandomSequence, ProductEqualsTarget) {
    ChainRng rng(2, 0);
    for (ComposeTarget target : {ComposeTarget::Identity, ComposeTarget::X}) {
        const QubitMatrix want = target == ComposeTarget::X ? pauli_x() : QubitMatrix::Identity();
        for (int m : {1, 2, 5, 30, 120}) {
            for (int trial = 0; trial < 20; ++trial) {
                const auto seq = random_clifford_sequence(m, target, rng);
                ASSERT_EQ(seq.size(), static_cast<std::size_t>(m + 1));
                EXPECT_TRUE(equal_up_to_phase(word_unitary(flatten(seq)), want)) << m;
            }
        }
    }
}

TEST(RandomSequence, ElementsCoverGroup) {
    ChainRng rng(3, 0);
    std::set<int> seen;
    const auto seq = random_clifford_sequence(2000, ComposeTarget::Identity, rng);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        seen.insert(seq[i]);
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(CliffordGroup::kSize));
}

TEST(ComposeTarget, Parse) {
    EXPECT_EQ(parse_compose_target("x"), ComposeTarget::X);
    EXPECT_EQ(to_string(ComposeTarget::Identity), "identity");
    EXPECT_THROW(parse_compose_target("z"), ValidationError);
}

TEST(ErrorPerClifford, FrozenValues) {
    // Python: 1 - ((2 * 0.999 + 1) / 3) ** 2.1666
    EXPECT_NEAR(error_per_clifford(0.999, 2.1666), 0.001443838341783965, 1e-15);
    EXPECT_DOUBLE_EQ(error_per_clifford(1.0), 0.0);
    EXPECT_NEAR(error_per_clifford(0.0), 1.0 - std::pow(3.0, -52.0 / 24.0), 1e-15);
    EXPECT_THROW(error_per_clifford(1.1), DomainError);
    EXPECT_THROW(error_per_clifford(-0.1), DomainError);
}

TEST(ErrorPerClifford, MonotoneInFidelity) {
    double previous = 1.0;
    for (double phi = 0.0; phi <= 1.0; phi += 0.05) {
        const double r = error_per_clifford(phi);
        EXPECT_LE(r, previous);
        previous = r;
    }
}

TEST(Sensitivity, PeakFrozenValues) {
    // Python: m* = -1 / log(1 - 2 r), -2 A m* (1 - 2 r)^(m* - 1) with A = 2/3, r = 0.01.
    const SensitivityPeak p = orbit_sensitivity_peak(2.0 / 3.0, 0.01);
    ASSERT_TRUE(p.defined);
    EXPECT_NEAR(p.depth, 49.49831645250911, 1e-10);
    EXPECT_NEAR(p.value, -24.7747115584711, 1e-10);
    EXPECT_NEAR(p.approximation, -24.525296078096154, 1e-10);
    EXPECT_LT(std::abs(p.value / p.approximation - 1.0), 0.02);
}

TEST(Sensitivity, PeakIsTheExtremum) {
    const SensitivityPeak p = orbit_sensitivity_peak(0.5, 0.004);
    for (double m : {p.depth - 5.0, p.depth + 5.0, p.depth * 0.5, p.depth * 2.0}) {
        EXPECT_GT(orbit_sensitivity(0.5, 0.004, m), p.value);
    }
}

TEST(Sensitivity, UndefinedAtZeroErrorAndRejectsBadInput) {
    EXPECT_FALSE(orbit_sensitivity_peak(0.5, 0.0).defined);
    EXPECT_THROW(orbit_sensitivity(0.5, 0.5, 10.0), DomainError);
    EXPECT_THROW(orbit_sensitivity(0.5, 0.01, 0.0), DomainError);
}

} // namespace
} // namespace restless

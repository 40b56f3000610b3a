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
 * The 24-element single-qubit Clifford group over the generators
 * R_x(+-pi/2), R_y(+-pi/2).
 *
 * Words are in time order: word[0] is applied first, so the unitary of a
 * word w is R(w[n-1]) ... R(w[1]) R(w[0]).
 */

#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "restless/pulse_engine.hpp"
#include "restless/qutrit.hpp"

namespace restless {

class ChainRng;

struct CliffordElement {
    int index = 0;
    /// Minimal-length decomposition; empty for the identity.
    std::vector<Generator> word;
    QubitMatrix unitary = QubitMatrix::Identity();
};

/// Ideal two-level unitary of a generator.
QubitMatrix generator_unitary(Generator g);

/// Product of a word in time order.
QubitMatrix word_unitary(const std::vector<Generator> &word);

/// |Tr(A^dagger B)| / 2 == 1 within `tolerance`.
bool equal_up_to_phase(const QubitMatrix &a, const QubitMatrix &b, double tolerance = 1e-10);

class CliffordGroup {
  public:
    static constexpr int kSize = 24;

    /// Process-wide table built on first use by breadth-first search.
    static const CliffordGroup &instance();

    const CliffordElement &operator[](int index) const {
        return elements_[static_cast<std::size_t>(index)];
    }
    int identity() const { return 0; }
    /// Index of U_second U_first (first applied first).
    int then(int first, int second) const {
        return table_[static_cast<std::size_t>(first)][static_cast<std::size_t>(second)];
    }
    int inverse(int index) const { return inverse_[static_cast<std::size_t>(index)]; }
    /// Throws ValidationError when u is not a Clifford up to global phase.
    int index_of(const QubitMatrix &u) const;
    /// Average minimal word length over the group.
    double mean_generator_count() const;

  private:
    CliffordGroup();

    std::vector<CliffordElement> elements_;
    std::array<std::array<int, kSize>, kSize> table_{};
    std::array<int, kSize> inverse_{};
};

enum class ComposeTarget : std::uint8_t { Identity, X };

std::string_view to_string(ComposeTarget target);
/// Accepts "identity" or "x"; throws ValidationError otherwise.
ComposeTarget parse_compose_target(std::string_view text);

/// m uniformly random elements followed by the element that brings the
/// total product to the target, m + 1 indices in time order.
std::vector<int> random_clifford_sequence(int m, ComposeTarget target, ChainRng &rng);

/// Generator word of a sequence of Clifford indices.
std::vector<Generator> flatten(const std::vector<int> &sequence);

} // namespace restless

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

#include "restless/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "restless/restless_core.hpp"

namespace restless {

QubitMatrix generator_unitary(Generator g) { return rotation(axis_of(g), angle_of(g)); }

QubitMatrix word_unitary(const std::vector<Generator> &word) {
    QubitMatrix u = QubitMatrix::Identity();
    for (Generator g : word) {
        u = generator_unitary(g) * u;
    }
    return u;
}

bool equal_up_to_phase(const QubitMatrix &a, const QubitMatrix &b, double tolerance) {
    return std::abs(std::abs((a.adjoint() * b).trace()) / 2.0 - 1.0) < tolerance;
}

const CliffordGroup &CliffordGroup::instance() {
    static const CliffordGroup group;
    return group;
}

CliffordGroup::CliffordGroup() {
    elements_.push_back(CliffordElement{0, {}, QubitMatrix::Identity()});
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int current = queue.front();
        queue.pop_front();
        for (int gi = 0; gi < kGeneratorCount; ++gi) {
            const auto g = static_cast<Generator>(gi);
            const QubitMatrix u =
                generator_unitary(g) * elements_[static_cast<std::size_t>(current)].unitary;
            bool seen = false;
            for (const auto &e : elements_) {
                if (equal_up_to_phase(e.unitary, u)) {
                    seen = true;
                    break;
                }
            }
            if (!seen) {
                CliffordElement e;
                e.index = static_cast<int>(elements_.size());
                e.word = elements_[static_cast<std::size_t>(current)].word;
                e.word.push_back(g);
                e.unitary = u;
                elements_.push_back(e);
                queue.push_back(e.index);
            }
        }
    }
    if (elements_.size() != static_cast<std::size_t>(kSize)) {
        throw Error("Clifford search produced " + std::to_string(elements_.size()) +
                    " elements");
    }
    for (int a = 0; a < kSize; ++a) {
        for (int b = 0; b < kSize; ++b) {
            table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                index_of((*this)[b].unitary * (*this)[a].unitary);
        }
        inverse_[static_cast<std::size_t>(a)] = index_of((*this)[a].unitary.adjoint());
    }
}

int CliffordGroup::index_of(const QubitMatrix &u) const {
    for (const auto &e : elements_) {
        if (equal_up_to_phase(e.unitary, u, 1e-8)) {
            return e.index;
        }
    }
    throw ValidationError("matrix is not a single-qubit Clifford");
}

double CliffordGroup::mean_generator_count() const {
    double total = 0.0;
    for (const auto &e : elements_) {
        total += static_cast<double>(e.word.size());
    }
    return total / kSize;
}

std::string_view to_string(ComposeTarget target) {
    return target == ComposeTarget::Identity ? "identity" : "x";
}

ComposeTarget parse_compose_target(std::string_view text) {
    if (text == "identity" || text == "i") {
        return ComposeTarget::Identity;
    }
    if (text == "x" || text == "X") {
        return ComposeTarget::X;
    }
    throw ValidationError("compose target must be identity or x");
}

std::vector<int> random_clifford_sequence(int m, ComposeTarget target, ChainRng &rng) {
    if (m < 0) {
        throw ValidationError("random_clifford_sequence: depth must be non-negative");
    }
    const auto &group = CliffordGroup::instance();
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(m) + 1);
    int product = group.identity();
    for (int i = 0; i < m; ++i) {
        const int c = std::min(static_cast<int>(rng.uniform() * CliffordGroup::kSize),
                               CliffordGroup::kSize - 1);
        seq.push_back(c);
        product = group.then(product, c);
    }
    static const int x_index = [] {
        QubitMatrix x;
        x << 0, 1, 1, 0;
        return CliffordGroup::instance().index_of(x);
    }();
    const int goal = target == ComposeTarget::Identity ? group.identity() : x_index;
    // last * product = goal  =>  last = goal * product^-1
    seq.push_back(group.then(group.inverse(product), goal));
    return seq;
}

std::vector<Generator> flatten(const std::vector<int> &sequence) {
    const auto &group = CliffordGroup::instance();
    std::vector<Generator> word;
    for (int c : sequence) {
        const auto &w = group[c].word;
        word.insert(word.end(), w.begin(), w.end());
    }
    return word;
}

} // namespace restless

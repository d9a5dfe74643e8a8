// Copyright 2026 The tnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact classical values by enumerating Alice's deterministic (optionally
// signed) assignments. Bob's best response separates over his questions, so
// it is computed greedily and never enumerated.

#include <cstdint>
#include <vector>

#include "tnorm/game.hpp"

namespace tnorm {

struct ClassicalCertificate {
  double value = 0.0;
  std::vector<int> alice_answers;
  std::vector<int> alice_signs;
  std::vector<int> bob_answers;
  std::vector<int> bob_signs;
  /// True when -g attained the maximum strictly.
  bool sign_flipped = false;
  /// False for heuristic results, which are only lower bounds.
  bool exact = true;
  std::uint64_t assignments_checked = 0;
};

struct ExactOptions {
  /// Largest number of Alice assignments to enumerate.
  std::uint64_t cap = 10'000'000;
  /// When the cap would be exceeded, fall back to alternating best responses
  /// from random starts instead of throwing CapExceeded.
  bool heuristic = false;
  int restarts = 64;
  std::uint64_t seed = 0;
};

/// max over deterministic strategies of the winning probability.
ClassicalCertificate classical_value(const Game& game, const ExactOptions& options = {});

/// sup |<g, P_A (x) P_B>| over the unit balls of l_inf(l1); Alice ranges over
/// signed assignments, (2 na)^nx of them.
ClassicalCertificate injective_norm(const BellFunctional& g, const ExactOptions& options = {});

/// max over deterministic (sa, sb) of |sum_{x,y} g[x, sa(x), y, sb(y)]|.
ClassicalCertificate bell_classical_value(const BellFunctional& g,
                                          const ExactOptions& options = {});

/// Re-evaluates a certificate against g:
/// (+-1) * sum_{x,y} s_A(x) s_B(y) g[x, sa(x), y, sb(y)].
double evaluate_certificate(const BellFunctional& g, const ClassicalCertificate& cert);

/// Number of Alice assignments enumerated for base^nx, saturated at
/// UINT64_MAX.
std::uint64_t assignment_count(int base, int nx);

namespace serial {

// Single-threaded references: full recomputation per assignment, no prefix
// reuse. Results are bit-identical to the parallel versions.
ClassicalCertificate classical_value(const Game& game, std::uint64_t cap = 10'000'000);
ClassicalCertificate injective_norm(const BellFunctional& g, std::uint64_t cap = 10'000'000);
ClassicalCertificate bell_classical_value(const BellFunctional& g,
                                          std::uint64_t cap = 10'000'000);

}  // namespace serial

}  // namespace tnorm

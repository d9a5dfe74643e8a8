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

// Shared pieces of the parallel and serial enumerations.

#include <cstdint>
#include <limits>
#include <vector>

#include "tnorm/exact.hpp"

namespace tnorm::detail {

enum class Mode {
  kPlus,       // max over +g only (nonnegative games)
  kPlusMinus,  // max over +g and -g, unsigned assignments
  kSigned,     // signed assignments on both sides
};

inline int alphabet(Mode mode, int na) { return mode == Mode::kSigned ? 2 * na : na; }

/// Choice c encodes (answer, sign): answer c / 2 and sign + for even c in the
/// signed mode, answer c with sign + otherwise.
inline int choice_answer(Mode mode, int c) { return mode == Mode::kSigned ? c / 2 : c; }
inline int choice_sign(Mode mode, int c) { return mode == Mode::kSigned && (c & 1) ? -1 : 1; }

/// Mixed-radix digits of k with question 0 most significant.
inline void decode(std::uint64_t k, int base, int nx, std::vector<int>& digits) {
  digits.assign(nx, 0);
  for (int x = nx - 1; x >= 0; --x) {
    digits[x] = static_cast<int>(k % static_cast<std::uint64_t>(base));
    k /= static_cast<std::uint64_t>(base);
  }
}

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t k = 0;

  void offer(double v, std::uint64_t idx) {
    if (v > value || (v == value && idx < k)) {
      value = v;
      k = idx;
    }
  }
};

/// Bob's greedy response for the column sums c[y * nb + b] of a fixed Alice
/// assignment. Returns plus = sum_y max_b c, minus = sum_y max_b (-c) and
/// signed = sum_y max_b |c|, each summed in increasing y.
struct BobValues {
  double plus = 0.0;
  double minus = 0.0;
  double abs = 0.0;
};

inline BobValues bob_values(const double* c, int ny, int nb) {
  BobValues out;
  for (int y = 0; y < ny; ++y) {
    const double* row = c + static_cast<std::size_t>(y) * nb;
    double hi = row[0], lo = row[0], ab = row[0] < 0 ? -row[0] : row[0];
    for (int b = 1; b < nb; ++b) {
      if (row[b] > hi) hi = row[b];
      if (row[b] < lo) lo = row[b];
      const double m = row[b] < 0 ? -row[b] : row[b];
      if (m > ab) ab = m;
    }
    out.plus += hi;
    out.minus += -lo;
    out.abs += ab;
  }
  return out;
}

/// Certificate for Alice's assignment k; `flip` selects the -g response.
ClassicalCertificate build_certificate(const BellFunctional& g, Mode mode, std::uint64_t k,
                                       bool flip, double value, std::uint64_t checked);

}  // namespace tnorm::detail

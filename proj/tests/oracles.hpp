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

// Brute-force references written independently of the library kernels.

#include <cmath>
#include <cstdint>
#include <vector>

#include "tnorm/game.hpp"

namespace tnorm::testing {

// Odometer over base^n digits; returns false after the last tuple.
inline bool next_tuple(std::vector<int>& digits, int base) {
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

// max over all (sa, sb) of sum pi(x, y) V(sa(x), sb(y), x, y).
inline double brute_classical(const Game& g) {
  const Dims& d = g.dims();
  double best = 0.0;
  std::vector<int> sa(d.nx, 0);
  do {
    std::vector<int> sb(d.ny, 0);
    do {
      double w = 0.0;
      for (int x = 0; x < d.nx; ++x)
        for (int y = 0; y < d.ny; ++y) w += g.pi(x, y) * g.v(x, y, sa[x], sb[y]);
      best = std::max(best, w);
    } while (next_tuple(sb, d.nb));
  } while (next_tuple(sa, d.na));
  return best;
}

// max over signed deterministic choices of both parties of |sum g|.
inline double brute_injective(const BellFunctional& g) {
  const Dims& d = g.dims();
  double best = 0.0;
  std::vector<int> ca(d.nx, 0);
  do {
    std::vector<int> cb(d.ny, 0);
    do {
      double v = 0.0;
      for (int x = 0; x < d.nx; ++x)
        for (int y = 0; y < d.ny; ++y) {
          const double s = ((ca[x] % 2) ? -1.0 : 1.0) * ((cb[y] % 2) ? -1.0 : 1.0);
          v += s * g(x, ca[x] / 2, y, cb[y] / 2);
        }
      best = std::max(best, std::abs(v));
    } while (next_tuple(cb, 2 * d.nb));
  } while (next_tuple(ca, 2 * d.na));
  return best;
}

// max over unsigned deterministic choices of |sum g|.
inline double brute_bell_classical(const BellFunctional& g) {
  const Dims& d = g.dims();
  double best = 0.0;
  std::vector<int> sa(d.nx, 0);
  do {
    std::vector<int> sb(d.ny, 0);
    do {
      double v = 0.0;
      for (int x = 0; x < d.nx; ++x)
        for (int y = 0; y < d.ny; ++y) v += g(x, sa[x], y, sb[y]);
      best = std::max(best, std::abs(v));
    } while (next_tuple(sb, d.nb));
  } while (next_tuple(sa, d.na));
  return best;
}

}  // namespace tnorm::testing

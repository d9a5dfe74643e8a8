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

#include <string>

#include "exact_internal.hpp"
#include "tnorm/error.hpp"

namespace tnorm::serial {

namespace {

using detail::Mode;

ClassicalCertificate enumerate(const BellFunctional& g, Mode mode, std::uint64_t cap) {
  const Dims& d = g.dims();
  const int base = detail::alphabet(mode, d.na);
  const std::uint64_t total = assignment_count(base, d.nx);
  if (total > cap) {
    throw CapExceeded(std::to_string(total) + " Alice assignments exceed the cap of " +
                      std::to_string(cap));
  }
  detail::Best plus, minus, signed_best;
  std::vector<int> digits;
  std::vector<double> c(static_cast<std::size_t>(d.ny) * d.nb);
  for (std::uint64_t k = 0; k < total; ++k) {
    detail::decode(k, base, d.nx, digits);
    for (int y = 0; y < d.ny; ++y)
      for (int b = 0; b < d.nb; ++b) {
        double s = 0.0;
        for (int x = 0; x < d.nx; ++x) {
          const int a = detail::choice_answer(mode, digits[x]);
          s = s + detail::choice_sign(mode, digits[x]) * g(x, a, y, b);
        }
        c[static_cast<std::size_t>(y) * d.nb + b] = s;
      }
    const auto v = detail::bob_values(c.data(), d.ny, d.nb);
    plus.offer(v.plus, k);
    minus.offer(v.minus, k);
    signed_best.offer(v.abs, k);
  }
  if (mode == Mode::kSigned) {
    return detail::build_certificate(g, mode, signed_best.k, false, signed_best.value, total);
  }
  if (mode == Mode::kPlusMinus && minus.value > plus.value) {
    return detail::build_certificate(g, mode, minus.k, true, minus.value, total);
  }
  return detail::build_certificate(g, mode, plus.k, false, plus.value, total);
}

}  // namespace

ClassicalCertificate classical_value(const Game& game, std::uint64_t cap) {
  return enumerate(game_to_functional(game), Mode::kPlus, cap);
}

ClassicalCertificate injective_norm(const BellFunctional& g, std::uint64_t cap) {
  return enumerate(g, Mode::kSigned, cap);
}

ClassicalCertificate bell_classical_value(const BellFunctional& g, std::uint64_t cap) {
  return enumerate(g, Mode::kPlusMinus, cap);
}

}  // namespace tnorm::serial

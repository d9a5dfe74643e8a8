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

#include "tnorm/exact.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "exact_internal.hpp"
#include "tnorm/error.hpp"
#include "tnorm/rng.hpp"

namespace tnorm {

namespace detail {

ClassicalCertificate build_certificate(const BellFunctional& g, Mode mode, std::uint64_t k,
                                       bool flip, double value, std::uint64_t checked) {
  const Dims& d = g.dims();
  std::vector<int> digits;
  decode(k, alphabet(mode, d.na), d.nx, digits);
  ClassicalCertificate cert;
  cert.value = value;
  cert.sign_flipped = flip;
  cert.assignments_checked = checked;
  for (int x = 0; x < d.nx; ++x) {
    cert.alice_answers.push_back(choice_answer(mode, digits[x]));
    cert.alice_signs.push_back(choice_sign(mode, digits[x]));
  }
  for (int y = 0; y < d.ny; ++y) {
    int best_b = 0;
    double best = -std::numeric_limits<double>::infinity();
    double best_c = 0.0;
    for (int b = 0; b < d.nb; ++b) {
      double c = 0.0;
      for (int x = 0; x < d.nx; ++x)
        c = c + cert.alice_signs[x] * g(x, cert.alice_answers[x], y, b);
      const double score = mode == Mode::kSigned ? std::abs(c) : (flip ? -c : c);
      if (score > best) {
        best = score;
        best_b = b;
        best_c = c;
      }
    }
    cert.bob_answers.push_back(best_b);
    cert.bob_signs.push_back(mode == Mode::kSigned && best_c < 0 ? -1 : 1);
  }
  return cert;
}

}  // namespace detail

namespace {

using detail::Mode;

struct ChunkResult {
  detail::Best plus, minus, abs;
};

// Enumerates assignments [begin, end) with an odometer; prefix[x] holds the
// column sums over questions < x so only changed digits are recomputed.
ChunkResult enumerate_chunk(const BellFunctional& g, Mode mode, std::uint64_t begin,
                            std::uint64_t end) {
  const Dims& d = g.dims();
  const int base = detail::alphabet(mode, d.na);
  const std::size_t width = static_cast<std::size_t>(d.ny) * d.nb;
  const auto data = g.data();
  std::vector<int> digits;
  detail::decode(begin, base, d.nx, digits);
  std::vector<double> prefix((d.nx + 1) * width, 0.0);
  auto refresh = [&](int from) {
    for (int x = from; x < d.nx; ++x) {
      const int a = detail::choice_answer(mode, digits[x]);
      const int s = detail::choice_sign(mode, digits[x]);
      const double* src = data.data() + d.index(x, a, 0, 0);
      const double* prev = prefix.data() + x * width;
      double* next = prefix.data() + (x + 1) * width;
      for (std::size_t j = 0; j < width; ++j) next[j] = prev[j] + s * src[j];
    }
  };
  refresh(0);
  ChunkResult r;
  for (std::uint64_t k = begin; k < end; ++k) {
    const auto v = detail::bob_values(prefix.data() + d.nx * width, d.ny, d.nb);
    r.plus.offer(v.plus, k);
    r.minus.offer(v.minus, k);
    r.abs.offer(v.abs, k);
    if (k + 1 == end) break;
    int p = d.nx - 1;
    while (++digits[p] == base) {
      digits[p] = 0;
      --p;
    }
    refresh(p);
  }
  return r;
}

ClassicalCertificate finish(const BellFunctional& g, Mode mode, const ChunkResult& r,
                            std::uint64_t checked) {
  if (mode == Mode::kSigned) {
    return detail::build_certificate(g, mode, r.abs.k, false, r.abs.value, checked);
  }
  if (mode == Mode::kPlusMinus && r.minus.value > r.plus.value) {
    return detail::build_certificate(g, mode, r.minus.k, true, r.minus.value, checked);
  }
  return detail::build_certificate(g, mode, r.plus.k, false, r.plus.value, checked);
}

// Alternating best responses. Each step is exact for one party given the
// other, so the objective never decreases. Only a lower bound overall.
ClassicalCertificate heuristic(const BellFunctional& g, Mode mode, const ExactOptions& opt) {
  const Dims& d = g.dims();
  ClassicalCertificate best;
  best.value = -std::numeric_limits<double>::infinity();
  best.exact = false;
  const bool try_flip = mode == Mode::kPlusMinus;
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    for (int flip = 0; flip <= (try_flip ? 1 : 0); ++flip) {
      const double sg = flip ? -1.0 : 1.0;
      Rng rng(mix_seed(opt.seed, static_cast<std::uint64_t>(r)));
      std::vector<int> sa(d.nx), ssa(d.nx, 1), sb(d.ny), ssb(d.ny, 1);
      for (int x = 0; x < d.nx; ++x) {
        sa[x] = static_cast<int>(rng.below(d.na));
        if (mode == Mode::kSigned) ssa[x] = rng.below(2) ? -1 : 1;
      }
      double value = -std::numeric_limits<double>::infinity();
      for (int iter = 0; iter < 1000; ++iter) {
        // Bob responds.
        for (int y = 0; y < d.ny; ++y) {
          double top = -std::numeric_limits<double>::infinity();
          for (int b = 0; b < d.nb; ++b) {
            double c = 0.0;
            for (int x = 0; x < d.nx; ++x) c += ssa[x] * sg * g(x, sa[x], y, b);
            const double score = mode == Mode::kSigned ? std::abs(c) : c;
            if (score > top) {
              top = score;
              sb[y] = b;
              ssb[y] = mode == Mode::kSigned && c < 0 ? -1 : 1;
            }
          }
        }
        // Alice responds.
        double total = 0.0;
        for (int x = 0; x < d.nx; ++x) {
          double top = -std::numeric_limits<double>::infinity();
          for (int a = 0; a < d.na; ++a) {
            double c = 0.0;
            for (int y = 0; y < d.ny; ++y) c += ssb[y] * sg * g(x, a, y, sb[y]);
            const double score = mode == Mode::kSigned ? std::abs(c) : c;
            if (score > top) {
              top = score;
              sa[x] = a;
              ssa[x] = mode == Mode::kSigned && c < 0 ? -1 : 1;
            }
          }
          total += top;
        }
        if (total <= value + 1e-15 * (1.0 + std::abs(value))) break;
        value = total;
      }
      if (value > best.value) {
        best.value = value;
        best.alice_answers = sa;
        best.alice_signs = ssa;
        best.bob_answers = sb;
        best.bob_signs = ssb;
        best.sign_flipped = flip == 1;
      }
    }
  }
  best.value = evaluate_certificate(g, best);
  return best;
}

ClassicalCertificate run(const BellFunctional& g, Mode mode, const ExactOptions& opt) {
  const Dims& d = g.dims();
  const std::uint64_t total = assignment_count(detail::alphabet(mode, d.na), d.nx);
  if (total > opt.cap) {
    if (opt.heuristic) return heuristic(g, mode, opt);
    throw CapExceeded(std::to_string(total) + " Alice assignments exceed the cap of " +
                      std::to_string(opt.cap));
  }
  const std::uint64_t chunks =
      std::min<std::uint64_t>(total, static_cast<std::uint64_t>(omp_get_max_threads()) * 8);
  std::vector<ChunkResult> parts(chunks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    using wide = unsigned __int128;
    const auto begin = static_cast<std::uint64_t>(wide{total} * c / chunks);
    const auto end = static_cast<std::uint64_t>(wide{total} * (c + 1) / chunks);
    if (begin < end) parts[c] = enumerate_chunk(g, mode, begin, end);
  }
  ChunkResult merged;
  for (const auto& p : parts) {
    merged.plus.offer(p.plus.value, p.plus.k);
    merged.minus.offer(p.minus.value, p.minus.k);
    merged.abs.offer(p.abs.value, p.abs.k);
  }
  return finish(g, mode, merged, total);
}

}  // namespace

std::uint64_t assignment_count(int base, int nx) {
  std::uint64_t n = 1;
  for (int i = 0; i < nx; ++i) {
    if (n > UINT64_MAX / static_cast<std::uint64_t>(base)) return UINT64_MAX;
    n *= static_cast<std::uint64_t>(base);
  }
  return n;
}

ClassicalCertificate classical_value(const Game& game, const ExactOptions& options) {
  return run(game_to_functional(game), Mode::kPlus, options);
}

ClassicalCertificate injective_norm(const BellFunctional& g, const ExactOptions& options) {
  return run(g, Mode::kSigned, options);
}

ClassicalCertificate bell_classical_value(const BellFunctional& g, const ExactOptions& options) {
  return run(g, Mode::kPlusMinus, options);
}

double evaluate_certificate(const BellFunctional& g, const ClassicalCertificate& cert) {
  const Dims& d = g.dims();
  if (cert.alice_answers.size() != static_cast<std::size_t>(d.nx) ||
      cert.bob_answers.size() != static_cast<std::size_t>(d.ny) ||
      cert.alice_signs.size() != cert.alice_answers.size() ||
      cert.bob_signs.size() != cert.bob_answers.size()) {
    throw DimensionMismatch("certificate does not match functional dims");
  }
  double total = 0.0;
  for (int y = 0; y < d.ny; ++y) {
    double col = 0.0;
    for (int x = 0; x < d.nx; ++x)
      col = col + cert.alice_signs[x] * g(x, cert.alice_answers[x], y, cert.bob_answers[y]);
    total += cert.bob_signs[y] * col;
  }
  return cert.sign_flipped ? -total : total;
}

}  // namespace tnorm

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

#include <cmath>
#include <random>

#include "doctest.h"
#include "tnorm/error.hpp"
#include "tnorm/game.hpp"
#include "tnorm/rng.hpp"

using namespace tnorm;

namespace {

MarginalTensor random_marginal(Rng& rng, Side side, Space space, int nq, int na) {
  std::vector<double> e(static_cast<std::size_t>(nq) * na);
  // Dyadic entries keep every product and sum exact in binary.
  for (auto& v : e) v = static_cast<double>(static_cast<int>(rng.below(33)) - 16) / 8.0;
  return MarginalTensor(side, space, nq, na, std::move(e));
}

}  // namespace

TEST_CASE("flattening puts Alice's pair outermost") {
  Dims d{2, 3, 4, 5};
  CHECK(d.index(0, 0, 0, 1) == 1);
  CHECK(d.index(0, 0, 1, 0) == 5);
  CHECK(d.index(0, 1, 0, 0) == 15);
  CHECK(d.index(1, 0, 0, 0) == 60);
  CHECK(d.size() == 120);
  CHECK(d.alice_size() == 8);
  CHECK(d.bob_size() == 15);
}

TEST_CASE("dims must be positive") {
  CHECK_THROWS_AS(Dims({0, 1, 1, 1}).validate(), InvalidInput);
  CHECK_THROWS_AS(BellFunctional(Dims{1, 1, 2, 2}, std::vector<double>(3)), DimensionMismatch);
}

TEST_CASE("game construction checks its inputs") {
  const Dims d{1, 1, 2, 2};
  std::vector<std::uint8_t> v(4, 1);
  CHECK_THROWS_AS(Game(d, {0.5}, v), InvalidInput);
  CHECK_THROWS_WITH_AS(Game(d, {0.5}, v), doctest::Contains("distribution not normalized"),
                       InvalidInput);
  CHECK_THROWS_AS(Game(d, {-1.0}, v), InvalidInput);
  std::vector<std::uint8_t> bad(4, 2);
  CHECK_THROWS_WITH_AS(Game(d, {1.0}, bad), doctest::Contains("predicate must be 0/1"),
                       InvalidInput);
  Game r(d, {0.5}, v, Game::Options{true});
  CHECK(r.pi(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("CHSH embeddings") {
  const Game g = chsh_game();
  CHECK(g.is_xor());
  const BellFunctional f = game_to_functional(g);
  double total = 0.0;
  for (double v : f.data()) total += v;
  CHECK(total == doctest::Approx(2.0));
  const BellFunctional b = chsh_bell();
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb) {
          const bool win = (a ^ bb) == (x & y);
          CHECK(b(x, a, y, bb) == (win ? 1.0 : -1.0));
          CHECK(f(x, a, y, bb) == (win ? 0.25 : 0.0));
        }
  const BellFunctional c = chsh_correlation();
  CHECK(c.dims() == Dims{2, 2, 1, 1});
  CHECK(c(1, 0, 1, 0) == -1.0);
}

TEST_CASE("pairing with a deterministic behavior is the winning probability") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dims d{3, 2, 2, 3};
    const Game g = random_game(seed, d);
    Rng rng(seed + 100);
    std::vector<int> sa(d.nx), sb(d.ny);
    for (auto& a : sa) a = static_cast<int>(rng.below(d.na));
    for (auto& b : sb) b = static_cast<int>(rng.below(d.nb));
    double direct = 0.0;
    for (int x = 0; x < d.nx; ++x)
      for (int y = 0; y < d.ny; ++y) direct += g.pi(x, y) * g.v(x, y, sa[x], sb[y]);
    const double via = pairing(game_to_functional(g), strategy_to_behavior(sa, sb, d));
    CHECK(via == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("behavior tags") {
  const BehaviorTensor p = strategy_to_behavior(std::vector<int>{0, 1}, std::vector<int>{1, 0},
                                                Dims{2, 2, 2, 2});
  CHECK(p.nonneg());
  CHECK(p.normalized());
  CHECK(infty1_norm_joint(p) == 1.0);
  const BehaviorTensor q(Dims{1, 1, 1, 1}, {-0.5});
  CHECK_FALSE(q.nonneg());
  CHECK_FALSE(q.normalized());
}

TEST_CASE("marginal norms are multiplicative under kron") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const int nq1 = 1 + static_cast<int>(rng.below(3)), na1 = 1 + static_cast<int>(rng.below(3));
    const int nq2 = 1 + static_cast<int>(rng.below(3)), na2 = 1 + static_cast<int>(rng.below(3));
    const auto p1 = random_marginal(rng, Side::kAlice, Space::kPrimal, nq1, na1);
    const auto p2 = random_marginal(rng, Side::kAlice, Space::kPrimal, nq2, na2);
    CHECK(infty1_norm(kron(p1, p2)) == infty1_norm(p1) * infty1_norm(p2));
    const auto g1 = random_marginal(rng, Side::kBob, Space::kDual, nq1, na1);
    const auto g2 = random_marginal(rng, Side::kBob, Space::kDual, nq2, na2);
    CHECK(one_infty_norm(kron(g1, g2)) == one_infty_norm(g1) * one_infty_norm(g2));
  }
}

TEST_CASE("norm kinds are enforced") {
  const MarginalTensor m(Side::kAlice, Space::kPrimal, 1, 2, {0.5, -0.5});
  CHECK(infty1_norm(m) == 1.0);
  CHECK_THROWS_AS(one_infty_norm(m), InvalidInput);
  const MarginalTensor b(Side::kBob, Space::kDual, 1, 2, {0.5, -0.5});
  CHECK_THROWS_AS(kron(m, b), InvalidInput);
  CHECK_THROWS_AS(outer_behavior(m, b), InvalidInput);
}

TEST_CASE("outer products and composition agree entrywise") {
  Rng rng(5);
  const auto ga = random_marginal(rng, Side::kAlice, Space::kDual, 2, 3);
  const auto gb = random_marginal(rng, Side::kBob, Space::kDual, 3, 2);
  const BellFunctional g = outer_functional(ga, gb);
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 3; ++a)
      for (int y = 0; y < 3; ++y)
        for (int b = 0; b < 2; ++b) CHECK(g(x, a, y, b) == ga(x, a) * gb(y, b));

  const BellFunctional g1 = random_bell(1, Dims{2, 2, 2, 3});
  const BellFunctional g2 = random_bell(2, Dims{3, 1, 2, 2});
  const BellFunctional h = compose(g1, g2);
  CHECK(h.dims() == compose_dims(g1.dims(), g2.dims()));
  CHECK(h.dims() == Dims{6, 2, 4, 6});
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 3; ++x2)
      for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int y1 = 0; y1 < 2; ++y1)
            for (int b1 = 0; b1 < 3; ++b1)
              for (int b2 = 0; b2 < 2; ++b2)
                CHECK(h(x1 * 3 + x2, a1 * 2 + a2, y1, b1 * 2 + b2) ==
                      g1(x1, a1, y1, b1) * g2(x2, a2, 0, b2));
}

TEST_CASE("composition of games matches composition of functionals") {
  const Game a = random_game(3, Dims{2, 2, 2, 2});
  const Game b = random_game(4, Dims{2, 1, 2, 2});
  const BellFunctional lhs = game_to_functional(compose(a, b));
  const BellFunctional rhs = compose(game_to_functional(a), game_to_functional(b));
  REQUIRE(lhs.dims() == rhs.dims());
  for (std::size_t i = 0; i < lhs.data().size(); ++i)
    CHECK(lhs.data()[i] == doctest::Approx(rhs.data()[i]).epsilon(1e-15));
  // Four answers per side, so no longer binary XOR.
  CHECK_FALSE(compose(chsh_game(), chsh_game()).is_xor());
}

TEST_CASE("the trivial game is a composition identity") {
  const BellFunctional one = game_to_functional(trivial_game());
  const BellFunctional g = random_bell(12, Dims{2, 3, 2, 2});
  CHECK(compose(g, one) == g);
  CHECK(compose(one, g) == g);
  CHECK(trivial_game().pi(0, 0) == 1.0);
  CHECK(trivial_game().v(0, 0, 0, 0) == 1);
}

TEST_CASE("power and caps") {
  CHECK(power(chsh_game(), 1) == chsh_game());
  CHECK(power(chsh_bell(), 2) == compose(chsh_bell(), chsh_bell()));
  CHECK_THROWS_AS(power(chsh_game(), 0), InvalidInput);
  CHECK_THROWS_AS(power(chsh_bell(), 6), CapExceeded);
  CHECK_THROWS_AS(compose(chsh_bell(), chsh_bell(), 255), CapExceeded);
  CHECK_NOTHROW(compose(chsh_bell(), chsh_bell(), 256));
}

TEST_CASE("random builders are seed-deterministic") {
  const Dims d{3, 3, 2, 2};
  CHECK(random_game(7, d) == random_game(7, d));
  CHECK_FALSE(random_game(7, d) == random_game(8, d));
  CHECK(random_bell(7, d) == random_bell(7, d));
  const BellFunctional small = random_bell(9, d, 0.5);
  for (double v : small.data()) CHECK(std::abs(v) <= 0.5);
}

TEST_CASE("xor_game builds the requested predicate") {
  const std::vector<double> pi{0.25, 0.25, 0.25, 0.25};
  const std::vector<int> f{0, 0, 0, 1};
  CHECK(xor_game(2, 2, pi, f) == chsh_game());
  CHECK_THROWS_AS(xor_game(2, 2, pi, std::vector<int>{0, 2, 0, 0}), InvalidInput);
}

TEST_CASE("seed mixing separates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  Rng a(3), b(3);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  Rng c(4);
  for (int i = 0; i < 1000; ++i) CHECK(c.below(7) < 7);
}

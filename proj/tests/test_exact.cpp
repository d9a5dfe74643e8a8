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

#include "doctest.h"
#include "oracles.hpp"
#include "tnorm/error.hpp"
#include "tnorm/exact.hpp"

using namespace tnorm;

TEST_CASE("CHSH classical values") {
  const ClassicalCertificate c = classical_value(chsh_game());
  CHECK(c.value == 0.75);
  CHECK(c.exact);
  CHECK(c.assignments_checked == 4);
  CHECK(bell_classical_value(chsh_bell()).value == 2.0);
  CHECK(injective_norm(chsh_bell()).value == 2.0);
  CHECK(injective_norm(chsh_correlation()).value == 2.0);
  CHECK(testing::brute_classical(chsh_game()) == 0.75);
}

TEST_CASE("enumeration agrees with brute force") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dims d{1 + static_cast<int>(seed % 3), 1 + static_cast<int>((seed / 3) % 3),
                 1 + static_cast<int>(seed % 2), 2 + static_cast<int>((seed / 2) % 2)};
    const Game g = random_game(seed, d);
    CHECK(classical_value(g).value == doctest::Approx(testing::brute_classical(g)).epsilon(1e-14));
    const BellFunctional b = random_bell(seed, d);
    CHECK(injective_norm(b).value == doctest::Approx(testing::brute_injective(b)).epsilon(1e-13));
    CHECK(bell_classical_value(b).value ==
          doctest::Approx(testing::brute_bell_classical(b)).epsilon(1e-13));
  }
}

TEST_CASE("injective norm of a game functional is its classical value") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game g = random_game(seed, Dims{3, 3, 2, 2});
    CHECK(injective_norm(game_to_functional(g)).value ==
          doctest::Approx(classical_value(g).value).epsilon(1e-13));
  }
}

TEST_CASE("certificates re-evaluate to their value") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BellFunctional b = random_bell(seed, Dims{3, 2, 3, 2});
    for (const auto& c : {injective_norm(b), bell_classical_value(b)})
      CHECK(evaluate_certificate(b, c) == doctest::Approx(c.value).epsilon(1e-13));
    const Game g = random_game(seed, Dims{2, 3, 2, 2});
    const auto c = classical_value(g);
    CHECK(evaluate_certificate(game_to_functional(g), c) ==
          doctest::Approx(c.value).epsilon(1e-13));
  }
  const auto flipped = bell_classical_value(chsh_bell().negated());
  CHECK(flipped.value == 2.0);
  CHECK(evaluate_certificate(chsh_bell().negated(), flipped) == 2.0);
}

TEST_CASE("parallel and serial enumeration are bit-identical") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Dims d{4, 3, 2 + static_cast<int>(seed % 2), 2};
    const Game g = random_game(seed, d);
    const auto p = classical_value(g), s = serial::classical_value(g);
    CHECK(p.value == s.value);
    CHECK(p.alice_answers == s.alice_answers);
    CHECK(p.bob_answers == s.bob_answers);
    const BellFunctional b = random_bell(seed, d);
    const auto pi = injective_norm(b), si = serial::injective_norm(b);
    CHECK(pi.value == si.value);
    CHECK(pi.alice_answers == si.alice_answers);
    CHECK(pi.alice_signs == si.alice_signs);
    CHECK(pi.sign_flipped == si.sign_flipped);
    const auto pb = bell_classical_value(b), sb = serial::bell_classical_value(b);
    CHECK(pb.value == sb.value);
    CHECK(pb.bob_answers == sb.bob_answers);
  }
}

TEST_CASE("caps and the heuristic fallback") {
  const Game g = random_game(1, Dims{10, 2, 2, 3});
  ExactOptions o;
  o.cap = 1000;
  CHECK_THROWS_AS(classical_value(g, o), CapExceeded);
  CHECK_THROWS_AS(serial::classical_value(g, 1000), CapExceeded);
  o.heuristic = true;
  o.seed = 3;
  const auto h = classical_value(g, o);
  CHECK_FALSE(h.exact);
  CHECK(h.value <= classical_value(g).value + 1e-12);
  CHECK(h.value == classical_value(g, o).value);
  CHECK(evaluate_certificate(game_to_functional(g), h) == doctest::Approx(h.value));
}

TEST_CASE("assignment_count saturates") {
  CHECK(assignment_count(2, 10) == 1024);
  CHECK(assignment_count(4, 40) == UINT64_MAX);
  CHECK(assignment_count(1, 50) == 1);
}

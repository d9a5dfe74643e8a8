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

#include "doctest.h"
#include "tnorm/error.hpp"
#include "tnorm/io.hpp"

using namespace tnorm;

TEST_CASE("emit and parse round-trip bit for bit") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BellFunctional g = random_bell(seed, Dims{2, 3, 3, 2});
    const std::string text = emit(g);
    CHECK(parse_bell(text) == g);
    CHECK(emit(parse_bell(text)) == text);
    const Game game = random_game(seed, Dims{3, 2, 2, 2});
    CHECK(parse_game(emit(game)) == game);
  }
  const BehaviorTensor p = strategy_to_behavior(std::vector<int>{1}, std::vector<int>{0, 1},
                                                Dims{1, 2, 2, 2});
  CHECK(parse_behavior(emit(p)) == p);
}

TEST_CASE("emitted documents have sorted keys and a trailing newline") {
  const std::string t = emit(chsh_game());
  CHECK(t.back() == '\n');
  CHECK(t.find("\"kind\"") < t.find("\"na\""));
  CHECK(t.find("\"nx\"") < t.find("\"pi\""));
  CHECK(t.find("\"pi\"") < t.find("\"v\""));
}

TEST_CASE("parse_document dispatches on kind") {
  CHECK(std::holds_alternative<Game>(parse_document(emit(chsh_game()))));
  CHECK(std::holds_alternative<BellFunctional>(parse_document(emit(chsh_bell()))));
  CHECK(parse_bell(emit(chsh_game())) == game_to_functional(chsh_game()));
  CHECK(emit(Document{chsh_bell()}) == emit(chsh_bell()));
}

TEST_CASE("syntax errors carry line and column") {
  CHECK_THROWS_WITH_AS(parse_document("{\n  \"kind\": \"bell\",\n  oops\n}"),
                       doctest::Contains("line 3"), InvalidInput);
  CHECK_THROWS_WITH_AS(parse_document("{"), doctest::Contains("malformed JSON"), InvalidInput);
}

TEST_CASE("schema errors carry the field path") {
  CHECK_THROWS_WITH_AS(parse_document(R"({"kind": "widget"})"), doctest::Contains("$.kind"),
                       InvalidInput);
  CHECK_THROWS_WITH_AS(
      parse_document(R"({"kind": "bell", "nx": 1, "ny": 1, "na": 1, "nb": 1, "g": [[[[1, 2]]]]})"),
      doctest::Contains("$.g[0][0][0]"), InvalidInput);
  CHECK_THROWS_WITH_AS(
      parse_document(R"({"kind": "bell", "nx": 0, "ny": 1, "na": 1, "nb": 1, "g": []})"),
      doctest::Contains("$.nx"), InvalidInput);
  CHECK_THROWS_AS(parse_behavior(emit(chsh_bell())), InvalidInput);
  CHECK_THROWS_AS(parse_game(emit(chsh_bell())), InvalidInput);
}

TEST_CASE("game documents are validated") {
  const std::string unnormalized =
      R"({"kind": "game", "nx": 1, "ny": 1, "na": 1, "nb": 1, "pi": [[0.5]], "v": [[[[1]]]]})";
  CHECK_THROWS_WITH_AS(parse_game(unnormalized), doctest::Contains("distribution not normalized"),
                       InvalidInput);
  CHECK(parse_game(unnormalized, ParseOptions{true}).pi(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(
      parse_game(
          R"({"kind": "game", "nx": 1, "ny": 1, "na": 1, "nb": 1, "pi": [[1]], "v": [[[[3]]]]})"),
      doctest::Contains("predicate must be 0/1"), InvalidInput);
}

TEST_CASE("read_file reports missing files") {
  CHECK_THROWS_AS(read_file("/nonexistent/definitely/missing.json"), InvalidInput);
}

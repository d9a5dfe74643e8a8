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

#include "tnorm/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tnorm/error.hpp"

namespace tnorm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InvalidInput(path + ": " + msg);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidInput("line " + std::to_string(line) + ", column " + std::to_string(col) +
                       ": malformed JSON");
  }
}

int read_extent(const json& doc, const char* key) {
  const std::string path = std::string("$.") + key;
  if (!doc.contains(key)) fail(path, "missing field");
  const json& v = doc.at(key);
  if (!v.is_number_integer()) fail(path, "must be a positive integer");
  const auto n = v.get<long long>();
  if (n <= 0 || n > 1'000'000) fail(path, "must be a positive integer");
  return static_cast<int>(n);
}

Dims read_dims(const json& doc) {
  return Dims{read_extent(doc, "nx"), read_extent(doc, "ny"), read_extent(doc, "na"),
              read_extent(doc, "nb")};
}

const json& expect_array(const json& v, const std::string& path, int n) {
  if (!v.is_array()) fail(path, "must be an array");
  if (static_cast<int>(v.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " entries, found " + std::to_string(v.size()));
  }
  return v;
}

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "must be a number");
  return v.get<double>();
}

std::string idx(const std::string& path, int i) { return path + "[" + std::to_string(i) + "]"; }

template <typename F>
void walk4(const json& root, const std::string& path, const Dims& d, F&& visit) {
  expect_array(root, path, d.nx);
  for (int x = 0; x < d.nx; ++x) {
    const std::string px = idx(path, x);
    expect_array(root[x], px, d.na);
    for (int a = 0; a < d.na; ++a) {
      const std::string pa = idx(px, a);
      expect_array(root[x][a], pa, d.ny);
      for (int y = 0; y < d.ny; ++y) {
        const std::string py = idx(pa, y);
        expect_array(root[x][a][y], py, d.nb);
        for (int b = 0; b < d.nb; ++b) visit(x, a, y, b, root[x][a][y][b], idx(py, b));
      }
    }
  }
}

std::vector<double> read_real4(const json& doc, const char* key, const Dims& d) {
  const std::string path = std::string("$.") + key;
  if (!doc.contains(key)) fail(path, "missing field");
  std::vector<double> out(d.size());
  walk4(doc.at(key), path, d,
        [&](int x, int a, int y, int b, const json& v, const std::string& p) {
          out[d.index(x, a, y, b)] = read_number(v, p);
        });
  return out;
}

Game read_game(const json& doc, const ParseOptions& options) {
  const Dims d = read_dims(doc);
  if (!doc.contains("pi")) fail("$.pi", "missing field");
  const json& jpi = expect_array(doc.at("pi"), "$.pi", d.nx);
  std::vector<double> pi(static_cast<std::size_t>(d.nx) * d.ny);
  for (int x = 0; x < d.nx; ++x) {
    const std::string px = idx("$.pi", x);
    expect_array(jpi[x], px, d.ny);
    for (int y = 0; y < d.ny; ++y) {
      const double p = read_number(jpi[x][y], idx(px, y));
      if (p < 0.0) fail(idx(px, y), "probability must be nonnegative");
      pi[static_cast<std::size_t>(x) * d.ny + y] = p;
    }
  }
  if (!doc.contains("v")) fail("$.v", "missing field");
  std::vector<std::uint8_t> v(d.size());
  walk4(doc.at("v"), "$.v", d,
        [&](int x, int a, int y, int b, const json& e, const std::string& p) {
          const double val = read_number(e, p);
          if (val != 0.0 && val != 1.0) fail(p, "predicate must be 0/1");
          v[d.index(x, a, y, b)] = val == 1.0 ? 1 : 0;
        });
  try {
    return Game(d, std::move(pi), std::move(v), Game::Options{.renormalize = options.renormalize});
  } catch (const InvalidInput& e) {
    fail("$.pi", e.what());
  }
}

json dims_json(const Dims& d, const char* kind) {
  json j;
  j["kind"] = kind;
  j["nx"] = d.nx;
  j["ny"] = d.ny;
  j["na"] = d.na;
  j["nb"] = d.nb;
  return j;
}

template <typename F>
json nest4(const Dims& d, F&& at) {
  json out = json::array();
  for (int x = 0; x < d.nx; ++x) {
    json jx = json::array();
    for (int a = 0; a < d.na; ++a) {
      json ja = json::array();
      for (int y = 0; y < d.ny; ++y) {
        json jy = json::array();
        for (int b = 0; b < d.nb; ++b) jy.push_back(at(x, a, y, b));
        ja.push_back(std::move(jy));
      }
      jx.push_back(std::move(ja));
    }
    out.push_back(std::move(jx));
  }
  return out;
}

std::string finish(const json& j) { return j.dump() + "\n"; }

}  // namespace

Document parse_document(std::string_view text, const ParseOptions& options) {
  const json doc = parse_json(text);
  if (!doc.is_object()) fail("$", "document must be an object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) fail("$.kind", "missing kind");
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "game") return read_game(doc, options);
  if (kind == "bell") {
    const Dims d = read_dims(doc);
    auto g = read_real4(doc, "g", d);
    try {
      return BellFunctional(d, std::move(g));
    } catch (const InvalidInput& e) {
      fail("$.g", e.what());
    }
  }
  if (kind == "behavior") {
    const Dims d = read_dims(doc);
    auto p = read_real4(doc, "p", d);
    try {
      return BehaviorTensor(d, std::move(p));
    } catch (const InvalidInput& e) {
      fail("$.p", e.what());
    }
  }
  fail("$.kind", "unknown kind '" + kind + "'");
}

Game parse_game(std::string_view text, const ParseOptions& options) {
  Document doc = parse_document(text, options);
  if (auto* g = std::get_if<Game>(&doc)) return std::move(*g);
  fail("$.kind", "expected a game document");
}

BellFunctional parse_bell(std::string_view text, const ParseOptions& options) {
  Document doc = parse_document(text, options);
  if (auto* g = std::get_if<BellFunctional>(&doc)) return std::move(*g);
  if (auto* g = std::get_if<Game>(&doc)) return game_to_functional(*g);
  fail("$.kind", "expected a bell or game document");
}

BehaviorTensor parse_behavior(std::string_view text) {
  Document doc = parse_document(text);
  if (auto* p = std::get_if<BehaviorTensor>(&doc)) return std::move(*p);
  fail("$.kind", "expected a behavior document");
}

std::string emit(const Game& game) {
  const Dims& d = game.dims();
  json j = dims_json(d, "game");
  json pi = json::array();
  for (int x = 0; x < d.nx; ++x) {
    json row = json::array();
    for (int y = 0; y < d.ny; ++y) row.push_back(game.pi(x, y));
    pi.push_back(std::move(row));
  }
  j["pi"] = std::move(pi);
  j["v"] = nest4(d, [&](int x, int a, int y, int b) { return game.v(x, y, a, b); });
  return finish(j);
}

std::string emit(const BellFunctional& g) {
  json j = dims_json(g.dims(), "bell");
  j["g"] = nest4(g.dims(), [&](int x, int a, int y, int b) { return g(x, a, y, b); });
  return finish(j);
}

std::string emit(const BehaviorTensor& p) {
  json j = dims_json(p.dims(), "behavior");
  j["p"] = nest4(p.dims(), [&](int x, int a, int y, int b) { return p(x, a, y, b); });
  return finish(j);
}

std::string emit(const Document& doc) {
  return std::visit([](const auto& v) { return emit(v); }, doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tnorm

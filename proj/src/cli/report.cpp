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

#include "report.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "tnorm/cli.hpp"
#include "tnorm/error.hpp"

namespace tnorm::cli {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

void Report::add_input(const std::string& path, std::string_view contents) {
  inputs_.push_back({{"path", path}, {"sha256", sha256_hex(contents)}});
}

bool Report::all_pass() const {
  for (const auto& r : results_)
    if (r.pass && !*r.pass) return false;
  return true;
}

json Report::to_json() const {
  json rows = json::array();
  for (const auto& r : results_) {
    json row = r.extra;
    row["name"] = r.name;
    row["value"] = r.value;
    row["gap"] = r.gap ? json(*r.gap) : json(nullptr);
    row["bound"] = r.bound ? json(*r.bound) : json(nullptr);
    row["pass"] = r.pass ? json(*r.pass) : json(nullptr);
    rows.push_back(std::move(row));
  }
  json j;
  j["command"] = command_;
  j["inputs"] = inputs_;
  j["results"] = std::move(rows);
  j["seeds"] = seeds_;
  j["timings_ms"] = timings_;
  j["version"] = kVersion;
  return j;
}

}  // namespace tnorm::cli

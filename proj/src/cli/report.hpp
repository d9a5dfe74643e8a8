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

// Machine-readable run reports:
//   {"command": [...], "inputs": [{"path", "sha256"}],
//    "results": [{"name", "value", "gap", "bound", "pass", ...}],
//    "seeds": [...], "timings_ms": {...}, "version": "..."}

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tnorm::cli {

using nlohmann::json;

std::string sha256_hex(std::string_view data);

/// Sorted keys, shortest round-trip doubles, two-space indent.
std::string canonical_dump(const json& j);

struct ResultRow {
  std::string name;
  double value = 0.0;
  std::optional<double> gap;
  std::optional<double> bound;
  std::optional<bool> pass;
  /// Extra fields merged into the row object.
  json extra = json::object();
};

class Report {
 public:
  explicit Report(std::vector<std::string> command) : command_(std::move(command)) {}

  void add_input(const std::string& path, std::string_view contents);
  void add_result(ResultRow row) { results_.push_back(std::move(row)); }
  void add_seed(std::uint64_t seed) { seeds_.push_back(seed); }
  void add_timing(const std::string& name, double ms) { timings_[name] = ms; }

  const std::vector<ResultRow>& results() const { return results_; }
  /// False when any row carries pass = false.
  bool all_pass() const;

  json to_json() const;

 private:
  std::vector<std::string> command_;
  json inputs_ = json::array();
  std::vector<ResultRow> results_;
  std::vector<std::uint64_t> seeds_;
  json timings_ = json::object();
};

}  // namespace tnorm::cli

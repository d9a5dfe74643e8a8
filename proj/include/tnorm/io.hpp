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

// JSON documents for games, Bell functionals and behaviors.
//
//   {"kind": "game",     "nx": .., "ny": .., "na": .., "nb": ..,
//    "pi": [[..]] (order [x][y]), "v": 4-deep 0/1 array}
//   {"kind": "bell",     ..dims.., "g": 4-deep real array}
//   {"kind": "behavior", ..dims.., "p": 4-deep real array}
//
// 4-deep arrays are indexed [x][a][y][b]. Emitted text has sorted keys and
// shortest round-trip doubles, so parse(emit(x)) == x bit for bit.

#include <string>
#include <string_view>
#include <variant>

#include "tnorm/game.hpp"

namespace tnorm {

using Document = std::variant<Game, BellFunctional, BehaviorTensor>;

struct ParseOptions {
  /// Rescale a game's pi to unit mass instead of rejecting it.
  bool renormalize = false;
};

/// Parses any of the three document kinds. Errors are InvalidInput with the
/// line and column of a syntax error, or the path of the offending field.
Document parse_document(std::string_view text, const ParseOptions& options = {});

Game parse_game(std::string_view text, const ParseOptions& options = {});
/// Accepts "bell" documents as is and "game" documents through
/// game_to_functional.
BellFunctional parse_bell(std::string_view text, const ParseOptions& options = {});
BehaviorTensor parse_behavior(std::string_view text);

std::string emit(const Game& game);
std::string emit(const BellFunctional& g);
std::string emit(const BehaviorTensor& p);
std::string emit(const Document& doc);

/// Reads a whole file; throws InvalidInput if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace tnorm

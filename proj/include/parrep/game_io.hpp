// Copyright 2026 The parrep Authors.
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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "parrep/game.hpp"

namespace parrep {

/// Malformed input. The message names the offending field or location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Game file: JSON object with "n_players", "questions", "answers", "pi"
/// (rows {"q": [...], "p": "<decimal>"}) and "predicate" (rows
/// {"q": [...], "a": [...], "win": bool}; omitted rows lose).
///
/// parse_game throws ParseError for format problems and for games that fail
/// validate_game.
Game parse_game(const std::string& text);
std::string game_to_json(const Game& g);

Game load_game(const std::filesystem::path& path);
void save_game(const Game& g, const std::filesystem::path& path);

/// MuTable file: {"n_players", "questions", "mu": [{"q": [...], "value":
/// "<decimal>"}]}, omitted rows are 0. An optional "pi" array gives the
/// question distribution; otherwise it is uniform.
struct MuFile {
  MuTable mu;
  Distribution dist;
};

MuFile parse_mu(const std::string& text);
std::string mu_to_json(const MuTable& mu, const Distribution& dist);
MuFile load_mu(const std::filesystem::path& path);
void save_mu(const MuTable& mu, const Distribution& dist,
             const std::filesystem::path& path);

/// Reads "questions" and "pi" from a game file or a bare distribution file.
Distribution load_distribution(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace parrep

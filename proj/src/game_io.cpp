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

#include "parrep/game_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "parrep/numeric.hpp"

namespace parrep {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

std::vector<Alphabet> read_alphabets(const json& arr, const std::string& field,
                                     std::size_t n_players) {
  if (!arr.is_array()) fail(field, "expected array of arrays of strings");
  if (arr.size() != n_players) {
    fail(field, "expected " + std::to_string(n_players) + " alphabets, got " +
                    std::to_string(arr.size()));
  }
  std::vector<Alphabet> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string here = field + "[" + std::to_string(i) + "]";
    if (!arr[i].is_array()) fail(here, "expected array of strings");
    Alphabet a;
    for (std::size_t k = 0; k < arr[i].size(); ++k) {
      if (!arr[i][k].is_string()) {
        fail(here + "[" + std::to_string(k) + "]", "expected string");
      }
      a.push_back(arr[i][k].get<std::string>());
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::size_t read_n_players(const json& root) {
  const json& n = require(root, "n_players", "");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    fail("n_players", "expected positive integer");
  }
  return n.get<std::size_t>();
}

// Symbol lookup per player; resolves tuples of symbols to index tuples.
class SymbolIndex {
 public:
  explicit SymbolIndex(const std::vector<Alphabet>& alphabets) {
    for (const auto& a : alphabets) {
      std::map<std::string, std::uint32_t> m;
      for (std::size_t k = 0; k < a.size(); ++k) {
        m.emplace(a[k], static_cast<std::uint32_t>(k));
      }
      maps_.push_back(std::move(m));
    }
  }

  IndexTuple resolve(const json& arr, const std::string& field) const {
    if (!arr.is_array() || arr.size() != maps_.size()) {
      fail(field, "expected array of " + std::to_string(maps_.size()) +
                      " symbols");
    }
    IndexTuple t;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) fail(field, "expected string symbols");
      auto it = maps_[i].find(arr[i].get<std::string>());
      if (it == maps_[i].end()) {
        fail(field, "unknown symbol '" + arr[i].get<std::string>() +
                        "' for player " + std::to_string(i));
      }
      t.push_back(it->second);
    }
    return t;
  }

 private:
  std::vector<std::map<std::string, std::uint32_t>> maps_;
};

double read_decimal(const json& v, const std::string& field) {
  try {
    if (v.is_string()) return parse_double(v.get<std::string>());
    if (v.is_number()) return v.get<double>();
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
  fail(field, "expected decimal string");
}

std::vector<std::size_t> shape_of(const std::vector<Alphabet>& alphabets) {
  std::vector<std::size_t> s;
  for (const auto& a : alphabets) s.push_back(a.size());
  return s;
}

Distribution read_pi(const json& root, const std::vector<Alphabet>& questions) {
  const json& rows = require(root, "pi", "");
  if (!rows.is_array()) fail("pi", "expected array");
  SymbolIndex index(questions);
  std::vector<std::pair<IndexTuple, double>> entries;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string here = "pi[" + std::to_string(k) + "]";
    if (!rows[k].is_object()) fail(here, "expected object");
    IndexTuple q = index.resolve(require(rows[k], "q", here), here + ".q");
    double p = read_decimal(require(rows[k], "p", here), here + ".p");
    entries.emplace_back(std::move(q), p);
  }
  try {
    return Distribution(shape_of(questions), std::move(entries));
  } catch (const std::invalid_argument& e) {
    fail("pi", e.what());
  }
}

json tuple_json(const std::vector<Alphabet>& alphabets,
                std::span<const std::uint32_t> t) {
  json arr = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) arr.push_back(alphabets[i][t[i]]);
  return arr;
}

json pi_json(const Distribution& d, const std::vector<Alphabet>& alphabets) {
  json rows = json::array();
  for (std::size_t k = 0; k < d.size(); ++k) {
    rows.push_back({{"q", tuple_json(alphabets, d.support()[k])},
                    {"p", format_double(d.probs()[k])}});
  }
  return rows;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Game parse_game(const std::string& text) {
  json root = parse_json(text);
  if (!root.is_object()) throw ParseError("game file must be a JSON object");
  std::size_t n = read_n_players(root);
  auto questions = read_alphabets(require(root, "questions", ""), "questions", n);
  auto answers = read_alphabets(require(root, "answers", ""), "answers", n);
  Distribution pi = read_pi(root, questions);

  const json& rows = require(root, "predicate", "");
  if (!rows.is_array()) fail("predicate", "expected array");
  ProductSpace qs(shape_of(questions)), as(shape_of(answers));
  std::vector<std::uint8_t> table(qs.size() * as.size(), 0);
  std::vector<std::uint8_t> seen(table.size(), 0);
  SymbolIndex qindex(questions), aindex(answers);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string here = "predicate[" + std::to_string(k) + "]";
    if (!rows[k].is_object()) fail(here, "expected object");
    IndexTuple q = qindex.resolve(require(rows[k], "q", here), here + ".q");
    IndexTuple a = aindex.resolve(require(rows[k], "a", here), here + ".a");
    const json& win = require(rows[k], "win", here);
    if (!win.is_boolean()) fail(here + ".win", "expected bool");
    std::size_t cell = qs.index(q) * as.size() + as.index(a);
    if (seen[cell]) fail(here, "duplicate predicate row");
    seen[cell] = 1;
    table[cell] = win.get<bool>() ? 1 : 0;
  }
  auto pred = std::make_shared<const DensePredicate>(qs, as, std::move(table));
  Game g(std::move(questions), std::move(answers), std::move(pi),
         std::move(pred));
  auto issues = validate_game(g);
  if (!issues.empty()) throw ParseError("invalid game: " + issues.front());
  return g;
}

std::string game_to_json(const Game& g) {
  json root;
  root["n_players"] = g.n_players();
  root["questions"] = g.questions();
  root["answers"] = g.answers();
  root["pi"] = pi_json(g.pi(), g.questions());
  json rows = json::array();
  ProductSpace qs = g.question_space(), as = g.answer_space();
  IndexTuple q(qs.rank()), a(as.rank());
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    qs.decode(qi, q);
    for (std::size_t ai = 0; ai < as.size(); ++ai) {
      as.decode(ai, a);
      if (g.wins(q, a)) {
        rows.push_back({{"q", tuple_json(g.questions(), q)},
                        {"a", tuple_json(g.answers(), a)},
                        {"win", true}});
      }
    }
  }
  root["predicate"] = std::move(rows);
  return root.dump(1) + "\n";
}

Game load_game(const std::filesystem::path& path) {
  return parse_game(read_text_file(path));
}

void save_game(const Game& g, const std::filesystem::path& path) {
  write_text_file(path, game_to_json(g));
}

MuFile parse_mu(const std::string& text) {
  json root = parse_json(text);
  if (!root.is_object()) throw ParseError("mu file must be a JSON object");
  std::size_t n = read_n_players(root);
  auto alphabets = read_alphabets(require(root, "questions", ""), "questions", n);
  for (std::size_t i = 0; i < n; ++i) {
    if (alphabets[i].empty()) {
      fail("questions[" + std::to_string(i) + "]", "empty alphabet");
    }
  }
  Distribution dist = root.contains("pi") ? read_pi(root, alphabets)
                                          : uniform_dist(alphabets);
  auto issues = dist.validate();
  if (!issues.empty()) fail("pi", issues.front());

  const json& rows = require(root, "mu", "");
  if (!rows.is_array()) fail("mu", "expected array");
  ProductSpace space(shape_of(alphabets));
  std::vector<double> values(space.size(), 0.0);
  std::vector<std::uint8_t> seen(space.size(), 0);
  SymbolIndex index(alphabets);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string here = "mu[" + std::to_string(k) + "]";
    if (!rows[k].is_object()) fail(here, "expected object");
    IndexTuple q = index.resolve(require(rows[k], "q", here), here + ".q");
    double v = read_decimal(require(rows[k], "value", here), here + ".value");
    if (!(v >= 0.0 && v <= 1.0)) fail(here + ".value", "outside [0, 1]");
    std::size_t cell = space.index(q);
    if (seen[cell]) fail(here, "duplicate mu row");
    seen[cell] = 1;
    values[cell] = v;
  }
  return MuFile{MuTable(std::move(alphabets), std::move(values)),
                std::move(dist)};
}

std::string mu_to_json(const MuTable& mu, const Distribution& dist) {
  json root;
  root["n_players"] = mu.n_players();
  root["questions"] = mu.alphabets();
  root["pi"] = pi_json(dist, mu.alphabets());
  json rows = json::array();
  IndexTuple q(mu.n_players());
  for (std::size_t idx = 0; idx < mu.space().size(); ++idx) {
    mu.space().decode(idx, q);
    rows.push_back({{"q", tuple_json(mu.alphabets(), q)},
                    {"value", format_double(mu.at_index(idx))}});
  }
  root["mu"] = std::move(rows);
  return root.dump(1) + "\n";
}

MuFile load_mu(const std::filesystem::path& path) {
  return parse_mu(read_text_file(path));
}

void save_mu(const MuTable& mu, const Distribution& dist,
             const std::filesystem::path& path) {
  write_text_file(path, mu_to_json(mu, dist));
}

Distribution load_distribution(const std::filesystem::path& path) {
  json root = parse_json(read_text_file(path));
  if (!root.is_object()) throw ParseError("expected a JSON object");
  std::size_t n = read_n_players(root);
  auto questions = read_alphabets(require(root, "questions", ""), "questions", n);
  Distribution d = read_pi(root, questions);
  auto issues = d.validate();
  if (!issues.empty()) fail("pi", issues.front());
  return d;
}

}  // namespace parrep

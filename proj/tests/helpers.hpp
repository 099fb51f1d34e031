// Copyright 2026 The Parakit Authors.
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

#include <string>
#include <vector>

#include "parakit/common.hpp"
#include "parakit/corpus.hpp"
#include "parakit/lexicon.hpp"
#include "parakit/noise.hpp"
#include "parakit/scorers.hpp"

namespace parakit::testing {

inline Token tok(std::string surface, Pos pos, std::string deprel = "",
                 std::optional<int> head = std::nullopt) {
  Token t;
  t.surface = std::move(surface);
  t.pos = pos;
  t.dep_label = std::move(deprel);
  t.dep_head = head;
  return t;
}

// The running example used throughout the unit tests, with gold annotations:
// "Steve rode his car for 5 miles on the way home."
inline Document example_doc() {
  std::vector<Token> tokens = {
      tok("Steve", Pos::PROPN, "nsubj", 1),
      tok("rode", Pos::VERB, "", kRootHead),
      tok("his", Pos::PRON, "poss", 3),
      tok("car", Pos::NOUN, "obj", 1),
      tok("for", Pos::ADP, "", 1),
      tok("5", Pos::NUM, "nummod", 6),
      tok("miles", Pos::NOUN, "pobj", 4),
      tok("on", Pos::ADP, "", 1),
      tok("the", Pos::DET, "det", 9),
      tok("way", Pos::NOUN, "pobj", 7),
      tok("home", Pos::NOUN, "", 9),
      tok(".", Pos::PUNCT, "", 1),
  };
  assign_synthetic_coref(tokens);
  return Document::create("e", std::move(tokens), {{0, 12}});
}

// Deterministic random documents with gold annotations; used by the
// invariant suites.
inline Document random_doc(Rng& rng, const std::string& id) {
  static const std::vector<std::string> propns = {"Steve", "Maria", "John",
                                                  "Lisa", "Tom"};
  static const std::vector<std::string> nouns = {
      "car", "bag", "store", "profit", "price", "way", "home", "book",
      "ticket", "farmer", "basket", "road", "market", "team", "box"};
  static const std::vector<std::string> verbs = {"sold", "bought", "made",
                                                 "rode", "collected", "paid"};
  static const std::vector<std::string> adps = {"for", "on", "in", "at",
                                                "with", "from"};
  static const std::vector<std::string> numbers = {
      "5", "12", "100", "3,000", "$12", "$1.25", "25%", "0.5", "240"};
  static const std::vector<std::string> units = {"miles", "kg", "hours",
                                                 "cents", "minutes"};
  static const std::vector<std::string> adjs = {"more", "total", "same",
                                                "red", "extra"};

  auto pick = [&rng](const std::vector<std::string>& pool) {
    return pool[rng.uniform(pool.size())];
  };

  std::vector<Token> tokens;
  std::vector<SentenceSpan> spans;
  int sentences = 1 + static_cast<int>(rng.uniform(3));
  for (int s = 0; s < sentences; ++s) {
    int begin = static_cast<int>(tokens.size());
    if (rng.bernoulli(0.5)) {
      tokens.push_back(tok(pick(propns), Pos::PROPN, "nsubj"));
    } else {
      tokens.push_back(tok("The", Pos::DET, "det"));
      tokens.push_back(tok(pick(nouns), Pos::NOUN, "nsubj"));
    }
    tokens.push_back(tok(pick(verbs), Pos::VERB));
    tokens.push_back(tok("the", Pos::DET, "det"));
    tokens.push_back(tok(pick(nouns), Pos::NOUN, "obj"));
    if (rng.bernoulli(0.8)) {
      tokens.push_back(tok(pick(adps), Pos::ADP));
      tokens.push_back(tok(pick(numbers), Pos::NUM, "nummod"));
      tokens.push_back(tok(pick(units), Pos::NOUN));
    }
    if (rng.bernoulli(0.4)) {
      tokens.push_back(tok(pick(adps), Pos::ADP));
      tokens.push_back(tok("the", Pos::DET, "det"));
      if (rng.bernoulli(0.3)) tokens.push_back(tok(pick(adjs), Pos::ADJ));
      tokens.push_back(tok(pick(nouns), Pos::NOUN, "pobj"));
    }
    tokens.push_back(tok(".", Pos::PUNCT));
    spans.push_back({begin, static_cast<int>(tokens.size())});
  }
  assign_synthetic_coref(tokens);
  return Document::create(id, std::move(tokens), std::move(spans));
}

inline std::vector<std::string> multiset_of(const Document& d) {
  return number_multiset(d.numbers());
}

inline std::vector<std::string> multiset_of_text(const std::string& text) {
  static const UnitGazetteer units = UnitGazetteer::defaults();
  Tokenizer tokenizer(&units);
  std::vector<std::string> out;
  int i = 0;
  for (const RawToken& t : tokenizer.tokenize(text)) {
    for (const NumericEntity& e : extract_numbers_from_token(t.surface, i)) {
      out.push_back(e.value.str());
    }
    ++i;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> tokenize_text(const std::string& text) {
  static const UnitGazetteer units = UnitGazetteer::defaults();
  Tokenizer tokenizer(&units);
  std::vector<std::string> out;
  for (const RawToken& t : tokenizer.tokenize(text)) out.push_back(t.surface);
  return out;
}

inline std::vector<std::string> sorted_copy(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// A tiny fluency model whose preferences are fully controlled by the
// training sentences handed in.
inline FluencyModel tiny_fluency(
    const std::vector<std::vector<std::string>>& sentences, int order = 3) {
  return FluencyModel::train(sentences, order, 0.1);
}

inline std::string fixture_path(const std::string& name) {
  return std::string(PARAKIT_DATA_DIR) + "/" + name;
}

}  // namespace parakit::testing

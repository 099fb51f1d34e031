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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parakit/corpus.hpp"

namespace parakit {

// Merged synonym lexicon, one TSV: lemma <tab> pos <tab> synonym <tab> score.
// Building it offline from PPDB-style databanks, embedding neighbors and
// WordNet is documented in the data file itself; at runtime this is a plain
// deterministic lookup. Self-synonyms are dropped at load.
class SynonymLexicon {
 public:
  struct Entry {
    std::string synonym;
    double score = 1.0;
  };

  static SynonymLexicon from_file(const std::string& path);
  static SynonymLexicon from_string(std::string_view tsv);

  // Ranked (score-descending, ties by file order) synonyms for (lemma, pos).
  const std::vector<Entry>& lookup(std::string_view lemma, Pos pos) const;
  bool has(std::string_view lemma, Pos pos) const;

  // Digit-free insertion pool: every synonym surface plus a small built-in
  // function-word list, sorted for determinism.
  const std::vector<std::string>& insertion_vocabulary() const {
    return vocab_;
  }

  size_t size() const { return entries_.size(); }

 private:
  void finalize();
  std::map<std::pair<std::string, Pos>, std::vector<Entry>> entries_;
  std::vector<std::string> vocab_;
};

// Built-in lexicon covering common word-problem vocabulary; the shipped
// data/lexicon.tsv mirrors it and is the template for custom lexicons.
const SynonymLexicon& default_lexicon();

}  // namespace parakit

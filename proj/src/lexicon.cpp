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

#include "parakit/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "parakit/common.hpp"

namespace parakit {

namespace {

// Inserted alongside lexicon synonyms so word insertion always has a pool of
// context-agnostic fillers.
const std::vector<std::string>& function_words() {
  static const std::vector<std::string> words = {
      "all", "by", "of", "the", "a", "some", "very", "just", "then",
      "so", "which", "that", "up", "out", "as", "also", "same"};
  return words;
}

bool has_digit_char(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

SynonymLexicon SynonymLexicon::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open synonym lexicon: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

SynonymLexicon SynonymLexicon::from_string(std::string_view tsv) {
  SynonymLexicon lex;
  size_t start = 0;
  int lineno = 0;
  while (start <= tsv.size()) {
    size_t nl = tsv.find('\n', start);
    std::string_view line = tsv.substr(
        start, nl == std::string_view::npos ? tsv.size() - start : nl - start);
    start = nl == std::string_view::npos ? tsv.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> cols;
    size_t c = 0;
    while (c <= line.size()) {
      size_t tab = line.find('\t', c);
      cols.emplace_back(line.substr(
          c, tab == std::string_view::npos ? line.size() - c : tab - c));
      if (tab == std::string_view::npos) break;
      c = tab + 1;
    }
    if (cols.size() < 3) {
      throw DataError("lexicon line " + std::to_string(lineno) +
                      ": expected lemma<TAB>pos<TAB>synonym[<TAB>score]");
    }
    std::string lemma = lowercase(cols[0]);
    Pos pos = parse_pos(cols[1]);
    std::string synonym = cols[2];
    double score = cols.size() >= 4 ? std::stod(cols[3]) : 1.0;
    if (lowercase(synonym) == lemma) continue;  // self-synonyms excluded
    if (has_digit_char(synonym)) {
      throw DataError("lexicon line " + std::to_string(lineno) +
                      ": synonyms must not contain digits");
    }
    lex.entries_[{lemma, pos}].push_back({synonym, score});
  }
  lex.finalize();
  return lex;
}

void SynonymLexicon::finalize() {
  std::set<std::string> pool;
  for (auto& [key, entries] : entries_) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) {
                       return a.score > b.score;
                     });
    for (const Entry& e : entries) pool.insert(e.synonym);
  }
  for (const std::string& w : function_words()) pool.insert(w);
  vocab_.assign(pool.begin(), pool.end());
}

const std::vector<SynonymLexicon::Entry>& SynonymLexicon::lookup(
    std::string_view lemma, Pos pos) const {
  static const std::vector<Entry> empty;
  auto it = entries_.find({lowercase(lemma), pos});
  return it == entries_.end() ? empty : it->second;
}

bool SynonymLexicon::has(std::string_view lemma, Pos pos) const {
  return !lookup(lemma, pos).empty();
}

#include "default_lexicon_data.inc"

const SynonymLexicon& default_lexicon() {
  static const SynonymLexicon lex = SynonymLexicon::from_string(kDefaultLexiconTsv);
  return lex;
}

}  // namespace parakit

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

#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "parakit/decimal.hpp"

#include "json.hpp"

namespace parakit {

// Universal POS tagset. Closed: unknown tags are rejected at ingestion.
enum class Pos {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM,
  PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X,
};

const char* pos_name(Pos p);
// Throws DataError for tags outside the tagset.
Pos parse_pos(std::string_view tag);

// Sentinel for dep_head meaning "attached to root".
inline constexpr int kRootHead = -1;

struct Token {
  std::string surface;
  std::string lemma;  // defaults to lowercased surface
  Pos pos = Pos::X;
  std::optional<int> coref_id;
  std::optional<int> dep_head;  // document-level token index or kRootHead
  std::string dep_label;        // empty when absent
  std::pair<int, int> char_span{0, 0};

  bool operator==(const Token&) const = default;
};

struct NumericEntity {
  enum class Kind { plain, currency, percent };
  Decimal value;
  std::string surface;
  int token_idx = -1;
  Kind kind = Kind::plain;
};

// Token range [begin, end).
struct SentenceSpan {
  int begin = 0;
  int end = 0;
  bool operator==(const SentenceSpan&) const = default;
};

// Token surfaces that count as measurement units. One surface per line in
// the gazetteer file, '#' starts a comment. Matching is case-insensitive;
// entries ending in '.' double as abbreviations the tokenizer keeps intact.
class UnitGazetteer {
 public:
  static UnitGazetteer defaults();
  static UnitGazetteer from_file(const std::string& path);

  void add(std::string_view surface);
  bool is_unit(std::string_view surface) const;
  bool is_abbreviation(std::string_view surface) const;

 private:
  std::unordered_set<std::string> units_;
  std::unordered_set<std::string> abbreviations_;  // lowercased, with dot
};

struct RawToken {
  std::string surface;
  int begin = 0;  // byte offsets into the raw text
  int end = 0;
};

// Whitespace splitting plus punctuation detachment: trailing '.', '?', '!'
// and ',' become standalone tokens, except dots that are part of a decimal
// number or of a known abbreviation ("Rs.").
class Tokenizer {
 public:
  explicit Tokenizer(const UnitGazetteer* gazetteer = nullptr)
      : gazetteer_(gazetteer) {}

  std::vector<RawToken> tokenize(std::string_view text) const;

 private:
  const UnitGazetteer* gazetteer_;
};

// Inverse of tokenization for display: '.', '?', '!' and ',' attach to the
// preceding token, everything else joins with single spaces.
std::string detokenize(const std::vector<std::string>& tokens);

// Sentence boundaries: a sentence ends after '.', '?' or '!' tokens; the
// final span closes at the end regardless.
std::vector<SentenceSpan> split_sentences(const std::vector<RawToken>& tokens);

// Rule-based fallback POS tagger for raw-text ingestion. Closed-class lists
// plus suffix heuristics; clearly lower quality than real annotations, so
// documents built with it carry a warning flag.
Pos fallback_pos(std::string_view surface, bool sentence_initial);

// Lowercasing plus light plural / 3rd-person stripping for open-class words.
std::string normalize_lemma(std::string_view surface, Pos pos);

class Document {
 public:
  // Validates all invariants (spans partition tokens, tree leaf counts match)
  // and computes the numeric-entity cache. Throws DataError on violations.
  static Document create(std::string id, std::vector<Token> tokens,
                         std::vector<SentenceSpan> spans,
                         std::vector<std::string> constituency = {},
                         std::optional<std::string> passive_text = std::nullopt,
                         std::optional<std::string> raw_text = std::nullopt,
                         bool fallback_annotated = false);

  const std::string& id() const { return id_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<SentenceSpan>& sentences() const { return sentences_; }
  // One bracketed tree string per sentence; empty string when absent.
  const std::vector<std::string>& constituency() const { return trees_; }
  const std::vector<NumericEntity>& numbers() const { return numbers_; }
  const std::optional<std::string>& passive_text() const { return passive_; }
  bool fallback_annotated() const { return fallback_annotated_; }

  // Raw text when ingested from text, otherwise the detokenized surfaces.
  const std::string& text() const { return text_; }
  std::vector<std::string> surfaces() const;

 private:
  std::string id_;
  std::vector<Token> tokens_;
  std::vector<SentenceSpan> sentences_;
  std::vector<std::string> trees_;
  std::vector<NumericEntity> numbers_;
  std::optional<std::string> passive_;
  std::string text_;
  bool fallback_annotated_ = false;
};

// Recognizes integers, decimals, comma-grouped numbers ("3,000"),
// currency-prefixed ("$100") and percent-suffixed ("25%") tokens. Tokens
// that merely contain digits ("3:4") yield each maximal digit run.
std::vector<NumericEntity> extract_numbers_from_token(std::string_view surface,
                                                      int token_idx);
std::vector<NumericEntity> extract_numbers(const std::vector<Token>& tokens);
std::vector<NumericEntity> extract_numbers(const Document& doc);

// Multiset view of numeric values as canonical decimal strings, sorted.
std::vector<std::string> number_multiset(const std::vector<NumericEntity>& entities);

enum class ProtectPhase { templatize_delete, substitute_insert };

// Bit flags recording why a token is protected.
namespace protect {
inline constexpr uint8_t kNumber = 1;
inline constexpr uint8_t kUnit = 2;
inline constexpr uint8_t kVerb = 4;
inline constexpr uint8_t kAdjective = 8;
inline constexpr uint8_t kAdverb = 16;
}  // namespace protect

struct ProtectedMask {
  std::vector<uint8_t> reasons;
  bool is_protected(size_t i) const { return reasons[i] != 0; }
  size_t count() const;
};

ProtectedMask protected_mask(const Document& doc, ProtectPhase phase,
                             const UnitGazetteer& gazetteer);

// Annotates raw text end to end: tokenize, fallback-tag, lemmatize, assign
// synthetic coreference chains (same lemma+POS within the document).
std::vector<Token> annotate_text(std::string_view text,
                                 const Tokenizer& tokenizer,
                                 std::vector<SentenceSpan>* spans_out);

// Assigns synthetic coref ids to tokens lacking one when the document has no
// coreference annotations at all.
void assign_synthetic_coref(std::vector<Token>& tokens);

struct IngestOptions {
  const UnitGazetteer* gazetteer = nullptr;
};

// One JSONL record -> Document. Records carry either token-level annotations
// or a plain-text field; plain text goes through the fallback annotator.
Document ingest_json_record(const nlohmann::json& record,
                            const IngestOptions& options);

// Reads a JSONL corpus; a leading schema-header line is skipped. Errors carry
// 1-based line numbers.
std::vector<Document> read_jsonl_corpus(const std::string& path,
                                        const IngestOptions& options);

// CoNLL-U reader. Honors ID, FORM, LEMMA, UPOS, HEAD, DEPREL and the MISC
// field Coref=<n>. "# newdoc id = x" groups sentences into one document;
// without markers each sentence becomes its own document.
std::vector<Document> read_conllu(std::istream& in, const IngestOptions& options,
                                  std::string_view default_id_prefix = "doc");
std::vector<Document> read_conllu_file(const std::string& path,
                                       const IngestOptions& options);

// Lossless re-serialization: ingest(document_to_json(d)) == d.
nlohmann::json document_to_json(const Document& doc);

}  // namespace parakit

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

#include "parakit/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "parakit/common.hpp"
#include "parakit/tree.hpp"

namespace parakit {

namespace {

const std::array<const char*, 17> kPosNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

bool is_detachable(char c) { return c == '.' || c == '?' || c == '!' || c == ','; }

bool all_punct(std::string_view s) {
  for (unsigned char c : s) {
    if (!std::ispunct(c)) return false;
  }
  return !s.empty();
}

const std::unordered_set<std::string>& closed_class(Pos pos) {
  static const std::unordered_map<Pos, std::unordered_set<std::string>> tables = {
      {Pos::DET,
       {"the", "a", "an", "this", "these", "those", "each", "every", "no",
        "any", "all", "both", "either", "neither", "some", "that", "another",
        "such", "which"}},
      {Pos::PRON,
       {"he", "she", "it", "they", "i", "we", "you", "him", "her", "them",
        "me", "us", "his", "hers", "its", "their", "theirs", "my", "our",
        "your", "who", "whom", "what", "himself", "herself", "itself",
        "themselves", "someone", "anything", "something", "everyone"}},
      {Pos::ADP,
       {"of", "in", "on", "at", "by", "for", "with", "from", "to", "into",
        "over", "under", "about", "between", "after", "before", "during",
        "above", "below", "through", "around", "per", "off", "near",
        "within", "without", "towards", "toward", "along", "upon"}},
      {Pos::AUX,
       {"is", "are", "was", "were", "be", "been", "being", "am", "has",
        "have", "had", "do", "does", "did", "will", "would", "can", "could",
        "shall", "should", "may", "might", "must"}},
      {Pos::CCONJ, {"and", "or", "but", "nor", "yet"}},
      {Pos::SCONJ,
       {"if", "because", "while", "than", "whether", "since", "although",
        "unless", "as", "when", "where"}},
      {Pos::PART, {"not", "n't", "'s"}},
      {Pos::ADV,
       {"very", "too", "also", "then", "here", "now", "just", "only",
        "again", "away", "back", "still", "together", "there", "how",
        "altogether", "respectively"}},
      {Pos::ADJ,
       {"more", "less", "many", "much", "few", "fewer", "total", "maximum",
        "minimum", "same", "other", "first", "second", "third", "last",
        "next", "additional", "extra", "average", "red", "green", "blue",
        "marked", "least", "most", "initial", "final", "equal", "whole",
        "original", "remaining", "combined"}},
      {Pos::NUM,
       {"one", "two", "three", "four", "five", "six", "seven", "eight",
        "nine", "ten", "eleven", "twelve", "twenty", "thirty", "forty",
        "fifty", "hundred", "thousand", "million", "half", "quarter",
        "dozen", "twice"}},
      {Pos::VERB,
       {"sell", "sells", "sold", "selling", "buy", "buys", "bought",
        "buying", "make", "makes", "made", "making", "give", "gives",
        "gave", "given", "giving", "get", "gets", "got", "getting", "take",
        "takes", "took", "taken", "taking", "ride", "rides", "rode",
        "ridden", "riding", "drive", "drives", "drove", "driven", "driving",
        "go", "goes", "went", "gone", "going", "earn", "earns", "earned",
        "earning", "pay", "pays", "paid", "paying", "cost", "costs",
        "spend", "spends", "spent", "spending", "travel", "travels",
        "traveled", "travelled", "walk", "walks", "walked", "walking",
        "run", "runs", "ran", "running", "need", "needs", "needed",
        "charge", "charges", "charged", "contain", "contains", "contained",
        "hold", "holds", "held", "reach", "reaches", "reached", "calculate",
        "find", "finds", "found", "determine", "determines", "compute",
        "solve", "add", "adds", "added", "subtract", "multiply", "divide",
        "divides", "divided", "equals", "work", "works", "worked", "fill",
        "fills", "filled", "complete", "completes", "completed", "receive",
        "receives", "received", "save", "saves", "saved", "share", "shares",
        "shared", "mix", "mixes", "mixed", "cover", "covers", "covered",
        "leave", "leaves", "left", "put", "puts", "want", "wants", "wanted",
        "use", "uses", "used", "start", "starts", "started", "finish",
        "finishes", "finished", "swim", "swims", "swam", "read", "reads",
        "plant", "plants", "planted", "collect", "collects", "collected",
        "gather", "gathers", "gathered", "weigh", "weighs", "weighed",
        "measure", "measures", "measured", "own", "owns", "owned", "plan",
        "visit", "visits", "visited", "grow", "grows", "grew", "remain",
        "remains", "remained", "deliver", "delivers", "delivered"}},
  };
  static const std::unordered_set<std::string> empty;
  auto it = tables.find(pos);
  return it == tables.end() ? empty : it->second;
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::string normalize_lemma(std::string_view surface, Pos pos) {
  std::string lower = lowercase(surface);
  if (pos != Pos::NOUN && pos != Pos::VERB && pos != Pos::PROPN) return lower;
  size_t n = lower.size();
  if (n > 3 && lower.compare(n - 3, 3, "ies") == 0) {
    return lower.substr(0, n - 3) + "y";
  }
  if (n > 3 && lower.back() == 's' && lower[n - 2] != 's' &&
      lower[n - 2] != 'u') {
    return lower.substr(0, n - 1);
  }
  return lower;
}

const char* pos_name(Pos p) { return kPosNames[static_cast<size_t>(p)]; }

Pos parse_pos(std::string_view tag) {
  for (size_t i = 0; i < kPosNames.size(); ++i) {
    if (tag == kPosNames[i]) return static_cast<Pos>(i);
  }
  throw DataError("unknown POS tag '" + std::string(tag) + "'");
}

// ---------------------------------------------------------------------------
// Unit gazetteer

UnitGazetteer UnitGazetteer::defaults() {
  UnitGazetteer g;
  for (const char* u :
       {"mile", "miles", "cent", "cents", "dollar", "dollars", "Rs.", "Rs",
        "rupee", "rupees", "%", "percent", "kg", "g", "gram", "grams", "m",
        "km", "cm", "meter", "meters", "metre", "metres", "hour", "hours",
        "hr", "hrs", "minute", "minutes", "min", "mins", "second", "seconds",
        "day", "days", "week", "weeks", "month", "months", "year", "years",
        "liter", "liters", "litre", "litres", "mph", "kmph", "kmh", "foot",
        "feet", "ft", "inch", "inches", "pound", "pounds", "lb", "lbs",
        "ounce", "ounces", "oz", "ton", "tons", "acre", "acres"}) {
    g.add(u);
  }
  return g;
}

UnitGazetteer UnitGazetteer::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open unit gazetteer: " + path);
  UnitGazetteer g;
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    size_t start = 0;
    while (start < line.size() &&
           std::isspace(static_cast<unsigned char>(line[start])))
      ++start;
    if (start < line.size()) g.add(line.substr(start));
  }
  return g;
}

void UnitGazetteer::add(std::string_view surface) {
  std::string lower = lowercase(surface);
  units_.insert(lower);
  if (lower.size() > 1 && lower.back() == '.') abbreviations_.insert(lower);
}

bool UnitGazetteer::is_unit(std::string_view surface) const {
  return units_.count(lowercase(surface)) > 0;
}

bool UnitGazetteer::is_abbreviation(std::string_view surface) const {
  return abbreviations_.count(lowercase(surface)) > 0;
}

// ---------------------------------------------------------------------------
// Tokenizer

std::vector<RawToken> Tokenizer::tokenize(std::string_view text) const {
  std::vector<RawToken> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    if (i == start) continue;
    std::string_view chunk = text.substr(start, i - start);

    if (all_punct(chunk)) {
      out.push_back({std::string(chunk), static_cast<int>(start),
                     static_cast<int>(i)});
      continue;
    }

    // Peel trailing '.', '?', '!', ',' one at a time; abbreviations keep
    // their dot.
    size_t end = chunk.size();
    std::vector<char> tail;
    while (end > 0 && is_detachable(chunk[end - 1])) {
      if (chunk[end - 1] == '.' && gazetteer_ &&
          gazetteer_->is_abbreviation(chunk.substr(0, end))) {
        break;
      }
      tail.push_back(chunk[end - 1]);
      --end;
    }
    if (end > 0) {
      out.push_back({std::string(chunk.substr(0, end)),
                     static_cast<int>(start), static_cast<int>(start + end)});
    }
    for (size_t t = tail.size(); t > 0; --t) {
      size_t pos = start + end + (tail.size() - t);
      out.push_back({std::string(1, tail[t - 1]), static_cast<int>(pos),
                     static_cast<int>(pos + 1)});
    }
  }
  return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& tok : tokens) {
    bool attach = tok.size() == 1 && is_detachable(tok[0]);
    if (!out.empty() && !attach) out += " ";
    out += tok;
  }
  return out;
}

std::vector<SentenceSpan> split_sentences(const std::vector<RawToken>& tokens) {
  std::vector<SentenceSpan> spans;
  int begin = 0;
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    const std::string& s = tokens[i].surface;
    if (s == "." || s == "?" || s == "!") {
      spans.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  if (begin < static_cast<int>(tokens.size())) {
    spans.push_back({begin, static_cast<int>(tokens.size())});
  }
  return spans;
}

// ---------------------------------------------------------------------------
// Fallback annotator

Pos fallback_pos(std::string_view surface, bool sentence_initial) {
  if (surface.empty()) return Pos::X;
  std::string lower = lowercase(surface);
  if (all_punct(surface)) {
    if (surface == "$" || surface == "%" || surface == "+" || surface == "=" ||
        surface == "/" || surface == "&") {
      return Pos::SYM;
    }
    return Pos::PUNCT;
  }
  if (has_digit(surface)) return Pos::NUM;
  for (Pos pos : {Pos::DET, Pos::PRON, Pos::ADP, Pos::AUX, Pos::CCONJ,
                  Pos::SCONJ, Pos::PART, Pos::ADV, Pos::ADJ, Pos::NUM,
                  Pos::VERB}) {
    if (closed_class(pos).count(lower)) return pos;
  }
  size_t n = lower.size();
  if (n > 3 && lower.compare(n - 2, 2, "ly") == 0) return Pos::ADV;
  if (n > 4 && lower.compare(n - 3, 3, "ing") == 0) return Pos::VERB;
  if (n > 3 && lower.compare(n - 2, 2, "ed") == 0) return Pos::VERB;
  if (n > 4 && lower.compare(n - 3, 3, "est") == 0) return Pos::ADJ;
  bool capitalized = std::isupper(static_cast<unsigned char>(surface[0]));
  if (capitalized && !sentence_initial) return Pos::PROPN;
  if (capitalized && sentence_initial && n <= 2) return Pos::PROPN;  // "A", "B"
  return Pos::NOUN;
}

std::vector<Token> annotate_text(std::string_view text,
                                 const Tokenizer& tokenizer,
                                 std::vector<SentenceSpan>* spans_out) {
  std::vector<RawToken> raw = tokenizer.tokenize(text);
  std::vector<SentenceSpan> spans = split_sentences(raw);
  std::vector<Token> tokens;
  tokens.reserve(raw.size());
  size_t sent = 0;
  for (int i = 0; i < static_cast<int>(raw.size()); ++i) {
    while (sent < spans.size() && i >= spans[sent].end) ++sent;
    bool initial = sent < spans.size() && i == spans[sent].begin;
    Token t;
    t.surface = raw[i].surface;
    t.pos = fallback_pos(t.surface, initial);
    t.lemma = normalize_lemma(t.surface, t.pos);
    t.char_span = {raw[i].begin, raw[i].end};
    tokens.push_back(std::move(t));
  }
  assign_synthetic_coref(tokens);
  if (spans_out) *spans_out = std::move(spans);
  return tokens;
}

void assign_synthetic_coref(std::vector<Token>& tokens) {
  for (const Token& t : tokens) {
    if (t.coref_id.has_value()) return;
  }
  std::map<std::pair<std::string, Pos>, int> chains;
  for (Token& t : tokens) {
    // Tokens may not have their lemma defaulted yet.
    std::string lemma = t.lemma.empty() ? lowercase(t.surface) : t.lemma;
    auto key = std::make_pair(std::move(lemma), t.pos);
    auto [it, inserted] = chains.emplace(key, static_cast<int>(chains.size()));
    t.coref_id = it->second;
  }
}

// ---------------------------------------------------------------------------
// Numbers

std::vector<NumericEntity> extract_numbers_from_token(std::string_view surface,
                                                      int token_idx) {
  std::vector<NumericEntity> out;
  if (!has_digit(surface)) return out;

  std::string_view body = surface;
  NumericEntity::Kind kind = NumericEntity::Kind::plain;
  if (!body.empty() && body.front() == '$') {
    kind = NumericEntity::Kind::currency;
    body.remove_prefix(1);
  }
  if (!body.empty() && body.back() == '%') {
    kind = NumericEntity::Kind::percent;
    body.remove_suffix(1);
  }

  // Full-token form: digits with optional 3-digit comma groups and one
  // fractional part.
  auto try_full = [&]() -> bool {
    std::string_view intpart = body;
    std::string_view frac;
    size_t dot = body.find('.');
    if (dot != std::string_view::npos) {
      intpart = body.substr(0, dot);
      frac = body.substr(dot + 1);
      if (frac.empty() || frac.find_first_not_of("0123456789") !=
                              std::string_view::npos) {
        return false;
      }
    }
    std::string digits;
    if (intpart.find(',') != std::string_view::npos) {
      size_t group = 0;
      size_t seen = 0;
      for (char c : intpart) {
        if (c == ',') {
          if (seen == 0 || group == 0 || group > 3 ||
              (seen > 3 && group != 3)) {
            return false;
          }
          group = 0;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
          ++group;
          ++seen;
          digits.push_back(c);
        } else {
          return false;
        }
      }
      if (group != 3) return false;
    } else {
      if (intpart.find_first_not_of("0123456789") != std::string_view::npos) {
        return false;
      }
      digits = std::string(intpart);
    }
    if (digits.empty() && frac.empty()) return false;
    std::string normalized = digits;
    if (!frac.empty()) normalized += "." + std::string(frac);
    auto value = Decimal::parse(normalized);
    if (!value) return false;
    out.push_back({*value, std::string(surface), token_idx, kind});
    return true;
  };
  if (try_full()) return out;

  // Partial form: each maximal digit run, allowing one interior dot flanked
  // by digits ("3:4" -> 3, 4). Tokens containing letters (template masks
  // like NOUN1, alphanumeric codes) carry no numeric entities.
  if (std::any_of(surface.begin(), surface.end(),
                  [](unsigned char c) { return std::isalpha(c); })) {
    return out;
  }
  size_t i = 0;
  while (i < surface.size()) {
    if (!std::isdigit(static_cast<unsigned char>(surface[i]))) {
      ++i;
      continue;
    }
    size_t start = i;
    bool dot_used = false;
    while (i < surface.size()) {
      char c = surface[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '.' && !dot_used && i + 1 < surface.size() &&
                 std::isdigit(static_cast<unsigned char>(surface[i + 1]))) {
        dot_used = true;
        ++i;
      } else {
        break;
      }
    }
    auto value = Decimal::parse(surface.substr(start, i - start));
    if (value) {
      out.push_back({*value, std::string(surface.substr(start, i - start)),
                     token_idx, NumericEntity::Kind::plain});
    }
  }
  return out;
}

std::vector<NumericEntity> extract_numbers(const std::vector<Token>& tokens) {
  std::vector<NumericEntity> out;
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    auto found = extract_numbers_from_token(tokens[i].surface, i);
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

std::vector<NumericEntity> extract_numbers(const Document& doc) {
  return extract_numbers(doc.tokens());
}

std::vector<std::string> number_multiset(
    const std::vector<NumericEntity>& entities) {
  std::vector<std::string> out;
  out.reserve(entities.size());
  for (const NumericEntity& e : entities) out.push_back(e.value.str());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Protection

size_t ProtectedMask::count() const {
  return std::count_if(reasons.begin(), reasons.end(),
                       [](uint8_t r) { return r != 0; });
}

ProtectedMask protected_mask(const Document& doc, ProtectPhase phase,
                             const UnitGazetteer& gazetteer) {
  ProtectedMask mask;
  mask.reasons.assign(doc.tokens().size(), 0);
  for (const NumericEntity& e : doc.numbers()) {
    mask.reasons[e.token_idx] |= protect::kNumber;
  }
  for (size_t i = 0; i < doc.tokens().size(); ++i) {
    const Token& t = doc.tokens()[i];
    if (t.pos == Pos::NUM) mask.reasons[i] |= protect::kNumber;
    if (gazetteer.is_unit(t.surface)) mask.reasons[i] |= protect::kUnit;
    if (phase == ProtectPhase::templatize_delete) {
      if (t.pos == Pos::VERB) mask.reasons[i] |= protect::kVerb;
      if (t.pos == Pos::ADJ) mask.reasons[i] |= protect::kAdjective;
      if (t.pos == Pos::ADV) mask.reasons[i] |= protect::kAdverb;
    }
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Document

Document Document::create(std::string id, std::vector<Token> tokens,
                          std::vector<SentenceSpan> spans,
                          std::vector<std::string> constituency,
                          std::optional<std::string> passive_text,
                          std::optional<std::string> raw_text,
                          bool fallback_annotated) {
  if (id.empty()) throw DataError("document id must be non-empty");
  const int n = static_cast<int>(tokens.size());
  if (spans.empty() && n > 0) throw DataError(id + ": missing sentence spans");
  int cursor = 0;
  for (const SentenceSpan& s : spans) {
    if (s.begin != cursor || s.end <= s.begin || s.end > n) {
      throw DataError(id + ": sentence spans must partition the token list");
    }
    cursor = s.end;
  }
  if (cursor != n) {
    throw DataError(id + ": sentence spans must cover all tokens");
  }
  if (!constituency.empty() &&
      constituency.size() != spans.size()) {
    throw DataError(id + ": expected one constituency tree per sentence");
  }
  for (size_t s = 0; s < constituency.size(); ++s) {
    if (constituency[s].empty()) continue;
    int leaves = bracketed_leaf_count(constituency[s]);
    int want = spans[s].end - spans[s].begin;
    if (leaves != want) {
      throw DataError(id + ": constituency tree for sentence " +
                      std::to_string(s) + " has " + std::to_string(leaves) +
                      " leaves, expected " + std::to_string(want));
    }
  }
  for (Token& t : tokens) {
    if (t.lemma.empty()) t.lemma = lowercase(t.surface);
    if (t.dep_head.has_value() &&
        (*t.dep_head < kRootHead || *t.dep_head >= n)) {
      throw DataError(id + ": dep_head out of range");
    }
  }

  Document d;
  d.id_ = std::move(id);
  d.tokens_ = std::move(tokens);
  d.sentences_ = std::move(spans);
  d.trees_ = std::move(constituency);
  d.numbers_ = extract_numbers(d.tokens_);
  d.passive_ = std::move(passive_text);
  d.fallback_annotated_ = fallback_annotated;
  if (raw_text) {
    d.text_ = std::move(*raw_text);
  } else {
    d.text_ = detokenize(d.surfaces());
  }
  return d;
}

std::vector<std::string> Document::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const Token& t : tokens_) out.push_back(t.surface);
  return out;
}

// ---------------------------------------------------------------------------
// Ingestion

Document ingest_json_record(const nlohmann::json& record,
                            const IngestOptions& options) {
  if (!record.is_object()) throw DataError("record must be a JSON object");
  if (!record.contains("id") || !record.at("id").is_string()) {
    throw DataError("record missing string field 'id'");
  }
  std::string id = record.at("id").get<std::string>();

  std::optional<std::string> passive;
  if (record.contains("passive_text")) {
    passive = record.at("passive_text").get<std::string>();
  }

  UnitGazetteer default_units;
  const UnitGazetteer* gaz = options.gazetteer;
  if (!gaz) {
    default_units = UnitGazetteer::defaults();
    gaz = &default_units;
  }
  Tokenizer tokenizer(gaz);

  std::vector<Token> tokens;
  std::vector<SentenceSpan> spans;
  std::optional<std::string> raw_text;
  bool fallback = false;

  if (record.contains("tokens") && record.at("tokens").is_array() &&
      !record.at("tokens").empty()) {
    std::vector<RawToken> raws;
    for (const auto& jt : record.at("tokens")) {
      Token t;
      if (!jt.contains("surface")) {
        throw DataError(id + ": token missing 'surface'");
      }
      t.surface = jt.at("surface").get<std::string>();
      if (!jt.contains("pos")) throw DataError(id + ": token missing 'pos'");
      t.pos = parse_pos(jt.at("pos").get<std::string>());
      if (jt.contains("lemma")) t.lemma = jt.at("lemma").get<std::string>();
      if (jt.contains("coref")) t.coref_id = jt.at("coref").get<int>();
      if (jt.contains("head")) t.dep_head = jt.at("head").get<int>();
      if (jt.contains("deprel")) t.dep_label = jt.at("deprel").get<std::string>();
      if (jt.contains("span") && jt.at("span").is_array() &&
          jt.at("span").size() == 2) {
        t.char_span = {jt.at("span")[0].get<int>(), jt.at("span")[1].get<int>()};
      }
      raws.push_back({t.surface, t.char_span.first, t.char_span.second});
      tokens.push_back(std::move(t));
    }
    spans = split_sentences(raws);
    if (record.contains("text")) {
      raw_text = record.at("text").get<std::string>();
      // Align char spans against the raw text when none were provided.
      int cursor = 0;
      for (Token& t : tokens) {
        if (t.char_span != std::pair<int, int>{0, 0}) continue;
        size_t found = raw_text->find(t.surface, cursor);
        if (found != std::string::npos) {
          t.char_span = {static_cast<int>(found),
                         static_cast<int>(found + t.surface.size())};
          cursor = static_cast<int>(found + t.surface.size());
        }
      }
    }
    assign_synthetic_coref(tokens);
  } else if (record.contains("text") && record.at("text").is_string()) {
    raw_text = record.at("text").get<std::string>();
    tokens = annotate_text(*raw_text, tokenizer, &spans);
    fallback = true;
  } else {
    throw DataError(id + ": record needs either 'tokens' or 'text'");
  }

  std::vector<std::string> trees;
  if (record.contains("parse")) {
    const auto& parse = record.at("parse");
    if (parse.is_string()) {
      trees.assign(spans.size(), "");
      if (spans.size() != 1) {
        throw DataError(id + ": single parse string for multi-sentence record");
      }
      trees[0] = parse.get<std::string>();
    } else if (parse.is_array()) {
      for (const auto& p : parse) trees.push_back(p.get<std::string>());
    }
  }

  return Document::create(std::move(id), std::move(tokens), std::move(spans),
                          std::move(trees), std::move(passive),
                          std::move(raw_text), fallback);
}

std::vector<Document> read_jsonl_corpus(const std::string& path,
                                        const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus file: " + path);
  std::vector<Document> docs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": malformed JSON record: " + e.what());
    }
    if (lineno == 1 && rec.is_object() && rec.contains("schema")) continue;
    try {
      docs.push_back(ingest_json_record(rec, options));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return docs;
}

namespace {

struct ConlluSentence {
  std::vector<Token> tokens;
};

Document flush_conllu_doc(std::string id, std::vector<ConlluSentence> sents) {
  std::vector<Token> tokens;
  std::vector<SentenceSpan> spans;
  for (ConlluSentence& s : sents) {
    int base = static_cast<int>(tokens.size());
    for (Token& t : s.tokens) {
      if (t.dep_head.has_value() && *t.dep_head != kRootHead) {
        *t.dep_head += base;
      }
      tokens.push_back(std::move(t));
    }
    spans.push_back({base, static_cast<int>(tokens.size())});
  }
  assign_synthetic_coref(tokens);
  return Document::create(std::move(id), std::move(tokens), std::move(spans));
}

}  // namespace

std::vector<Document> read_conllu(std::istream& in, const IngestOptions&,
                                  std::string_view default_id_prefix) {
  std::vector<Document> docs;
  std::vector<ConlluSentence> pending;
  ConlluSentence current;
  std::string doc_id;
  std::string sent_id;
  bool grouped = false;  // saw "# newdoc id"
  int auto_id = 0;
  int lineno = 0;

  auto close_sentence = [&]() {
    if (current.tokens.empty()) return;
    pending.push_back(std::move(current));
    current = {};
    if (!grouped) {
      std::string id = sent_id.empty()
                           ? std::string(default_id_prefix) +
                                 std::to_string(++auto_id)
                           : sent_id;
      docs.push_back(flush_conllu_doc(id, std::move(pending)));
      pending.clear();
    }
    sent_id.clear();
  };
  auto close_doc = [&]() {
    close_sentence();
    if (grouped && !pending.empty()) {
      docs.push_back(flush_conllu_doc(
          doc_id.empty() ? std::string(default_id_prefix) +
                               std::to_string(++auto_id)
                         : doc_id,
          std::move(pending)));
      pending.clear();
    }
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      close_sentence();
      continue;
    }
    if (line[0] == '#') {
      auto eat_meta = [&](std::string_view key) -> std::optional<std::string> {
        std::string prefix = "# " + std::string(key) + " = ";
        if (starts_with(line, prefix)) return line.substr(prefix.size());
        return std::nullopt;
      };
      if (auto v = eat_meta("newdoc id")) {
        close_doc();
        grouped = true;
        doc_id = *v;
      } else if (auto v2 = eat_meta("sent_id")) {
        sent_id = *v2;
      }
      continue;
    }
    std::vector<std::string> cols;
    {
      std::stringstream ss(line);
      std::string col;
      while (std::getline(ss, col, '\t')) cols.push_back(col);
    }
    if (cols.size() < 8) {
      throw DataError("conllu line " + std::to_string(lineno) +
                      ": expected at least 8 tab-separated columns");
    }
    const std::string& tid = cols[0];
    if (tid.find('-') != std::string::npos ||
        tid.find('.') != std::string::npos) {
      continue;  // multiword ranges / empty nodes
    }
    Token t;
    t.surface = cols[1];
    if (cols[2] != "_") t.lemma = cols[2];
    try {
      t.pos = parse_pos(cols[3]);
    } catch (const DataError& e) {
      throw DataError("conllu line " + std::to_string(lineno) + ": " +
                      e.what());
    }
    if (cols[6] != "_") {
      int head = std::stoi(cols[6]);
      t.dep_head = head == 0 ? kRootHead : head - 1;  // doc offset added later
    }
    if (cols[7] != "_") t.dep_label = cols[7];
    if (cols.size() >= 10 && cols[9] != "_") {
      std::stringstream ms(cols[9]);
      std::string field;
      while (std::getline(ms, field, '|')) {
        if (starts_with(field, "Coref=")) {
          t.coref_id = std::stoi(field.substr(6));
        }
      }
    }
    current.tokens.push_back(std::move(t));
  }
  close_doc();
  return docs;
}

std::vector<Document> read_conllu_file(const std::string& path,
                                       const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open conllu file: " + path);
  return read_conllu(in, options, "doc");
}

nlohmann::json document_to_json(const Document& doc) {
  nlohmann::json rec;
  rec["id"] = doc.id();
  rec["text"] = doc.text();
  if (doc.passive_text()) rec["passive_text"] = *doc.passive_text();
  nlohmann::json toks = nlohmann::json::array();
  for (const Token& t : doc.tokens()) {
    nlohmann::json jt;
    jt["surface"] = t.surface;
    jt["pos"] = pos_name(t.pos);
    jt["lemma"] = t.lemma;
    if (t.coref_id) jt["coref"] = *t.coref_id;
    if (t.dep_head) jt["head"] = *t.dep_head;
    if (!t.dep_label.empty()) jt["deprel"] = t.dep_label;
    jt["span"] = {t.char_span.first, t.char_span.second};
    toks.push_back(std::move(jt));
  }
  rec["tokens"] = std::move(toks);
  bool any_tree = false;
  for (const std::string& t : doc.constituency()) any_tree |= !t.empty();
  if (any_tree) rec["parse"] = doc.constituency();
  return rec;
}

}  // namespace parakit

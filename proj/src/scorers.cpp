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

#include "parakit/scorers.hpp"

#include <cmath>
#include <fstream>

#include "parakit/common.hpp"

namespace parakit {

namespace {

constexpr int kUnkId = 0;
constexpr int kBosId = 1;
constexpr const char* kUnkWord = "<unk>";
constexpr const char* kBosWord = "<s>";

std::vector<std::string> lowercased(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(lowercase(t));
  return out;
}

std::vector<std::string> tokenize_surfaces(const std::string& text) {
  static const UnitGazetteer units = UnitGazetteer::defaults();
  Tokenizer tokenizer(&units);
  std::vector<std::string> out;
  for (const RawToken& t : tokenizer.tokenize(text)) out.push_back(t.surface);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// FluencyModel

FluencyModel FluencyModel::train(
    const std::vector<std::vector<std::string>>& sentences, int order,
    double smoothing) {
  if (order < 1) throw ConfigError("n-gram order must be >= 1");
  if (smoothing <= 0) throw ConfigError("smoothing constant must be > 0");
  bool any = false;
  for (const auto& s : sentences) any |= !s.empty();
  if (!any) throw ConfigError("cannot train a fluency model on an empty corpus");

  FluencyModel m;
  m.order_ = order;
  m.smoothing_ = smoothing;
  m.id_to_word_ = {kUnkWord, kBosWord};
  m.vocab_ = {{kUnkWord, kUnkId}, {kBosWord, kBosId}};

  for (const auto& sentence : sentences) {
    std::vector<int> ids(order - 1, kBosId);
    for (const std::string& tok : sentence) {
      std::string w = lowercase(tok);
      auto [it, inserted] =
          m.vocab_.emplace(w, static_cast<int>(m.id_to_word_.size()));
      if (inserted) m.id_to_word_.push_back(w);
      ids.push_back(it->second);
    }
    for (size_t j = order - 1; j < ids.size(); ++j) {
      std::string ctx = m.context_key(ids, j);
      ++m.counts_[ctx][ids[j]];
      ++m.context_totals_[ctx];
    }
  }
  return m;
}

FluencyModel FluencyModel::train_on_documents(const std::vector<Document>& docs,
                                              int order, double smoothing) {
  std::vector<std::vector<std::string>> sentences;
  for (const Document& d : docs) {
    for (const SentenceSpan& s : d.sentences()) {
      std::vector<std::string> toks;
      for (int i = s.begin; i < s.end; ++i) {
        toks.push_back(d.tokens()[i].surface);
      }
      sentences.push_back(std::move(toks));
    }
  }
  return train(sentences, order, smoothing);
}

int FluencyModel::word_id(const std::string& lowercased_word) const {
  auto it = vocab_.find(lowercased_word);
  return it == vocab_.end() ? kUnkId : it->second;
}

std::string FluencyModel::context_key(const std::vector<int>& ids,
                                      size_t end) const {
  // Context is the order-1 ids before position `end`, comma-joined.
  std::string key;
  for (size_t i = end - (order_ - 1); i < end; ++i) {
    if (!key.empty()) key += ',';
    key += std::to_string(ids[i]);
  }
  return key;
}

double FluencyModel::fluency(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) throw DataError("fluency of empty token sequence");
  // Predicted vocabulary: trained words + UNK (BOS is context-only).
  const double vocab = static_cast<double>(id_to_word_.size()) - 1.0;
  std::vector<int> ids(order_ - 1, kBosId);
  for (const std::string& t : tokens) ids.push_back(word_id(lowercase(t)));

  double log_sum = 0;
  const size_t k = tokens.size();
  for (size_t j = order_ - 1; j < ids.size(); ++j) {
    std::string ctx = context_key(ids, j);
    long total = 0;
    long count = 0;
    auto tot_it = context_totals_.find(ctx);
    if (tot_it != context_totals_.end()) {
      total = tot_it->second;
      const auto& row = counts_.at(ctx);
      auto c_it = row.find(ids[j]);
      if (c_it != row.end()) count = c_it->second;
    }
    double prob = (count + smoothing_) / (total + smoothing_ * vocab);
    log_sum += std::log(prob);
  }
  return std::exp(log_sum / static_cast<double>(k));
}

double FluencyModel::fluency(const std::string& text) const {
  std::vector<std::string> toks = tokenize_surfaces(text);
  if (toks.empty()) throw DataError("fluency of empty text");
  return fluency(toks);
}

double FluencyModel::conditional(const std::string& word,
                                 const std::vector<std::string>& context) const {
  const double vocab = static_cast<double>(id_to_word_.size()) - 1.0;
  std::vector<int> ids(order_ - 1, kBosId);
  for (const std::string& c : context) ids.push_back(word_id(lowercase(c)));
  // Keep only the last order-1 context ids.
  std::vector<int> tail(ids.end() - (order_ - 1), ids.end());
  tail.push_back(word_id(lowercase(word)));
  std::string ctx = context_key(tail, tail.size() - 1);
  long total = 0;
  long count = 0;
  auto tot_it = context_totals_.find(ctx);
  if (tot_it != context_totals_.end()) {
    total = tot_it->second;
    const auto& row = counts_.at(ctx);
    auto c_it = row.find(tail.back());
    if (c_it != row.end()) count = c_it->second;
  }
  return (count + smoothing_) / (total + smoothing_ * vocab);
}

nlohmann::json FluencyModel::to_json() const {
  nlohmann::json j;
  j["schema"] = "parakit/fluency-model";
  j["version"] = 1;
  j["order"] = order_;
  j["smoothing"] = smoothing_;
  j["vocab"] = id_to_word_;
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& [ctx, row] : counts_) {
    nlohmann::json entry;
    entry["ctx"] = ctx;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [wid, count] : row) {
      cells.push_back({wid, count});
    }
    entry["counts"] = std::move(cells);
    counts.push_back(std::move(entry));
  }
  j["ngrams"] = std::move(counts);
  return j;
}

FluencyModel FluencyModel::from_json(const nlohmann::json& j) {
  FluencyModel m;
  m.order_ = j.at("order").get<int>();
  m.smoothing_ = j.at("smoothing").get<double>();
  m.id_to_word_ = j.at("vocab").get<std::vector<std::string>>();
  for (size_t i = 0; i < m.id_to_word_.size(); ++i) {
    m.vocab_[m.id_to_word_[i]] = static_cast<int>(i);
  }
  for (const auto& entry : j.at("ngrams")) {
    std::string ctx = entry.at("ctx").get<std::string>();
    auto& row = m.counts_[ctx];
    long total = 0;
    for (const auto& cell : entry.at("counts")) {
      int wid = cell[0].get<int>();
      long count = cell[1].get<long>();
      row[wid] = count;
      total += count;
    }
    m.context_totals_[ctx] = total;
  }
  return m;
}

void FluencyModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write fluency model: " + path);
  out << to_json().dump() << "\n";
}

FluencyModel FluencyModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fluency model: " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

// ---------------------------------------------------------------------------
// EmbeddedSimilarity

EmbeddedSimilarity EmbeddedSimilarity::fit(const std::vector<Document>& corpus) {
  EmbeddedSimilarity s;
  s.fitted_docs_ = corpus.size();
  std::unordered_map<std::string, size_t> df;
  for (const Document& d : corpus) {
    std::unordered_map<std::string, double> seen = s.lemma_counts(d.text());
    for (const auto& [lemma, _] : seen) ++df[lemma];
  }
  const double n = static_cast<double>(corpus.size());
  for (const auto& [lemma, count] : df) {
    s.idf_[lemma] = std::log((1.0 + n) / (1.0 + count)) + 1.0;
  }
  return s;
}

std::unordered_map<std::string, double> EmbeddedSimilarity::lemma_counts(
    const std::string& text) const {
  std::unordered_map<std::string, double> counts;
  for (const std::string& tok : tokenize_surfaces(text)) {
    Pos pos = fallback_pos(tok, false);
    if (pos == Pos::PUNCT) continue;
    counts[normalize_lemma(tok, pos)] += 1.0;
  }
  return counts;
}

double EmbeddedSimilarity::raw(const std::string& a, const std::string& b) {
  auto va = lemma_counts(a);
  auto vb = lemma_counts(b);
  if (va.empty() || vb.empty()) return va.empty() == vb.empty() ? 1.0 : 0.0;
  auto weight = [&](const std::string& lemma) {
    auto it = idf_.find(lemma);
    return it == idf_.end() ? 1.0 : it->second;
  };
  double dot = 0, na = 0, nb = 0;
  for (auto& [lemma, tf] : va) {
    double w = weight(lemma);
    va[lemma] = tf * w;
    na += va[lemma] * va[lemma];
  }
  for (auto& [lemma, tf] : vb) {
    double w = weight(lemma);
    vb[lemma] = tf * w;
    nb += vb[lemma] * vb[lemma];
  }
  for (const auto& [lemma, wa] : va) {
    auto it = vb.find(lemma);
    if (it != vb.end()) dot += wa * it->second;
  }
  double denom = std::sqrt(na) * std::sqrt(nb);
  if (denom == 0) return 0.0;
  double cos = dot / denom;
  return std::min(1.0, std::max(-1.0, cos));
}

}  // namespace parakit

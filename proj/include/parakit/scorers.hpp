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

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "parakit/corpus.hpp"

#include "json.hpp"

namespace parakit {

// Additively smoothed n-gram language model. Stand-in for a neural
// autoregressive scorer: reproducible, dependency-free, and trained on the
// working corpus itself. The external scorer protocol recovers full fidelity
// when a neural backend is available.
class FluencyModel {
 public:
  // Throws ConfigError for order < 1 or an empty corpus.
  static FluencyModel train(const std::vector<std::vector<std::string>>& sentences,
                            int order, double smoothing);
  static FluencyModel train_on_documents(const std::vector<Document>& docs,
                                         int order, double smoothing);

  // Geometric mean of the token likelihoods; the first tokens condition on
  // begin-of-sequence sentinels. Result in (0, 1]. Throws DataError on empty
  // input.
  double fluency(const std::vector<std::string>& tokens) const;
  double fluency(const std::string& text) const;

  int order() const { return order_; }
  double smoothing() const { return smoothing_; }
  size_t vocab_size() const { return vocab_.size(); }

  nlohmann::json to_json() const;
  static FluencyModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static FluencyModel load(const std::string& path);

  // p(word | context), conditionals over vocab+UNK sum to 1 per context.
  double conditional(const std::string& word,
                     const std::vector<std::string>& context) const;

 private:
  int word_id(const std::string& lowercased) const;
  std::string context_key(const std::vector<int>& ids, size_t end) const;

  int order_ = 3;
  double smoothing_ = 0.1;
  std::vector<std::string> id_to_word_;               // [0]=UNK, [1]=BOS
  std::unordered_map<std::string, int> vocab_;        // lowercased word -> id
  std::unordered_map<std::string, std::unordered_map<int, long>> counts_;
  std::unordered_map<std::string, long> context_totals_;
};

// Similarity scorers return a raw score in [-1, 1]; callers consume the
// rescaled (raw + 1) / 2 form.
class SimilarityScorer {
 public:
  virtual ~SimilarityScorer() = default;
  virtual double raw(const std::string& a, const std::string& b) = 0;
  double similarity(const std::string& a, const std::string& b) {
    return (raw(a, b) + 1.0) / 2.0;
  }
};

// TF-IDF weighted bag-of-lemmas cosine. A stand-in for a trained
// paraphrase scorer; it cannot see solvability, only lexical overlap.
class EmbeddedSimilarity : public SimilarityScorer {
 public:
  EmbeddedSimilarity() = default;  // idf-less (all weights 1)
  static EmbeddedSimilarity fit(const std::vector<Document>& corpus);

  double raw(const std::string& a, const std::string& b) override;

 private:
  std::unordered_map<std::string, double> lemma_counts(
      const std::string& text) const;
  std::unordered_map<std::string, double> idf_;
  size_t fitted_docs_ = 0;
};

// Client for an out-of-process neural scorer. One JSON request per batch:
//   {"op": "fluency"|"similarity", "items": [...]}  ->  {"scores": [...]}
// Fluency items are strings, similarity items are {"a": ..., "b": ...}.
// Two transports share the schema: HTTP POST and JSON lines over a spawned
// subprocess pipe.
class ScorerClient : public SimilarityScorer {
 public:
  ~ScorerClient() override;

  static std::unique_ptr<ScorerClient> http(const std::string& url,
                                            int max_attempts = 3,
                                            int timeout_seconds = 10);
  static std::unique_ptr<ScorerClient> subprocess(const std::string& command,
                                                  int max_attempts = 3);

  // Batch calls preserve item order. Throws ScorerError (with attempt count
  // and retryability) after retries are exhausted.
  std::vector<double> similarity_batch(
      const std::vector<std::pair<std::string, std::string>>& pairs);
  std::vector<double> fluency_batch(const std::vector<std::string>& texts);

  double raw(const std::string& a, const std::string& b) override;

 private:
  struct Impl;
  explicit ScorerClient(std::unique_ptr<Impl> impl);
  nlohmann::json round_trip(const nlohmann::json& request);
  std::unique_ptr<Impl> impl_;
};

}  // namespace parakit

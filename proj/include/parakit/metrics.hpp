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

#include "parakit/corpus.hpp"
#include "parakit/scorers.hpp"

#include "json.hpp"

namespace parakit {

struct MetricWeights {
  double v1 = 0.6;        // weight of 1-BLEU inside diversity
  double v2 = 0.4;        // weight of WPD inside diversity
  double w_sigma = 0.5;   // PQI weights
  double w_delta = 0.25;
  double w_nu = 0.25;
  double p = 3.0;         // numeracy exponent
  double epsilon = 1e-6;  // log clamp floor for PQI

  // Throws ConfigError unless v1+v2 == 1, w_* sum to 1, p >= 1, epsilon > 0.
  void validate() const;
  nlohmann::json to_json() const;
  static MetricWeights from_json(const nlohmann::json& j);
};

// All scores are computed against the original sample; there are no
// reference paraphrases anywhere in the pipeline.
struct ScoreVector {
  double sigma = 0;
  double bleu_div = 0;  // 1 - BLEU
  double wpd = 0;
  double delta = 0;     // v1 * bleu_div + v2 * wpd
  double nu = 0;
  double pqi = 0;
  bool unscorable = false;
  std::string error;

  nlohmann::json to_json() const;
  static ScoreVector from_json(const nlohmann::json& j);
};

// Sentence-level BLEU of candidate y against the single reference x:
// clipped modified n-gram precision up to max_order, brevity penalty
// exp(1 - r/c) for c < r, and an exponentially decaying floor for orders
// with zero matches (the k-th zero order contributes 10^-2k). Pinned by a
// golden-file test; do not change one without the other.
double bleu(const std::vector<std::string>& x, const std::vector<std::string>& y,
            int max_order = 4);
double bleu_diversity(const std::vector<std::string>& x,
                      const std::vector<std::string>& y, int max_order = 4);
// Text overloads tokenize with corpus rules. Throw DataError on empty input.
double bleu_diversity(const std::string& x, const std::string& y,
                      int max_order = 4);

// Word position deviation: shared tokens are aligned occurrence-by-occurrence
// (k-th occurrence in x to k-th in y); the score is the mean absolute
// difference of normalized positions pos/(len-1). Zero for single-token
// texts or an empty alignment. This is a reconstruction of a
// displacement-style metric and deliberately isolated so it can be swapped.
struct WpdResult {
  double value = 0;
  bool empty_alignment = false;
};
WpdResult wpd_detailed(const std::vector<std::string>& x,
                       const std::vector<std::string>& y);
double wpd(const std::vector<std::string>& x, const std::vector<std::string>& y);
double wpd(const std::string& x, const std::string& y);

// nu = (|N_x intersect N_y| / max(|N_x|, |N_y|))^p over exact-decimal
// multisets. Both empty -> 1; exactly one empty -> 0.
double numeracy(const std::vector<std::string>& multiset_x,
                const std::vector<std::string>& multiset_y, double p);
double numeracy(const Document& x, const Document& y, double p);
double numeracy_texts(const std::string& x, const std::string& y, double p);

double diversity(double bleu_div, double wpd_value, const MetricWeights& w);
double diversity(const std::string& x, const std::string& y,
                 const MetricWeights& w);

// exp(w_sigma ln max(sigma,eps) + w_delta ln max(delta,eps) +
//     w_nu ln max(nu,eps)). Monotone in each argument and bounded by the
// min/max of its inputs.
double pqi(double sigma, double delta, double nu, const MetricWeights& w);

// Scores one candidate against its source document. Scorer failures mark the
// result unscorable instead of aborting the batch.
ScoreVector score_candidate(const Document& x, const std::string& y,
                            SimilarityScorer& scorer, const MetricWeights& w);

}  // namespace parakit

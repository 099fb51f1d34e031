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

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parakit/metrics.hpp"
#include "parakit/noise.hpp"

namespace parakit {

struct CurationConfig {
  // Quality filtering thresholds (strict >).
  double tau_sigma = 0.9;
  double tau_delta = 0.15;
  double tau_nu = 0.6;
  // Prompt-consistency thresholds (non-strict >=).
  double tau_s = 0.1;
  double tau_c = 0.3;
  double tau_sc = 0.25;
  // Selection.
  double alpha = 0.65;
  int k = 2;
  MetricWeights weights;

  void validate() const;
  nlohmann::json to_json() const;
  static CurationConfig from_json(const nlohmann::json& j);
};

struct FilterDecision {
  bool pass = true;
  std::string reason;  // qf:sigma, qf:delta, qf:nu, pcf:s, pcf:c, pcf:sc
};

// Passes iff sigma > tau_sigma, delta > tau_delta, nu > tau_nu, all strict.
// The reason is the first failing check in the fixed order sigma, delta, nu.
FilterDecision qf_filter(const ScoreVector& scores, const CurationConfig& cfg);

// Requires WPD >= tau_s when the prompt says shuffle, 1-BLEU >= tau_c when it
// says replace, delta >= tau_sc when it says fix; combined prompts need every
// condition. The empty category (plain "paraphrase:") passes vacuously.
FilterDecision pcf_filter(const ScoreVector& scores,
                          const std::set<NoiseCategory>& prompt_categories,
                          const CurationConfig& cfg);

struct ScoredCandidate {
  std::string doc_id;
  std::string text;
  std::string prompt;
  std::string combination_id;
  ScoreVector scores;
};

struct SelectionStep {
  size_t candidate_index;  // index into the candidate list handed in
  double score;            // PAMMR objective at the step it was picked
};

struct Rejection {
  size_t candidate_index;
  std::string reason;
};

struct SelectionResult {
  std::string doc_id;
  std::vector<SelectionStep> selected;
  std::vector<Rejection> rejections;
};

using PairwiseDiversity = std::function<double(size_t, size_t)>;

// Greedy top-k: each step picks the remaining candidate maximizing
//   alpha * (w_sigma*sigma + w_delta*delta + w_nu*nu)
//     + (1 - alpha) * min over selected s of delta(candidate, s)
// The diversity term is 0 while nothing is selected; ties break toward the
// lowest candidate index. Candidates must already have passed QF and PCF.
SelectionResult pammr_select(const std::string& doc_id,
                             const std::vector<ScoredCandidate>& candidates,
                             const CurationConfig& cfg,
                             const PairwiseDiversity& pairwise);

// Default pairwise diversity: the metrics-module text diversity between
// candidate texts, same v1/v2 mix.
PairwiseDiversity text_pairwise_diversity(
    const std::vector<ScoredCandidate>& candidates, const MetricWeights& w);

// Filters then selects for one document; rejections from QF, PCF and
// unscorable candidates are always recorded, never silent.
SelectionResult curate_document(const std::string& doc_id,
                                const std::vector<ScoredCandidate>& candidates,
                                const CurationConfig& cfg);

}  // namespace parakit

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

#include "parakit/curate.hpp"

#include <algorithm>
#include <limits>

namespace parakit {

void CurationConfig::validate() const {
  for (double tau : {tau_sigma, tau_delta, tau_nu, tau_s, tau_c, tau_sc}) {
    if (tau < 0.0 || tau > 1.0) {
      throw ConfigError("curation thresholds must be in [0, 1]");
    }
  }
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
  if (k < 1) throw ConfigError("k must be >= 1");
  weights.validate();
}

nlohmann::json CurationConfig::to_json() const {
  nlohmann::json j = {{"tau_sigma", tau_sigma}, {"tau_delta", tau_delta},
                      {"tau_nu", tau_nu},       {"tau_s", tau_s},
                      {"tau_c", tau_c},         {"tau_sc", tau_sc},
                      {"alpha", alpha},         {"k", k}};
  j["weights"] = weights.to_json();
  return j;
}

CurationConfig CurationConfig::from_json(const nlohmann::json& j) {
  CurationConfig c;
  if (j.contains("tau_sigma")) c.tau_sigma = j.at("tau_sigma").get<double>();
  if (j.contains("tau_delta")) c.tau_delta = j.at("tau_delta").get<double>();
  if (j.contains("tau_nu")) c.tau_nu = j.at("tau_nu").get<double>();
  if (j.contains("tau_s")) c.tau_s = j.at("tau_s").get<double>();
  if (j.contains("tau_c")) c.tau_c = j.at("tau_c").get<double>();
  if (j.contains("tau_sc")) c.tau_sc = j.at("tau_sc").get<double>();
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("k")) c.k = j.at("k").get<int>();
  if (j.contains("weights")) {
    c.weights = MetricWeights::from_json(j.at("weights"));
  }
  c.validate();
  return c;
}

FilterDecision qf_filter(const ScoreVector& scores, const CurationConfig& cfg) {
  if (scores.unscorable) return {false, "unscorable"};
  if (!(scores.sigma > cfg.tau_sigma)) return {false, "qf:sigma"};
  if (!(scores.delta > cfg.tau_delta)) return {false, "qf:delta"};
  if (!(scores.nu > cfg.tau_nu)) return {false, "qf:nu"};
  return {true, ""};
}

FilterDecision pcf_filter(const ScoreVector& scores,
                          const std::set<NoiseCategory>& prompt_categories,
                          const CurationConfig& cfg) {
  if (scores.unscorable) return {false, "unscorable"};
  if (prompt_categories.count(NoiseCategory::s) && !(scores.wpd >= cfg.tau_s)) {
    return {false, "pcf:s"};
  }
  if (prompt_categories.count(NoiseCategory::c) &&
      !(scores.bleu_div >= cfg.tau_c)) {
    return {false, "pcf:c"};
  }
  if (prompt_categories.count(NoiseCategory::cs) &&
      !(scores.delta >= cfg.tau_sc)) {
    return {false, "pcf:sc"};
  }
  return {true, ""};
}

SelectionResult pammr_select(const std::string& doc_id,
                             const std::vector<ScoredCandidate>& candidates,
                             const CurationConfig& cfg,
                             const PairwiseDiversity& pairwise) {
  SelectionResult result;
  result.doc_id = doc_id;
  const MetricWeights& w = cfg.weights;

  std::vector<double> relevance(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    const ScoreVector& s = candidates[i].scores;
    relevance[i] = w.w_sigma * s.sigma + w.w_delta * s.delta + w.w_nu * s.nu;
  }

  std::vector<bool> taken(candidates.size(), false);
  std::vector<size_t> selected;
  while (static_cast<int>(selected.size()) < cfg.k) {
    double best = -std::numeric_limits<double>::infinity();
    std::optional<size_t> best_idx;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      double div_term = 0.0;
      if (!selected.empty()) {
        div_term = std::numeric_limits<double>::infinity();
        for (size_t s : selected) {
          div_term = std::min(div_term, pairwise(i, s));
        }
      }
      double score = cfg.alpha * relevance[i] + (1.0 - cfg.alpha) * div_term;
      if (score > best) {  // strict: ties keep the lowest index
        best = score;
        best_idx = i;
      }
    }
    if (!best_idx) break;
    taken[*best_idx] = true;
    selected.push_back(*best_idx);
    result.selected.push_back({*best_idx, best});
  }
  return result;
}

PairwiseDiversity text_pairwise_diversity(
    const std::vector<ScoredCandidate>& candidates, const MetricWeights& w) {
  return [&candidates, w](size_t i, size_t j) {
    return diversity(candidates[i].text, candidates[j].text, w);
  };
}

SelectionResult curate_document(const std::string& doc_id,
                                const std::vector<ScoredCandidate>& candidates,
                                const CurationConfig& cfg) {
  std::vector<ScoredCandidate> passing;
  std::vector<size_t> passing_index;
  SelectionResult rejections_only;
  rejections_only.doc_id = doc_id;
  for (size_t i = 0; i < candidates.size(); ++i) {
    FilterDecision qf = qf_filter(candidates[i].scores, cfg);
    if (!qf.pass) {
      rejections_only.rejections.push_back({i, qf.reason});
      continue;
    }
    FilterDecision pcf = pcf_filter(
        candidates[i].scores, parse_prompt_categories(candidates[i].prompt),
        cfg);
    if (!pcf.pass) {
      rejections_only.rejections.push_back({i, pcf.reason});
      continue;
    }
    passing.push_back(candidates[i]);
    passing_index.push_back(i);
  }

  SelectionResult result = pammr_select(
      doc_id, passing, cfg, text_pairwise_diversity(passing, cfg.weights));
  // Map indices back to the caller's candidate list.
  for (SelectionStep& step : result.selected) {
    step.candidate_index = passing_index[step.candidate_index];
  }
  result.rejections = std::move(rejections_only.rejections);
  return result;
}

}  // namespace parakit

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
#include <optional>
#include <string>
#include <vector>

#include "parakit/curate.hpp"
#include "parakit/metrics.hpp"
#include "parakit/noise.hpp"
#include "parakit/scorers.hpp"

namespace parakit {

struct PipelineConfig {
  uint64_t seed = 3407;
  double passive_fraction = 0.2;
  NoiseParams noise;
  CurationConfig curation;
  int jobs = 1;
  bool strict = false;
  // Fraction of documents allowed to fail noising before the run aborts.
  double failure_budget = 0.01;
  int fluency_order = 3;
  double fluency_smoothing = 0.1;
  std::string scorer_backend = "embedded";  // embedded | http | subprocess
  std::string scorer_url;
  std::string scorer_command;
  bool strip_edits = false;

  void validate() const;
  nlohmann::json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig from_file(const std::string& path);
};

// ---------------------------------------------------------------------------
// Mock denoiser

struct MockOptions {
  // When set, one randomly chosen edit is dropped from the replay, yielding
  // realistic imperfect candidates for exercising the filters.
  bool lossy = false;
  uint64_t seed = 3407;
  // Used to resolve templates for inference-phase samples.
  const SynonymLexicon* lexicon = nullptr;
};

// Exact reverse replay of every edit: returns the pre-noise (pre-passive)
// text. Throws ReconstructionError with the offending edit index on
// corrupt or missing records.
std::string replay_edits_reverse(const NoisedSample& sample);

// Stands in for the trained denoiser. Train-phase samples reconstruct the
// pre-noise original exactly. Inference-phase samples emulate what the
// denoiser actually does to grounded noise: structural rearrangements from
// the grounded s-noise stay (it cannot detect them), substituted synonyms
// stay, templates resolve to a lexicon synonym of the original (or the
// original itself), and deletions/insertions are undone.
std::string mock_denoise(const NoisedSample& sample,
                         const MockOptions& options = {});

// ---------------------------------------------------------------------------
// Stages

struct MetricStats {
  double mean = 0;
  double stddev = 0;  // population
  size_t n = 0;
};

struct RunReport {
  size_t documents = 0;
  size_t noised = 0;
  size_t candidates = 0;
  size_t scored = 0;
  size_t qf_pass = 0;
  size_t pcf_pass = 0;
  size_t selected = 0;
  bool empty = false;  // empty-report sentinel
  std::map<std::string, MetricStats> metrics;
  std::map<std::string, size_t> per_prompt_scored;
  std::map<std::string, size_t> per_prompt_selected;

  nlohmann::json to_json() const;
};

// Resolved passive targets: a copy of the corpus where flagged documents
// lacking passive_text get the rule-based fallback (flagged), and documents
// the fallback cannot handle lose their flag with a warning.
struct PassivePlan {
  std::vector<bool> flags;
  std::vector<Document> docs;  // same order as the input corpus
  std::vector<std::string> warnings;
};
PassivePlan resolve_passive_targets(const std::vector<Document>& corpus,
                                    double fraction, uint64_t seed);

// Train phase: one sampled combination per document, passive targets per the
// plan. Inference phase: every registered inference combination once per
// document. Deterministic for a given (corpus, registry, seed); document
// failures are tolerated up to the failure budget.
std::vector<NoisedSample> generate_noise(const std::vector<Document>& corpus,
                                         const CombinationRegistry& registry,
                                         const NoiseResources& resources,
                                         const PipelineConfig& config,
                                         Phase phase);

struct CandidateRecord {
  std::string doc_id;
  std::string prompt;
  std::string text;
  std::string combination_id;
};

struct Stage2Result {
  std::vector<nlohmann::json> curated;     // stage-2 records
  std::vector<nlohmann::json> rejections;  // rejection log records
  std::vector<ScoredCandidate> scored;     // every scored candidate
  RunReport report;
};

Stage2Result stage2_curate(const std::vector<Document>& corpus,
                           const std::vector<CandidateRecord>& candidates,
                           const PipelineConfig& config,
                           SimilarityScorer& scorer);

// Mean and population standard deviation per metric over scored candidates.
// PQI is averaged per sample, never recomputed from column means.
RunReport report_scores(const std::vector<ScoredCandidate>& scored);

// The full closed loop: train-phase noising, inference-phase noising, mock
// denoising, scoring, filtering, selection and reporting. Writes stage1.jsonl,
// candidates.jsonl, scored.jsonl, stage2.jsonl, rejections.jsonl and
// report.json into out_dir.
RunReport pipeline_run(const std::string& corpus_path,
                       const std::string& registry_path,
                       const std::string& out_dir, PipelineConfig config);

// Corpus loading dispatch: .conllu goes through the CoNLL-U reader,
// everything else through JSONL.
std::vector<Document> load_corpus(const std::string& path,
                                  const UnitGazetteer* gazetteer = nullptr);

}  // namespace parakit

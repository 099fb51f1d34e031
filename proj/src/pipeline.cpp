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

#include "parakit/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "parakit/jsonl.hpp"

namespace parakit {

namespace {

// Deterministic regardless of worker count: every task writes its own slot.
template <typename Fn>
void parallel_for(size_t n, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  size_t count = std::min(static_cast<size_t>(jobs), n);
  threads.reserve(count);
  for (size_t t = 0; t < count; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::string> tokenize_plain(const std::string& text) {
  static const UnitGazetteer units = UnitGazetteer::defaults();
  Tokenizer tokenizer(&units);
  std::vector<std::string> out;
  for (const RawToken& t : tokenizer.tokenize(text)) out.push_back(t.surface);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void PipelineConfig::validate() const {
  if (passive_fraction < 0 || passive_fraction > 1) {
    throw ConfigError("passive fraction must be in [0, 1]");
  }
  if (failure_budget < 0 || failure_budget > 1) {
    throw ConfigError("failure budget must be in [0, 1]");
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (fluency_order < 1) throw ConfigError("fluency order must be >= 1");
  if (scorer_backend != "embedded" && scorer_backend != "http" &&
      scorer_backend != "subprocess") {
    throw ConfigError("scorer backend must be embedded, http or subprocess");
  }
  curation.validate();
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["passive_fraction"] = passive_fraction;
  j["noise"] = noise.to_json();
  j["curation"] = curation.to_json();
  j["jobs"] = jobs;
  j["strict"] = strict;
  j["failure_budget"] = failure_budget;
  j["fluency"] = {{"order", fluency_order}, {"smoothing", fluency_smoothing}};
  j["scorer"] = {{"backend", scorer_backend},
                 {"url", scorer_url},
                 {"command", scorer_command}};
  j["strip_edits"] = strip_edits;
  return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  PipelineConfig c;
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("passive_fraction")) {
    c.passive_fraction = j.at("passive_fraction").get<double>();
  }
  if (j.contains("noise")) c.noise = NoiseParams::from_json(j.at("noise"));
  if (j.contains("curation")) {
    c.curation = CurationConfig::from_json(j.at("curation"));
  }
  if (j.contains("weights")) {
    c.curation.weights = MetricWeights::from_json(j.at("weights"));
  }
  if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
  if (j.contains("strict")) c.strict = j.at("strict").get<bool>();
  if (j.contains("failure_budget")) {
    c.failure_budget = j.at("failure_budget").get<double>();
  }
  if (j.contains("fluency")) {
    const auto& f = j.at("fluency");
    if (f.contains("order")) c.fluency_order = f.at("order").get<int>();
    if (f.contains("smoothing")) {
      c.fluency_smoothing = f.at("smoothing").get<double>();
    }
  }
  if (j.contains("scorer")) {
    const auto& s = j.at("scorer");
    if (s.contains("backend")) {
      c.scorer_backend = s.at("backend").get<std::string>();
    }
    if (s.contains("url")) c.scorer_url = s.at("url").get<std::string>();
    if (s.contains("command")) {
      c.scorer_command = s.at("command").get<std::string>();
    }
  }
  if (j.contains("strip_edits")) c.strip_edits = j.at("strip_edits").get<bool>();
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config " + path + ": " + e.what());
  }
  return from_json(j);
}

// ---------------------------------------------------------------------------
// Mock denoiser

namespace {

struct ReplayCell {
  std::string surface;   // exact reconstruction view
  std::string behavior;  // what the trained denoiser would emit
};

std::vector<ReplayCell> replay_backward(const NoisedSample& sample,
                                        const SynonymLexicon* lexicon,
                                        bool behavioral, int skip_index,
                                        bool lenient) {
  std::vector<ReplayCell> cells;
  for (const std::string& tok : tokenize_plain(sample.noised_text)) {
    cells.push_back({tok, tok});
  }
  auto fail = [&](int idx, const std::string& what) {
    throw ReconstructionError(sample.doc_id + ": edit " + std::to_string(idx) +
                                  ": " + what,
                              idx);
  };
  for (int idx = static_cast<int>(sample.edits.size()) - 1; idx >= 0; --idx) {
    if (idx == skip_index) continue;
    const Edit& e = sample.edits[idx];
    const int n = static_cast<int>(cells.size());
    switch (e.kind) {
      case Edit::Kind::del: {
        if (e.pos < 0 || e.pos > n) {
          if (lenient) break;
          fail(idx, "deletion position out of range");
        }
        cells.insert(cells.begin() + e.pos, {e.surface, e.surface});
        break;
      }
      case Edit::Kind::ins: {
        if (e.pos < 0 || e.pos >= n) {
          if (lenient) break;
          fail(idx, "insertion position out of range");
        }
        if (cells[e.pos].surface != e.surface && !lenient) {
          fail(idx, "expected inserted token '" + e.surface + "', found '" +
                        cells[e.pos].surface + "'");
        }
        cells.erase(cells.begin() + e.pos);
        break;
      }
      case Edit::Kind::mask: {
        if (e.pos < 0 || e.pos >= n) {
          if (lenient) break;
          fail(idx, "mask position out of range");
        }
        if (cells[e.pos].surface != e.surface && !lenient) {
          fail(idx, "expected mask token '" + e.surface + "', found '" +
                        cells[e.pos].surface + "'");
        }
        cells[e.pos].surface = e.original;
        if (behavioral) {
          // The denoiser fills templates with plausible entities; a lexicon
          // synonym of the original is the closest deterministic stand-in.
          std::string filled = e.original;
          if (lexicon && !e.tag.empty()) {
            Pos pos = parse_pos(e.tag);
            const auto& entries =
                lexicon->lookup(normalize_lemma(e.original, pos), pos);
            if (!entries.empty()) filled = entries.front().synonym;
          }
          cells[e.pos].behavior = filled;
        } else {
          cells[e.pos].behavior = e.original;
        }
        break;
      }
      case Edit::Kind::sub: {
        if (e.pos < 0 || e.pos >= n) {
          if (lenient) break;
          fail(idx, "substitution position out of range");
        }
        if (cells[e.pos].surface != e.surface && !lenient) {
          fail(idx, "expected substituted token '" + e.surface + "', found '" +
                        cells[e.pos].surface + "'");
        }
        cells[e.pos].surface = e.original;
        // Behavioral view keeps the synonym: exact recovery of a replaced
        // token is neither possible nor wanted from the denoiser.
        if (!behavioral) cells[e.pos].behavior = e.original;
        break;
      }
      case Edit::Kind::rotate: {
        if (e.start < 0 || e.len < 0 || e.start + e.len > n) {
          if (lenient) break;
          fail(idx, "rotation span out of range");
        }
        std::vector<ReplayCell> restored(e.len);
        for (int i = 0; i < e.len; ++i) {
          restored[(e.h - 1 + i) % e.len] = cells[e.start + i];
        }
        std::copy(restored.begin(), restored.end(), cells.begin() + e.start);
        break;
      }
      case Edit::Kind::permute: {
        const int len = static_cast<int>(e.perm.size());
        if (e.start < 0 || e.start + len > n) {
          if (lenient) break;
          fail(idx, "permutation span out of range");
        }
        std::vector<ReplayCell> restored(len);
        for (int i = 0; i < len; ++i) {
          restored[e.perm[i]] = cells[e.start + i];
        }
        std::copy(restored.begin(), restored.end(), cells.begin() + e.start);
        break;
      }
    }
  }
  return cells;
}

// Re-applies the grounded structural rearrangements for the behavioral view.
// Safe while no length-changing edit precedes them; the shipped inference
// combinations never interleave deletions/insertions with grounded s-noise.
void reapply_pan_structure(const NoisedSample& sample,
                           std::vector<ReplayCell>& cells) {
  for (const Edit& e : sample.edits) {
    if (e.kind == Edit::Kind::del || e.kind == Edit::Kind::ins) break;
    if (!is_pan_structural(e.source_fn)) continue;
    const int n = static_cast<int>(cells.size());
    if (e.kind == Edit::Kind::rotate) {
      if (e.start < 0 || e.start + e.len > n) continue;
      std::vector<ReplayCell> rotated(e.len);
      for (int i = 0; i < e.len; ++i) {
        rotated[i] = cells[e.start + (e.h - 1 + i) % e.len];
      }
      std::copy(rotated.begin(), rotated.end(), cells.begin() + e.start);
    } else if (e.kind == Edit::Kind::permute) {
      const int len = static_cast<int>(e.perm.size());
      if (e.start < 0 || e.start + len > n) continue;
      std::vector<ReplayCell> shuffled(len);
      for (int i = 0; i < len; ++i) shuffled[i] = cells[e.start + e.perm[i]];
      std::copy(shuffled.begin(), shuffled.end(), cells.begin() + e.start);
    }
  }
}

}  // namespace

std::string replay_edits_reverse(const NoisedSample& sample) {
  std::vector<ReplayCell> cells =
      replay_backward(sample, nullptr, false, -1, false);
  std::vector<std::string> surfaces;
  surfaces.reserve(cells.size());
  for (const ReplayCell& c : cells) surfaces.push_back(c.surface);
  return detokenize(surfaces);
}

std::string mock_denoise(const NoisedSample& sample, const MockOptions& options) {
  int skip = -1;
  if (options.lossy && !sample.edits.empty()) {
    Rng rng(options.seed ^ fnv1a64(sample.doc_id) ^
            fnv1a64(sample.combination_id));
    skip = static_cast<int>(rng.uniform(sample.edits.size()));
  }
  const bool behavioral = sample.phase == Phase::inference;
  std::vector<ReplayCell> cells = replay_backward(
      sample, options.lexicon, behavioral, skip, options.lossy);
  if (behavioral) reapply_pan_structure(sample, cells);
  std::vector<std::string> surfaces;
  surfaces.reserve(cells.size());
  for (const ReplayCell& c : cells) {
    surfaces.push_back(behavioral ? c.behavior : c.surface);
  }
  return detokenize(surfaces);
}

// ---------------------------------------------------------------------------
// Stages

PassivePlan resolve_passive_targets(const std::vector<Document>& corpus,
                                    double fraction, uint64_t seed) {
  PassivePlan plan;
  plan.flags = select_passive_targets(corpus, fraction, seed);
  plan.docs = corpus;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!plan.flags[i] || corpus[i].passive_text()) continue;
    std::optional<std::string> fallback = passivize_fallback(corpus[i]);
    if (fallback) {
      const Document& d = corpus[i];
      plan.docs[i] = Document::create(d.id(), d.tokens(), d.sentences(),
                                      d.constituency(), std::move(fallback),
                                      d.text(), d.fallback_annotated());
    } else {
      plan.flags[i] = false;
      plan.warnings.push_back(corpus[i].id() +
                              ": no passive target available, flag dropped");
    }
  }
  return plan;
}

std::vector<NoisedSample> generate_noise(const std::vector<Document>& corpus,
                                         const CombinationRegistry& registry,
                                         const NoiseResources& resources,
                                         const PipelineConfig& config,
                                         Phase phase) {
  const size_t n = corpus.size();
  std::vector<std::optional<NoisedSample>> slots;
  std::vector<std::string> errors(n);

  if (phase == Phase::train) {
    if (registry.for_phase(Phase::train).empty()) {
      throw ConfigError("registry has no train-phase combinations");
    }
    PassivePlan plan = resolve_passive_targets(corpus, config.passive_fraction,
                                               config.seed);
    for (const std::string& w : plan.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
    slots.resize(n);
    parallel_for(n, config.jobs, [&](size_t i) {
      const Document& doc = plan.docs[i];
      try {
        uint64_t doc_seed = document_seed(config.seed, doc.id());
        Rng rng(doc_seed);
        const NoiseCombination& combo = registry.sample(Phase::train, rng);
        uint64_t sample_seed = rng.next();
        slots[i] = apply_combination(doc, combo, sample_seed, resources,
                                     plan.flags[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
  } else {
    auto combos = registry.for_phase(Phase::inference);
    if (combos.empty()) {
      throw ConfigError("registry has no inference-phase combinations");
    }
    slots.resize(n * combos.size());
    parallel_for(n, config.jobs, [&](size_t i) {
      const Document& doc = corpus[i];
      for (size_t c = 0; c < combos.size(); ++c) {
        try {
          uint64_t seed =
              document_seed(config.seed, doc.id()) ^ fnv1a64(combos[c]->id);
          slots[i * combos.size() + c] =
              apply_combination(doc, *combos[c], seed, resources, false);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  }

  size_t failures = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      ++failures;
      std::cerr << "warning: " << corpus[i].id()
                << ": noising failed: " << errors[i] << "\n";
    }
  }
  if (failures > config.failure_budget * static_cast<double>(n)) {
    throw DataError("noising failed for " + std::to_string(failures) + " of " +
                    std::to_string(n) + " documents, over the failure budget");
  }

  std::vector<NoisedSample> out;
  out.reserve(slots.size());
  for (auto& slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  return out;
}

RunReport report_scores(const std::vector<ScoredCandidate>& scored) {
  RunReport report;
  report.scored = scored.size();
  std::map<std::string, std::vector<double>> columns;
  size_t usable = 0;
  for (const ScoredCandidate& c : scored) {
    ++report.per_prompt_scored[c.prompt];
    if (c.scores.unscorable) continue;
    ++usable;
    columns["sigma"].push_back(c.scores.sigma);
    columns["bleu_div"].push_back(c.scores.bleu_div);
    columns["wpd"].push_back(c.scores.wpd);
    columns["delta"].push_back(c.scores.delta);
    columns["nu"].push_back(c.scores.nu);
    columns["pqi"].push_back(c.scores.pqi);
  }
  if (usable == 0) {
    report.empty = true;
    return report;
  }
  for (const auto& [name, values] : columns) {
    MetricStats stats;
    stats.n = values.size();
    double sum = 0;
    for (double v : values) sum += v;
    stats.mean = sum / values.size();
    double var = 0;
    for (double v : values) var += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(var / values.size());
    report.metrics[name] = stats;
  }
  return report;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["schema"] = "parakit/report";
  j["version"] = kSchemaVersion;
  j["empty"] = empty;
  j["counts"] = {{"documents", documents}, {"noised", noised},
                 {"candidates", candidates}, {"scored", scored},
                 {"qf_pass", qf_pass},     {"pcf_pass", pcf_pass},
                 {"selected", selected}};
  nlohmann::json metrics_json;
  for (const auto& [name, stats] : metrics) {
    metrics_json[name] = {{"mean", stats.mean},
                          {"std", stats.stddev},
                          {"n", stats.n}};
  }
  j["metrics"] = std::move(metrics_json);
  j["per_prompt_scored"] = per_prompt_scored;
  j["per_prompt_selected"] = per_prompt_selected;
  return j;
}

Stage2Result stage2_curate(const std::vector<Document>& corpus,
                           const std::vector<CandidateRecord>& candidates,
                           const PipelineConfig& config,
                           SimilarityScorer& scorer) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const Document& d : corpus) by_id[d.id()] = &d;

  const size_t n = candidates.size();
  std::vector<ScoredCandidate> scored(n);
  std::vector<bool> known(n, true);
  parallel_for(n, config.jobs, [&](size_t i) {
    const CandidateRecord& c = candidates[i];
    auto it = by_id.find(c.doc_id);
    ScoredCandidate sc;
    sc.doc_id = c.doc_id;
    sc.text = c.text;
    sc.prompt = c.prompt;
    sc.combination_id = c.combination_id;
    if (it == by_id.end()) {
      known[i] = false;
      sc.scores.unscorable = true;
      sc.scores.error = "unknown document id";
    } else {
      sc.scores =
          score_candidate(*it->second, c.text, scorer, config.curation.weights);
    }
    scored[i] = std::move(sc);
  });

  // Group candidates per document in order of first appearance.
  std::vector<std::string> doc_order;
  std::unordered_map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < n; ++i) {
    if (!known[i]) continue;
    auto [it, inserted] = groups.try_emplace(scored[i].doc_id);
    if (inserted) doc_order.push_back(scored[i].doc_id);
    it->second.push_back(i);
  }

  Stage2Result result;
  for (size_t i = 0; i < n; ++i) {
    if (known[i]) continue;
    result.rejections.push_back({{"doc_id", scored[i].doc_id},
                                 {"candidate_index", i},
                                 {"reason", "unknown-doc"},
                                 {"text", scored[i].text}});
  }

  size_t qf_pass = 0;
  size_t pcf_pass = 0;
  size_t selected_count = 0;
  for (const std::string& doc_id : doc_order) {
    const std::vector<size_t>& indices = groups[doc_id];
    std::vector<ScoredCandidate> local;
    local.reserve(indices.size());
    for (size_t idx : indices) local.push_back(scored[idx]);
    SelectionResult sel =
        curate_document(doc_id, local, config.curation);

    size_t local_qf_fail = 0;
    size_t local_pcf_fail = 0;
    for (const Rejection& r : sel.rejections) {
      bool qf = starts_with(r.reason, "qf:") || r.reason == "unscorable";
      local_qf_fail += qf ? 1 : 0;
      local_pcf_fail += starts_with(r.reason, "pcf:") ? 1 : 0;
      result.rejections.push_back(
          {{"doc_id", doc_id},
           {"candidate_index", indices[r.candidate_index]},
           {"reason", r.reason},
           {"text", local[r.candidate_index].text}});
    }
    qf_pass += local.size() - local_qf_fail;
    pcf_pass += local.size() - local_qf_fail - local_pcf_fail;

    const Document& doc = *by_id[doc_id];
    for (const SelectionStep& step : sel.selected) {
      const ScoredCandidate& c = local[step.candidate_index];
      nlohmann::json rec;
      rec["doc_id"] = doc_id;
      rec["input"] = doc.text();
      rec["prompt"] = c.prompt;
      rec["target"] = c.text;
      rec["scores"] = c.scores.to_json();
      rec["pammr_score"] = step.score;
      result.curated.push_back(std::move(rec));
      ++selected_count;
      ++result.report.per_prompt_selected[c.prompt];
    }
  }

  RunReport metrics_part = report_scores(scored);
  result.report.metrics = std::move(metrics_part.metrics);
  result.report.per_prompt_scored = std::move(metrics_part.per_prompt_scored);
  result.report.empty = metrics_part.empty;
  result.report.documents = corpus.size();
  result.report.candidates = candidates.size();
  result.report.scored = scored.size();
  result.report.qf_pass = qf_pass;
  result.report.pcf_pass = pcf_pass;
  result.report.selected = selected_count;
  result.scored = std::move(scored);
  return result;
}

// ---------------------------------------------------------------------------
// Full loop

std::vector<Document> load_corpus(const std::string& path,
                                  const UnitGazetteer* gazetteer) {
  IngestOptions options;
  options.gazetteer = gazetteer;
  if (path.size() > 7 && path.compare(path.size() - 7, 7, ".conllu") == 0) {
    return read_conllu_file(path, options);
  }
  return read_jsonl_corpus(path, options);
}

RunReport pipeline_run(const std::string& corpus_path,
                       const std::string& registry_path,
                       const std::string& out_dir, PipelineConfig config) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  auto path_in = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  UnitGazetteer gazetteer = UnitGazetteer::defaults();
  std::vector<Document> corpus = load_corpus(corpus_path, &gazetteer);
  if (corpus.empty()) throw DataError("corpus is empty: " + corpus_path);

  NoiseParams defaults = config.noise;
  CombinationRegistry registry =
      registry_path.empty() ? CombinationRegistry::builtin(defaults)
                            : CombinationRegistry::from_file(registry_path,
                                                             defaults);
  SynonymLexicon lexicon = default_lexicon();
  FluencyModel fluency = FluencyModel::train_on_documents(
      corpus, config.fluency_order, config.fluency_smoothing);
  NoiseResources resources{&lexicon, &gazetteer, &fluency};

  // Stage 1: training triples for the denoiser.
  std::vector<NoisedSample> stage1 =
      generate_noise(corpus, registry, resources, config, Phase::train);
  {
    JsonlWriter writer(path_in("stage1.jsonl"), "parakit/stage1");
    for (const NoisedSample& s : stage1) {
      writer.write(s.to_json(config.strip_edits));
    }
  }

  // Inference noising feeds the mock denoiser.
  std::vector<NoisedSample> inference =
      generate_noise(corpus, registry, resources, config, Phase::inference);
  std::vector<CandidateRecord> candidates(inference.size());
  MockOptions mock;
  mock.seed = config.seed;
  mock.lexicon = &lexicon;
  parallel_for(inference.size(), config.jobs, [&](size_t i) {
    const NoisedSample& s = inference[i];
    candidates[i] = {s.doc_id, s.prompt, mock_denoise(s, mock),
                     s.combination_id};
  });
  {
    JsonlWriter writer(path_in("candidates.jsonl"), "parakit/candidates");
    for (const CandidateRecord& c : candidates) {
      writer.write({{"doc_id", c.doc_id},
                    {"prompt", c.prompt},
                    {"text", c.text},
                    {"combination_id", c.combination_id}});
    }
  }

  // Stage 2: score, filter, select.
  std::unique_ptr<SimilarityScorer> scorer;
  if (config.scorer_backend == "http") {
    scorer = ScorerClient::http(config.scorer_url);
  } else if (config.scorer_backend == "subprocess") {
    scorer = ScorerClient::subprocess(config.scorer_command);
  } else {
    scorer = std::make_unique<EmbeddedSimilarity>(EmbeddedSimilarity::fit(corpus));
  }
  Stage2Result stage2 = stage2_curate(corpus, candidates, config, *scorer);
  {
    JsonlWriter writer(path_in("scored.jsonl"), "parakit/scored");
    for (const ScoredCandidate& c : stage2.scored) {
      writer.write({{"doc_id", c.doc_id},
                    {"prompt", c.prompt},
                    {"text", c.text},
                    {"combination_id", c.combination_id},
                    {"scores", c.scores.to_json()}});
    }
  }
  {
    JsonlWriter writer(path_in("stage2.jsonl"), "parakit/stage2");
    for (const nlohmann::json& rec : stage2.curated) writer.write(rec);
  }
  {
    JsonlWriter writer(path_in("rejections.jsonl"), "parakit/rejections");
    for (const nlohmann::json& rec : stage2.rejections) writer.write(rec);
  }

  stage2.report.noised = inference.size();
  stage2.report.documents = corpus.size();
  {
    std::ofstream out(path_in("report.json"));
    nlohmann::json j = stage2.report.to_json();
    j["counts"]["stage1_triples"] = stage1.size();
    out << j.dump(2) << "\n";
  }
  return stage2.report;
}

}  // namespace parakit

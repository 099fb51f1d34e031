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

#include <cstdlib>
#include <iostream>

#include "parakit/curate.hpp"
#include "parakit/jsonl.hpp"
#include "parakit/pipeline.hpp"

#include "CLI11.hpp"

namespace {

using namespace parakit;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitScorer = 4;

struct GlobalArgs {
  uint64_t seed = 3407;
  std::string config_path;
  int jobs = 1;
  bool strict = false;
  std::string lexicon_path;
  std::string units_path;
};

PipelineConfig make_config(const GlobalArgs& g) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) cfg = PipelineConfig::from_file(g.config_path);
  cfg.seed = g.seed;
  cfg.jobs = g.jobs;
  cfg.strict = g.strict;
  return cfg;
}

struct LoadedResources {
  UnitGazetteer gazetteer;
  SynonymLexicon lexicon;
};

LoadedResources load_resources(const GlobalArgs& g) {
  LoadedResources r;
  r.gazetteer = g.units_path.empty() ? UnitGazetteer::defaults()
                                     : UnitGazetteer::from_file(g.units_path);
  r.lexicon = g.lexicon_path.empty() ? default_lexicon()
                                     : SynonymLexicon::from_file(g.lexicon_path);
  return r;
}

std::unique_ptr<SimilarityScorer> make_scorer(
    const std::string& url, const std::string& command,
    const std::vector<Document>& corpus) {
  if (!url.empty()) return ScorerClient::http(url);
  if (!command.empty()) return ScorerClient::subprocess(command);
  if (const char* env = std::getenv("SCORER_URL"); env && *env) {
    return ScorerClient::http(env);
  }
  return std::make_unique<EmbeddedSimilarity>(EmbeddedSimilarity::fit(corpus));
}

std::vector<CandidateRecord> read_candidates(const std::string& path) {
  JsonlFile file = read_jsonl(path);
  std::vector<CandidateRecord> out;
  for (const auto& rec : file.records) {
    CandidateRecord c;
    c.doc_id = rec.at("doc_id").get<std::string>();
    c.prompt = rec.at("prompt").get<std::string>();
    c.text = rec.at("text").get<std::string>();
    if (rec.contains("combination_id")) {
      c.combination_id = rec.at("combination_id").get<std::string>();
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ScoredCandidate> read_scored(const std::string& path) {
  JsonlFile file = read_jsonl(path);
  std::vector<ScoredCandidate> out;
  for (const auto& rec : file.records) {
    ScoredCandidate c;
    c.doc_id = rec.at("doc_id").get<std::string>();
    c.prompt = rec.at("prompt").get<std::string>();
    c.text = rec.at("text").get<std::string>();
    if (rec.contains("combination_id")) {
      c.combination_id = rec.at("combination_id").get<std::string>();
    }
    c.scores = ScoreVector::from_json(rec.at("scores"));
    out.push_back(std::move(c));
  }
  return out;
}

nlohmann::json scored_to_json(const ScoredCandidate& c) {
  return {{"doc_id", c.doc_id},
          {"prompt", c.prompt},
          {"text", c.text},
          {"combination_id", c.combination_id},
          {"scores", c.scores.to_json()}};
}

int run(int argc, char** argv) {
  CLI::App app{"Noised-corpus generation, paraphrase scoring and curation"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  GlobalArgs g;
  std::string schema_check_path;
  app.add_option("--seed", g.seed, "Global random seed")->capture_default_str();
  app.add_option("--config", g.config_path, "Pipeline config file (JSON)");
  app.add_option("--jobs", g.jobs, "Worker threads")->capture_default_str();
  app.add_flag("--strict", g.strict, "Fail fast on data problems");
  app.add_option("--lexicon", g.lexicon_path, "Synonym lexicon TSV");
  app.add_option("--units", g.units_path, "Unit gazetteer file");
  app.add_option("--schema-check", schema_check_path,
                 "Validate a JSONL file against its schema and exit");

  // --- noise ---------------------------------------------------------------
  auto* noise_cmd = app.add_subcommand("noise", "Generate noised samples");
  std::string noise_corpus, noise_registry, noise_out, noise_phase = "train";
  double passive_fraction = -1;
  bool strip_edits = false;
  noise_cmd->add_option("--corpus", noise_corpus, "Corpus JSONL/CoNLL-U")
      ->required();
  noise_cmd->add_option("--registry", noise_registry,
                        "Combination registry (defaults to the built-in bank)");
  noise_cmd->add_option("--out", noise_out, "Output JSONL")->required();
  noise_cmd->add_option("--phase", noise_phase, "train or inference")
      ->check(CLI::IsMember({"train", "inference"}));
  noise_cmd->add_option("--passive-fraction", passive_fraction,
                        "Fraction of documents given passive targets");
  noise_cmd->add_flag("--strip-edits", strip_edits,
                      "Drop edit records (for real training exports)");

  // --- denoise-mock ---------------------------------------------------------
  auto* mock_cmd =
      app.add_subcommand("denoise-mock", "Reconstruct via recorded edits");
  std::string mock_in, mock_out;
  bool lossy = false;
  mock_cmd->add_option("--in", mock_in, "Noised JSONL")->required();
  mock_cmd->add_option("--out", mock_out, "Candidate JSONL")->required();
  mock_cmd->add_flag("--lossy", lossy, "Randomly drop one edit per sample");

  // --- score ----------------------------------------------------------------
  auto* score_cmd = app.add_subcommand("score", "Score candidate paraphrases");
  std::string score_corpus, score_in, score_out, score_weights;
  std::string scorer_url, scorer_cmd_line;
  score_cmd->add_option("--corpus", score_corpus, "Corpus JSONL/CoNLL-U")
      ->required();
  score_cmd->add_option("--in", score_in, "Candidate JSONL")->required();
  score_cmd->add_option("--out", score_out, "Scored JSONL")->required();
  score_cmd->add_option("--weights", score_weights,
                        "Metric weights config (JSON)");
  score_cmd->add_option("--scorer-url", scorer_url,
                        "External similarity scorer endpoint");
  score_cmd->add_option("--scorer-cmd", scorer_cmd_line,
                        "External scorer subprocess command");

  // --- filter ----------------------------------------------------------------
  auto* filter_cmd =
      app.add_subcommand("filter", "Quality and prompt-consistency filtering");
  std::string filter_in, filter_out, filter_rejections;
  filter_cmd->add_option("--in", filter_in, "Scored JSONL")->required();
  filter_cmd->add_option("--out", filter_out, "Passing candidates JSONL")
      ->required();
  filter_cmd->add_option("--emit-rejections", filter_rejections,
                         "Rejection log JSONL");

  // --- select ----------------------------------------------------------------
  auto* select_cmd =
      app.add_subcommand("select", "Greedy relevance-diversity selection");
  std::string select_corpus, select_in, select_out, select_rejections;
  select_cmd->add_option("--corpus", select_corpus, "Corpus JSONL/CoNLL-U")
      ->required();
  select_cmd->add_option("--in", select_in, "Filtered scored JSONL")->required();
  select_cmd->add_option("--out", select_out, "Curated corpus JSONL")
      ->required();
  select_cmd->add_option("--emit-rejections", select_rejections,
                         "Rejection log JSONL");

  // --- pipeline ----------------------------------------------------------------
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "Full loop with the mock denoiser");
  std::string pipe_corpus, pipe_registry, pipe_out_dir;
  pipeline_cmd->add_option("--corpus", pipe_corpus, "Corpus JSONL/CoNLL-U")
      ->required();
  pipeline_cmd->add_option("--registry", pipe_registry,
                           "Combination registry (defaults to built-in)");
  pipeline_cmd->add_option("--out-dir", pipe_out_dir, "Output directory")
      ->required();

  // --- report ----------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "Aggregate scored candidates");
  std::string report_in, report_out;
  report_cmd->add_option("--in", report_in, "Scored JSONL")->required();
  report_cmd->add_option("--out", report_out, "Report JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (!schema_check_path.empty()) {
    schema_check(schema_check_path);
    std::cout << schema_check_path << ": ok\n";
    return kExitOk;
  }

  if (noise_cmd->parsed()) {
    PipelineConfig cfg = make_config(g);
    if (passive_fraction >= 0) cfg.passive_fraction = passive_fraction;
    cfg.strip_edits = strip_edits;
    LoadedResources res = load_resources(g);
    std::vector<Document> corpus = load_corpus(noise_corpus, &res.gazetteer);
    CombinationRegistry registry =
        noise_registry.empty()
            ? CombinationRegistry::builtin(cfg.noise)
            : CombinationRegistry::from_file(noise_registry, cfg.noise);
    FluencyModel fluency = FluencyModel::train_on_documents(
        corpus, cfg.fluency_order, cfg.fluency_smoothing);
    NoiseResources resources{&res.lexicon, &res.gazetteer, &fluency};
    std::vector<NoisedSample> samples = generate_noise(
        corpus, registry, resources, cfg, parse_phase(noise_phase));
    JsonlWriter writer(noise_out, "parakit/stage1");
    for (const NoisedSample& s : samples) writer.write(s.to_json(strip_edits));
    std::cout << "wrote " << samples.size() << " samples to " << noise_out
              << "\n";
    return kExitOk;
  }

  if (mock_cmd->parsed()) {
    LoadedResources res = load_resources(g);
    JsonlFile file = read_jsonl(mock_in);
    MockOptions options;
    options.lossy = lossy;
    options.seed = g.seed;
    options.lexicon = &res.lexicon;
    JsonlWriter writer(mock_out, "parakit/candidates");
    for (const auto& rec : file.records) {
      NoisedSample sample = NoisedSample::from_json(rec);
      writer.write({{"doc_id", sample.doc_id},
                    {"prompt", sample.prompt},
                    {"text", mock_denoise(sample, options)},
                    {"combination_id", sample.combination_id}});
    }
    std::cout << "wrote " << file.records.size() << " candidates to "
              << mock_out << "\n";
    return kExitOk;
  }

  if (score_cmd->parsed()) {
    PipelineConfig cfg = make_config(g);
    if (!score_weights.empty()) {
      std::ifstream in(score_weights);
      if (!in) throw ConfigError("cannot open weights file: " + score_weights);
      nlohmann::json j;
      in >> j;
      cfg.curation.weights = MetricWeights::from_json(j);
    }
    LoadedResources res = load_resources(g);
    std::vector<Document> corpus = load_corpus(score_corpus, &res.gazetteer);
    std::vector<CandidateRecord> candidates = read_candidates(score_in);
    auto scorer = make_scorer(scorer_url, scorer_cmd_line, corpus);
    Stage2Result result = stage2_curate(corpus, candidates, cfg, *scorer);
    JsonlWriter writer(score_out, "parakit/scored");
    for (const ScoredCandidate& c : result.scored) {
      writer.write(scored_to_json(c));
    }
    std::cout << "scored " << result.scored.size() << " candidates to "
              << score_out << "\n";
    return kExitOk;
  }

  if (filter_cmd->parsed()) {
    PipelineConfig cfg = make_config(g);
    std::vector<ScoredCandidate> scored = read_scored(filter_in);
    JsonlWriter writer(filter_out, "parakit/scored");
    std::unique_ptr<JsonlWriter> rejections;
    if (!filter_rejections.empty()) {
      rejections =
          std::make_unique<JsonlWriter>(filter_rejections, "parakit/rejections");
    }
    size_t passed = 0;
    for (size_t i = 0; i < scored.size(); ++i) {
      const ScoredCandidate& c = scored[i];
      FilterDecision d = qf_filter(c.scores, cfg.curation);
      if (d.pass) {
        d = pcf_filter(c.scores, parse_prompt_categories(c.prompt),
                       cfg.curation);
      }
      if (d.pass) {
        writer.write(scored_to_json(c));
        ++passed;
      } else if (rejections) {
        rejections->write({{"doc_id", c.doc_id},
                           {"candidate_index", i},
                           {"reason", d.reason},
                           {"text", c.text}});
      }
    }
    std::cout << passed << " of " << scored.size() << " candidates passed\n";
    return kExitOk;
  }

  if (select_cmd->parsed()) {
    PipelineConfig cfg = make_config(g);
    LoadedResources res = load_resources(g);
    std::vector<Document> corpus = load_corpus(select_corpus, &res.gazetteer);
    std::unordered_map<std::string, const Document*> by_id;
    for (const Document& d : corpus) by_id[d.id()] = &d;
    std::vector<ScoredCandidate> scored = read_scored(select_in);

    std::vector<std::string> doc_order;
    std::map<std::string, std::vector<ScoredCandidate>> groups;
    for (const ScoredCandidate& c : scored) {
      if (!groups.count(c.doc_id)) doc_order.push_back(c.doc_id);
      groups[c.doc_id].push_back(c);
    }
    JsonlWriter writer(select_out, "parakit/stage2");
    std::unique_ptr<JsonlWriter> rejections;
    if (!select_rejections.empty()) {
      rejections =
          std::make_unique<JsonlWriter>(select_rejections, "parakit/rejections");
    }
    size_t selected = 0;
    for (const std::string& doc_id : doc_order) {
      auto it = by_id.find(doc_id);
      if (it == by_id.end()) {
        if (rejections) {
          rejections->write(
              {{"doc_id", doc_id}, {"reason", "unknown-doc"}});
        }
        continue;
      }
      const auto& local = groups[doc_id];
      SelectionResult sel = pammr_select(
          doc_id, local, cfg.curation,
          text_pairwise_diversity(local, cfg.curation.weights));
      for (const SelectionStep& step : sel.selected) {
        const ScoredCandidate& c = local[step.candidate_index];
        writer.write({{"doc_id", doc_id},
                      {"input", it->second->text()},
                      {"prompt", c.prompt},
                      {"target", c.text},
                      {"scores", c.scores.to_json()},
                      {"pammr_score", step.score}});
        ++selected;
      }
    }
    std::cout << "selected " << selected << " pairs to " << select_out << "\n";
    return kExitOk;
  }

  if (pipeline_cmd->parsed()) {
    PipelineConfig cfg = make_config(g);
    RunReport report = pipeline_run(pipe_corpus, pipe_registry, pipe_out_dir,
                                    cfg);
    std::cout << report.to_json()["counts"].dump() << "\n";
    return kExitOk;
  }

  if (report_cmd->parsed()) {
    std::vector<ScoredCandidate> scored = read_scored(report_in);
    RunReport report = report_scores(scored);
    nlohmann::json j = report.to_json();
    if (report_out.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream out(report_out);
      if (!out) throw ConfigError("cannot write report: " + report_out);
      out << j.dump(2) << "\n";
    }
    return kExitOk;
  }

  std::cout << app.help();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const parakit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const parakit::ScorerError& e) {
    std::cerr << "scorer error: " << e.what() << " (attempts: " << e.attempts
              << ", retryable: " << (e.retryable ? "yes" : "no") << ")\n";
    return kExitScorer;
  } catch (const parakit::ReconstructionError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const parakit::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

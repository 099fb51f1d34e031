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

// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line;
// the binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "parakit/curate.hpp"
#include "parakit/jsonl.hpp"
#include "parakit/metrics.hpp"
#include "parakit/noise.hpp"
#include "parakit/pipeline.hpp"
#include "parakit/scorers.hpp"

#include "../helpers.hpp"

using namespace parakit;
using namespace parakit::testing;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
            << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!pass) ++g_failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// --------------------------------------------------------------------------
// 1. Diversity recomposition from the transcribed reference tables.
void criterion_1() {
  std::ifstream in(fixture_path("fixtures/diversity_tables.json"));
  nlohmann::json tables;
  in >> tables;
  MetricWeights w;
  w.v1 = tables["weights"]["v1"].get<double>();
  w.v2 = tables["weights"]["v2"].get<double>();
  int checked = 0;
  double worst = 0;
  std::string worst_row;
  bool pass = true;
  for (const auto& row : tables["rows"]) {
    if (row.value("exclude", false)) continue;
    double recomposed =
        diversity(row["bleu_div"].get<double>(), row["wpd"].get<double>(), w);
    double err = std::abs(recomposed - row["d"].get<double>());
    if (err > worst) {
      worst = err;
      worst_row = row["method"].get<std::string>() + "/" +
                  row["dataset"].get<std::string>();
    }
    pass &= err <= 0.015;
    ++checked;
  }
  std::ostringstream detail;
  detail << checked << " rows, worst |err| " << worst << " at " << worst_row;
  report(1, "diversity recomposition within 0.015", pass && checked == 31,
         detail.str());
}

// --------------------------------------------------------------------------
// 2. PQI spot values.
void criterion_2() {
  MetricWeights w;  // 0.5 / 0.25 / 0.25
  double v = pqi(0.98, 0.29, 1.00, w);
  bool pass = std::abs(v - 0.726) <= 0.01 && std::abs(v - 0.72) <= 0.01 &&
              pqi(1.0, 1.0, 1.0, w) == 1.0;
  std::ostringstream detail;
  detail << "pqi(0.98, 0.29, 1.00) = " << v;
  report(2, "PQI consistency spot-check", pass, detail.str());
}

// --------------------------------------------------------------------------
// 3. Numeracy against an independent brute-force oracle.
double numeracy_brute_force(const std::vector<std::string>& a,
                            std::vector<std::string> b, double p) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const size_t size_b = b.size();
  size_t shared = 0;
  for (const std::string& x : a) {
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == x) {
        b.erase(b.begin() + j);
        ++shared;
        break;
      }
    }
  }
  return std::pow(static_cast<double>(shared) /
                      static_cast<double>(std::max(a.size(), size_b)),
                  p);
}

void criterion_3() {
  Rng rng(3407);
  bool pass = true;
  for (int trial = 0; trial < 10000 && pass; ++trial) {
    Document a = random_doc(rng, "na" + std::to_string(trial));
    Document b = random_doc(rng, "nb" + std::to_string(trial));
    double got = numeracy(a, b, 3.0);
    double want = numeracy_brute_force(multiset_of(a), multiset_of(b), 3.0);
    pass &= got == want;
  }
  double hand = numeracy({"5", "100", "3000"}, {"5", "100"}, 3.0);
  bool hand_ok = std::abs(hand - 8.0 / 27.0) < 1e-10;
  std::ostringstream detail;
  detail << "10000 random pairs exact, hand case err "
         << std::abs(hand - 8.0 / 27.0);
  report(3, "numeracy oracle equivalence", pass && hand_ok, detail.str());
}

// --------------------------------------------------------------------------
// 4. Noise invariants over 1000 random documents x all 20 combinations.
bool parse_mask_token(const std::string& s, std::string* tag, int* index) {
  size_t i = 0;
  while (i < s.size() && std::isupper(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0 || i == s.size()) return false;
  for (size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  *tag = s.substr(0, i);
  *index = std::stoi(s.substr(i));
  return true;
}

void criterion_4() {
  auto fixture = read_jsonl_corpus(fixture_path("fixtures/awp50.jsonl"), {});
  FluencyModel fluency = FluencyModel::train_on_documents(fixture, 3, 0.1);
  UnitGazetteer units = UnitGazetteer::defaults();
  NoiseResources res{&default_lexicon(), &units, &fluency};
  CombinationRegistry registry = CombinationRegistry::builtin({});
  MetricWeights w;

  Rng rng(3407);
  size_t cases = 0, numeric_ok = 0, perm_ok = 0, perm_cases = 0, mask_ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Document doc = random_doc(rng, "inv" + std::to_string(trial));
    for (const NoiseCombination& combo : registry.combinations()) {
      NoisedSample s = apply_combination(doc, combo, rng.next(), res);
      ++cases;
      // numeric multiset preserved: nu(original, noised) == 1
      if (numeracy_texts(doc.text(), s.noised_text, w.p) == 1.0) ++numeric_ok;

      // templatization: dense per-tag indices, chain-consistent masks
      bool masks_fine = true;
      std::map<std::string, std::set<int>> indices;
      for (const std::string& t : tokenize_text(s.noised_text)) {
        std::string tag;
        int index = 0;
        if (parse_mask_token(t, &tag, &index)) indices[tag].insert(index);
      }
      for (const auto& [tag, set] : indices) {
        masks_fine &= *set.begin() == 1 &&
                      *set.rbegin() == static_cast<int>(set.size());
      }
      std::map<int, std::set<std::string>> chain_masks;
      for (const Edit& e : s.edits) {
        if (e.kind != Edit::Kind::mask || e.src < 0) continue;
        const auto& coref = doc.tokens()[e.src].coref_id;
        if (coref) chain_masks[*coref].insert(e.surface);
      }
      for (const auto& [chain, masks] : chain_masks) {
        masks_fine &= masks.size() == 1;
      }
      if (masks_fine) ++mask_ok;
    }

    // permutation-family functions preserve the token multiset exactly
    for (NoiseFn fn : {NoiseFn::sent_permute_t, NoiseFn::rand_shuffle_t,
                       NoiseFn::complete_shuffle_t, NoiseFn::sent_permute_i,
                       NoiseFn::phrase_shuffle_i}) {
      NoiseCombination single;
      single.id = "single";
      single.phase = is_pan_structural(fn) ? Phase::inference : Phase::train;
      single.functions.push_back({fn, NoiseParams{}});
      single.category.insert(noise_fn_category(fn));
      NoisedSample s = apply_combination(doc, single, rng.next(), res);
      ++perm_cases;
      if (sorted_copy(tokenize_text(s.noised_text)) ==
          sorted_copy(doc.surfaces())) {
        ++perm_ok;
      }
    }
  }
  bool pass = numeric_ok == cases && perm_ok == perm_cases &&
              perm_cases == 5000 && mask_ok == cases;
  std::ostringstream detail;
  detail << cases << " cases; numeric " << numeric_ok << "/" << cases
         << ", permutation " << perm_ok << "/" << perm_cases << ", masks "
         << mask_ok << "/" << cases;
  report(4, "noise invariant suite", pass, detail.str());
}

// --------------------------------------------------------------------------
// 5. Mock-denoiser round trip over 1000 documents x 10 training combinations.
void criterion_5() {
  auto start = std::chrono::steady_clock::now();
  auto fixture = read_jsonl_corpus(fixture_path("fixtures/awp50.jsonl"), {});
  FluencyModel fluency = FluencyModel::train_on_documents(fixture, 3, 0.1);
  UnitGazetteer units = UnitGazetteer::defaults();
  NoiseResources res{&default_lexicon(), &units, &fluency};
  CombinationRegistry registry = CombinationRegistry::builtin({});
  auto train = registry.for_phase(Phase::train);

  Rng rng(3407);
  size_t cases = 0, exact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Document doc = random_doc(rng, "rt" + std::to_string(trial));
    for (const NoiseCombination* combo : train) {
      NoisedSample s = apply_combination(doc, *combo, rng.next(), res);
      ++cases;
      if (mock_denoise(s) == doc.text()) ++exact;
    }
  }
  double secs = elapsed_seconds(start);
  bool pass = exact == cases && secs < 30.0;
  std::ostringstream detail;
  detail << exact << "/" << cases << " exact in " << secs << "s";
  report(5, "mock-denoiser round trip", pass, detail.str());
}

// --------------------------------------------------------------------------
// 6. PAMMR equals an independent reference greedy.
std::vector<size_t> reference_greedy(const std::vector<double>& relevance,
                                     const std::vector<std::vector<double>>& pd,
                                     double alpha, int k) {
  std::vector<size_t> selected;
  std::vector<bool> used(relevance.size(), false);
  for (int step = 0; step < k; ++step) {
    double best = -1e300;
    int best_i = -1;
    for (size_t i = 0; i < relevance.size(); ++i) {
      if (used[i]) continue;
      double div = 0;
      if (!selected.empty()) {
        div = 1e300;
        for (size_t s : selected) div = std::min(div, pd[i][s]);
      }
      double score = alpha * relevance[i] + (1 - alpha) * div;
      if (score > best) {
        best = score;
        best_i = static_cast<int>(i);
      }
    }
    if (best_i < 0) break;
    used[best_i] = true;
    selected.push_back(static_cast<size_t>(best_i));
  }
  return selected;
}

void criterion_6() {
  Rng rng(3407);
  size_t trials = 10000, agree = 0;
  for (size_t trial = 0; trial < trials; ++trial) {
    size_t n = 1 + rng.uniform(8);
    CurationConfig cfg;
    cfg.k = 1 + static_cast<int>(rng.uniform(3));
    std::vector<ScoredCandidate> cs(n);
    std::vector<double> relevance(n);
    for (size_t i = 0; i < n; ++i) {
      cs[i].doc_id = "q";
      cs[i].text = "c" + std::to_string(i);
      cs[i].prompt = "paraphrase:";
      cs[i].scores.sigma = rng.uniform(5) / 4.0;
      cs[i].scores.delta = rng.uniform(5) / 4.0;
      cs[i].scores.nu = rng.uniform(5) / 4.0;
      relevance[i] = cfg.weights.w_sigma * cs[i].scores.sigma +
                     cfg.weights.w_delta * cs[i].scores.delta +
                     cfg.weights.w_nu * cs[i].scores.nu;
    }
    std::vector<std::vector<double>> pd(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        pd[i][j] = pd[j][i] = rng.uniform(4) / 3.0;
      }
    }
    SelectionResult got = pammr_select(
        "q", cs, cfg, [&](size_t i, size_t j) { return pd[i][j]; });
    std::vector<size_t> want = reference_greedy(relevance, pd, cfg.alpha,
                                                cfg.k);
    bool same = got.selected.size() == want.size();
    for (size_t i = 0; same && i < want.size(); ++i) {
      same = got.selected[i].candidate_index == want[i];
    }
    if (same) ++agree;
  }

  // the hand-evaluated three-candidate fixture
  CurationConfig cfg;
  std::vector<ScoredCandidate> cs(3);
  for (auto& c : cs) {
    c.doc_id = "q";
    c.prompt = "paraphrase:";
  }
  cs[0].scores.sigma = 0.95;
  cs[0].scores.delta = 0.30;
  cs[0].scores.nu = 1.0;
  cs[1].scores = cs[0].scores;
  cs[2].scores.sigma = 0.92;
  cs[2].scores.delta = 0.28;
  cs[2].scores.nu = 1.0;
  SelectionResult fixture = pammr_select(
      "q", cs, cfg, [](size_t i, size_t j) {
        return std::minmax(i, j) == std::minmax<size_t>(0, 1) ? 0.0 : 0.5;
      });
  bool fixture_ok = fixture.selected.size() == 2 &&
                    fixture.selected[0].candidate_index == 0 &&
                    fixture.selected[1].candidate_index == 2 &&
                    std::abs(fixture.selected[0].score - 0.52) < 1e-9 &&
                    std::abs(fixture.selected[1].score - 0.682) < 1e-9;
  std::ostringstream detail;
  detail << agree << "/" << trials << " instances, fixture "
         << (fixture_ok ? "ok" : "wrong");
  report(6, "PAMMR oracle equivalence", agree == trials && fixture_ok,
         detail.str());
}

// --------------------------------------------------------------------------
// 7. Filter properties: monotonicity and boundary semantics.
void criterion_7() {
  Rng rng(3407);
  bool monotone = true;
  auto cats = parse_prompt_categories("paraphrase replace shuffle fix :");
  const int per_threshold = 1000;
  for (int which = 0; which < 6; ++which) {
    for (int trial = 0; trial < per_threshold; ++trial) {
      ScoreVector s;
      s.sigma = rng.real();
      s.delta = rng.real();
      s.nu = rng.real();
      s.bleu_div = rng.real();
      s.wpd = rng.real();
      CurationConfig lo;
      lo.tau_sigma = rng.real();
      lo.tau_delta = rng.real();
      lo.tau_nu = rng.real();
      lo.tau_s = rng.real();
      lo.tau_c = rng.real();
      lo.tau_sc = rng.real();
      CurationConfig hi = lo;
      double bump = rng.real() * 0.2;
      switch (which) {
        case 0: hi.tau_sigma = std::min(1.0, lo.tau_sigma + bump); break;
        case 1: hi.tau_delta = std::min(1.0, lo.tau_delta + bump); break;
        case 2: hi.tau_nu = std::min(1.0, lo.tau_nu + bump); break;
        case 3: hi.tau_s = std::min(1.0, lo.tau_s + bump); break;
        case 4: hi.tau_c = std::min(1.0, lo.tau_c + bump); break;
        case 5: hi.tau_sc = std::min(1.0, lo.tau_sc + bump); break;
      }
      bool lo_pass = qf_filter(s, lo).pass && pcf_filter(s, cats, lo).pass;
      bool hi_pass = qf_filter(s, hi).pass && pcf_filter(s, cats, hi).pass;
      if (hi_pass && !lo_pass) monotone = false;
    }
  }

  // boundary semantics: strict QF, non-strict PCF
  CurationConfig cfg;
  ScoreVector at_sigma;
  at_sigma.sigma = cfg.tau_sigma;  // exactly at the threshold
  at_sigma.delta = 0.5;
  at_sigma.nu = 1.0;
  bool strict_qf = !qf_filter(at_sigma, cfg).pass &&
                   qf_filter(at_sigma, cfg).reason == "qf:sigma";
  ScoreVector at_s;
  at_s.wpd = cfg.tau_s;  // exactly at the threshold
  bool lenient_pcf =
      pcf_filter(at_s, parse_prompt_categories("paraphrase shuffle :"), cfg)
          .pass;
  report(7, "filter monotonicity and boundary semantics",
         monotone && strict_qf && lenient_pcf,
         std::string("monotone ") + (monotone ? "yes" : "no") +
             ", sigma==tau rejected " + (strict_qf ? "yes" : "no") +
             ", wpd==tau passes " + (lenient_pcf ? "yes" : "no"));
}

// --------------------------------------------------------------------------
// 8. End-to-end determinism through the CLI.
void criterion_8() {
  std::string base = "/tmp/parakit_acceptance";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  std::string corpus = fixture_path("fixtures/awp50.jsonl");
  std::string cli = PARAKIT_CLI_PATH;

  auto run = [&](const std::string& args) {
    std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  bool ran = run("pipeline --corpus " + corpus + " --out-dir " + base +
                 "/j1 --seed 3407 --jobs 1");
  ran &= run("pipeline --corpus " + corpus + " --out-dir " + base +
             "/j4 --seed 3407 --jobs 4");
  ran &= run("pipeline --corpus " + corpus + " --out-dir " + base +
             "/seeded --seed 99 --jobs 4");

  bool identical = true;
  for (const char* name : {"stage1.jsonl", "candidates.jsonl", "scored.jsonl",
                           "stage2.jsonl", "rejections.jsonl", "report.json"}) {
    identical &= slurp(base + "/j1/" + std::string(name)) ==
                 slurp(base + "/j4/" + std::string(name));
  }
  bool seed_changes = slurp(base + "/j1/stage1.jsonl") !=
                      slurp(base + "/seeded/stage1.jsonl");
  report(8, "determinism across worker counts and seed sensitivity",
         ran && identical && seed_changes,
         std::string("jobs-identical ") + (identical ? "yes" : "no") +
             ", seed-sensitive " + (seed_changes ? "yes" : "no"));
}

// --------------------------------------------------------------------------
// 9. Closed-loop desk-scale run on the bundled 50-problem corpus.
void criterion_9() {
  auto start = std::chrono::steady_clock::now();
  std::string dir = "/tmp/parakit_acceptance/closed_loop";
  std::filesystem::remove_all(dir);
  PipelineConfig cfg;
  cfg.seed = 3407;
  RunReport rep =
      pipeline_run(fixture_path("fixtures/awp50.jsonl"), "", dir, cfg);
  double secs = elapsed_seconds(start);

  bool schemas_ok = true;
  for (const char* name : {"stage1.jsonl", "candidates.jsonl", "scored.jsonl",
                           "stage2.jsonl", "rejections.jsonl"}) {
    try {
      schema_check(dir + "/" + name);
    } catch (const std::exception&) {
      schemas_ok = false;
    }
  }

  JsonlFile stage2 = read_jsonl(dir + "/stage2.jsonl");
  std::set<std::string> docs_with_pair;
  bool scores_ok = true;
  for (const auto& rec : stage2.records) {
    docs_with_pair.insert(rec.at("doc_id").get<std::string>());
    scores_ok &= rec.at("scores").at("nu").get<double>() == 1.0;
    scores_ok &= rec.at("scores").at("delta").get<double>() > 0.15;
  }
  double coverage = static_cast<double>(docs_with_pair.size()) / 50.0;
  bool pass = secs < 10.0 && schemas_ok && coverage >= 0.6 && scores_ok &&
              rep.selected == stage2.records.size();
  std::ostringstream detail;
  detail << secs << "s, coverage " << docs_with_pair.size()
         << "/50, selected " << stage2.records.size();
  report(9, "closed-loop desk-scale run", pass, detail.str());
}

// --------------------------------------------------------------------------
// 10. Fluency stand-in sanity.
void criterion_10() {
  auto fixture = read_jsonl_corpus(fixture_path("fixtures/awp50.jsonl"), {});
  FluencyModel tri = FluencyModel::train_on_documents(fixture, 3, 0.1);
  FluencyModel uni = FluencyModel::train_on_documents(fixture, 1, 0.1);

  Rng rng(3407);
  size_t sentences = 0, preferred = 0;
  bool unigram_invariant = true;
  for (const Document& doc : fixture) {
    for (const SentenceSpan& span : doc.sentences()) {
      std::vector<std::string> tokens;
      for (int i = span.begin; i < span.end; ++i) {
        tokens.push_back(doc.tokens()[i].surface);
      }
      if (tokens.size() < 4) continue;
      // shuffle everything except the terminal punctuation
      size_t interior = tokens.size();
      const std::string& last = tokens.back();
      if (last == "." || last == "?" || last == "!") --interior;
      std::vector<std::string> shuffled = tokens;
      for (int attempt = 0; attempt < 20; ++attempt) {
        std::vector<std::string> head(shuffled.begin(),
                                      shuffled.begin() + interior);
        rng.shuffle(head);
        std::copy(head.begin(), head.end(), shuffled.begin());
        if (shuffled != tokens) break;
      }
      if (shuffled == tokens) continue;
      ++sentences;
      if (tri.fluency(tokens) > tri.fluency(shuffled)) ++preferred;
      double a = uni.fluency(tokens);
      double b = uni.fluency(shuffled);
      unigram_invariant &= std::abs(a - b) <= 1e-12 * std::max(a, b);
    }
  }
  double rate =
      sentences ? static_cast<double>(preferred) / sentences : 0.0;
  bool pass = rate >= 0.95 && unigram_invariant && sentences >= 100;
  std::ostringstream detail;
  detail << preferred << "/" << sentences << " prefer the original ("
         << rate * 100 << "%), unigram invariant "
         << (unigram_invariant ? "yes" : "no");
  report(10, "fluency stand-in sanity", pass, detail.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures) {
    std::cout << g_failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

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

#include "parakit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "parakit/common.hpp"

namespace parakit {

namespace {

std::vector<std::string> tokenize_text(const std::string& text) {
  static const UnitGazetteer units = UnitGazetteer::defaults();
  Tokenizer tokenizer(&units);
  std::vector<std::string> out;
  for (const RawToken& t : tokenizer.tokenize(text)) out.push_back(t.surface);
  return out;
}

std::map<std::vector<std::string>, int> ngram_counts(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::vector<std::string>, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

void MetricWeights::validate() const {
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
  if (!near(v1 + v2, 1.0)) throw ConfigError("diversity weights must sum to 1");
  if (!near(w_sigma + w_delta + w_nu, 1.0)) {
    throw ConfigError("PQI weights must sum to 1");
  }
  if (p < 1.0) throw ConfigError("numeracy exponent must be >= 1");
  if (epsilon <= 0.0) throw ConfigError("PQI epsilon must be > 0");
}

nlohmann::json MetricWeights::to_json() const {
  return {{"v1", v1},         {"v2", v2},   {"w_sigma", w_sigma},
          {"w_delta", w_delta}, {"w_nu", w_nu}, {"p", p},
          {"epsilon", epsilon}};
}

MetricWeights MetricWeights::from_json(const nlohmann::json& j) {
  MetricWeights w;
  if (j.contains("v1")) w.v1 = j.at("v1").get<double>();
  if (j.contains("v2")) w.v2 = j.at("v2").get<double>();
  if (j.contains("w_sigma")) w.w_sigma = j.at("w_sigma").get<double>();
  if (j.contains("w_delta")) w.w_delta = j.at("w_delta").get<double>();
  if (j.contains("w_nu")) w.w_nu = j.at("w_nu").get<double>();
  if (j.contains("p")) w.p = j.at("p").get<double>();
  if (j.contains("epsilon")) w.epsilon = j.at("epsilon").get<double>();
  w.validate();
  return w;
}

nlohmann::json ScoreVector::to_json() const {
  nlohmann::json j = {{"sigma", sigma}, {"bleu_div", bleu_div}, {"wpd", wpd},
                      {"delta", delta}, {"nu", nu},             {"pqi", pqi}};
  if (unscorable) {
    j["unscorable"] = true;
    j["error"] = error;
  }
  return j;
}

ScoreVector ScoreVector::from_json(const nlohmann::json& j) {
  ScoreVector s;
  s.sigma = j.at("sigma").get<double>();
  s.bleu_div = j.at("bleu_div").get<double>();
  s.wpd = j.at("wpd").get<double>();
  s.delta = j.at("delta").get<double>();
  s.nu = j.at("nu").get<double>();
  s.pqi = j.at("pqi").get<double>();
  if (j.contains("unscorable")) s.unscorable = j.at("unscorable").get<bool>();
  if (j.contains("error")) s.error = j.at("error").get<std::string>();
  return s;
}

double bleu(const std::vector<std::string>& x, const std::vector<std::string>& y,
            int max_order) {
  if (x.empty() || y.empty()) throw DataError("BLEU of empty text");
  double log_sum = 0;
  int orders = 0;
  int zero_orders = 0;
  for (int n = 1; n <= max_order; ++n) {
    const long total = static_cast<long>(y.size()) - n + 1;
    if (total <= 0) continue;
    auto ref = ngram_counts(x, n);
    auto cand = ngram_counts(y, n);
    long matched = 0;
    for (const auto& [gram, count] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    double precision;
    if (matched > 0) {
      precision = static_cast<double>(matched) / static_cast<double>(total);
    } else {
      // Exponentially decaying floor: k-th zero-match order gets 10^-2k.
      ++zero_orders;
      precision = std::pow(10.0, -2.0 * zero_orders);
    }
    log_sum += std::log(precision);
    ++orders;
  }
  if (orders == 0) return 0.0;
  const double c = static_cast<double>(y.size());
  const double r = static_cast<double>(x.size());
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * std::exp(log_sum / orders);
}

double bleu_diversity(const std::vector<std::string>& x,
                      const std::vector<std::string>& y, int max_order) {
  return std::clamp(1.0 - bleu(x, y, max_order), 0.0, 1.0);
}

double bleu_diversity(const std::string& x, const std::string& y,
                      int max_order) {
  return bleu_diversity(tokenize_text(x), tokenize_text(y), max_order);
}

WpdResult wpd_detailed(const std::vector<std::string>& x,
                       const std::vector<std::string>& y) {
  if (x.empty() || y.empty()) throw DataError("WPD of empty text");
  WpdResult result;
  if (x.size() == 1 || y.size() == 1) return result;

  std::unordered_map<std::string, std::vector<size_t>> positions_y;
  for (size_t j = 0; j < y.size(); ++j) positions_y[y[j]].push_back(j);

  std::unordered_map<std::string, size_t> occurrence;
  double sum = 0;
  size_t aligned = 0;
  const double span_x = static_cast<double>(x.size() - 1);
  const double span_y = static_cast<double>(y.size() - 1);
  for (size_t i = 0; i < x.size(); ++i) {
    size_t k = occurrence[x[i]]++;
    auto it = positions_y.find(x[i]);
    if (it == positions_y.end() || k >= it->second.size()) continue;
    size_t j = it->second[k];
    sum += std::abs(static_cast<double>(i) / span_x -
                    static_cast<double>(j) / span_y);
    ++aligned;
  }
  if (aligned == 0) {
    result.empty_alignment = true;
    return result;
  }
  result.value = std::clamp(sum / static_cast<double>(aligned), 0.0, 1.0);
  return result;
}

double wpd(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  return wpd_detailed(x, y).value;
}

double wpd(const std::string& x, const std::string& y) {
  return wpd(tokenize_text(x), tokenize_text(y));
}

double numeracy(const std::vector<std::string>& x,
                const std::vector<std::string>& y, double p) {
  if (x.empty() && y.empty()) return 1.0;
  if (x.empty() || y.empty()) return 0.0;
  std::vector<std::string> multiset_x = x;
  std::vector<std::string> multiset_y = y;
  std::sort(multiset_x.begin(), multiset_x.end());
  std::sort(multiset_y.begin(), multiset_y.end());
  size_t i = 0, j = 0, shared = 0;
  while (i < multiset_x.size() && j < multiset_y.size()) {
    if (multiset_x[i] == multiset_y[j]) {
      ++shared;
      ++i;
      ++j;
    } else if (multiset_x[i] < multiset_y[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  double ratio = static_cast<double>(shared) /
                 static_cast<double>(std::max(multiset_x.size(),
                                              multiset_y.size()));
  return std::pow(ratio, p);
}

double numeracy(const Document& x, const Document& y, double p) {
  return numeracy(number_multiset(x.numbers()), number_multiset(y.numbers()), p);
}

double numeracy_texts(const std::string& x, const std::string& y, double p) {
  auto nums = [](const std::string& text) {
    std::vector<std::string> out;
    std::vector<std::string> toks = tokenize_text(text);
    for (int i = 0; i < static_cast<int>(toks.size()); ++i) {
      for (const NumericEntity& e : extract_numbers_from_token(toks[i], i)) {
        out.push_back(e.value.str());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return numeracy(nums(x), nums(y), p);
}

double diversity(double bleu_div, double wpd_value, const MetricWeights& w) {
  return w.v1 * bleu_div + w.v2 * wpd_value;
}

double diversity(const std::string& x, const std::string& y,
                 const MetricWeights& w) {
  auto tx = tokenize_text(x);
  auto ty = tokenize_text(y);
  return diversity(bleu_diversity(tx, ty), wpd(tx, ty), w);
}

double pqi(double sigma, double delta, double nu, const MetricWeights& w) {
  auto ln = [&](double v) { return std::log(std::max(v, w.epsilon)); };
  return std::exp(w.w_sigma * ln(sigma) + w.w_delta * ln(delta) +
                  w.w_nu * ln(nu));
}

ScoreVector score_candidate(const Document& x, const std::string& y,
                            SimilarityScorer& scorer, const MetricWeights& w) {
  ScoreVector s;
  try {
    std::vector<std::string> tx = tokenize_text(x.text());
    std::vector<std::string> ty = tokenize_text(y);
    if (ty.empty()) throw DataError("empty candidate text");
    s.sigma = scorer.similarity(x.text(), y);
    s.bleu_div = bleu_diversity(tx, ty);
    s.wpd = wpd(tx, ty);
    s.delta = diversity(s.bleu_div, s.wpd, w);
    std::vector<std::string> ny;
    for (int i = 0; i < static_cast<int>(ty.size()); ++i) {
      for (const NumericEntity& e : extract_numbers_from_token(ty[i], i)) {
        ny.push_back(e.value.str());
      }
    }
    std::sort(ny.begin(), ny.end());
    s.nu = numeracy(number_multiset(x.numbers()), ny, w.p);
    s.pqi = pqi(s.sigma, s.delta, s.nu, w);
  } catch (const std::exception& e) {
    s = ScoreVector{};
    s.unscorable = true;
    s.error = e.what();
  }
  return s;
}

}  // namespace parakit

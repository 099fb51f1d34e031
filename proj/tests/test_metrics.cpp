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

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace parakit;
using namespace parakit::testing;

namespace {

std::vector<std::string> toks(const std::string& text) {
  return split_ws(text);
}

// Brute-force multiset intersection, kept deliberately separate from the
// two-pointer implementation it checks.
double numeracy_oracle(const std::vector<std::string>& a,
                       std::vector<std::string> b, double p) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const size_t size_b = b.size();
  size_t shared = 0;
  for (const std::string& x : a) {
    auto it = std::find(b.begin(), b.end(), x);
    if (it != b.end()) {
      b.erase(it);
      ++shared;
    }
  }
  return std::pow(static_cast<double>(shared) /
                      static_cast<double>(std::max(a.size(), size_b)),
                  p);
}

}  // namespace

TEST_CASE("bleu diversity of identity is zero") {
  CHECK(bleu_diversity(toks("the cat sat"), toks("the cat sat")) ==
        doctest::Approx(0.0));
}

TEST_CASE("bleu matches the hand-counted order-2 example") {
  // x = "the cat sat", y = "the cat ran": p1 = 2/3, p2 = 1/2, BP = 1
  double expected = 1.0 - std::sqrt((2.0 / 3.0) * (1.0 / 2.0));
  CHECK(bleu_diversity(toks("the cat sat"), toks("the cat ran"), 2) ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(expected == doctest::Approx(0.4226).epsilon(1e-3));
}

TEST_CASE("bleu matches a hand-counted order-4 example with one zero order") {
  // x = "a b c d e", y = "a b c e d":
  // p1 = 5/5, p2 = 2/4, p3 = 1/3, p4 = 0/2 -> smoothed floor 1e-2.
  double log_sum = std::log(1.0) + std::log(0.5) + std::log(1.0 / 3.0) +
                   std::log(1e-2);
  double expected = 1.0 - std::exp(log_sum / 4.0);
  CHECK(bleu_diversity(toks("a b c d e"), toks("a b c e d"), 4) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("brevity penalty applies when the candidate is shorter") {
  // x = "a b c d", y = "a b": p1 = 1, BP = exp(1 - 4/2)
  CHECK(bleu(toks("a b c d"), toks("a b"), 1) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // no penalty when the candidate is longer
  CHECK(bleu(toks("a b"), toks("a b c"), 1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("token-disjoint texts have near-total bleu diversity") {
  CHECK(bleu_diversity(toks("one two three four five six"),
                       toks("alpha beta gamma delta epsilon zeta")) >= 0.99);
  CHECK(bleu_diversity(toks("a b"), toks("x y")) >= 0.99);
}

TEST_CASE("bleu rejects empty input") {
  CHECK_THROWS_AS(bleu(toks(""), toks("a")), DataError);
  CHECK_THROWS_AS(bleu_diversity(std::string(""), std::string("a")), DataError);
}

TEST_CASE("wpd of identity is zero and full swap is one") {
  CHECK(wpd(toks("a b"), toks("a b")) == doctest::Approx(0.0));
  CHECK(wpd(toks("a b"), toks("b a")) == doctest::Approx(1.0));
}

TEST_CASE("wpd aligns repeated tokens occurrence by occurrence") {
  // x = "a b a", y = "a a b": pairs (0,0), (1,2), (2,1)
  double expected = (0.0 + 0.5 + 0.5) / 3.0;
  CHECK(wpd(toks("a b a"), toks("a a b")) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("wpd edge conventions") {
  CHECK(wpd(toks("only"), toks("only")) == 0.0);          // single token
  CHECK(wpd(toks("a b"), toks("c")) == 0.0);              // single token in y
  WpdResult r = wpd_detailed(toks("a b"), toks("x y"));
  CHECK(r.value == 0.0);
  CHECK(r.empty_alignment);                               // no shared tokens
  WpdResult ok = wpd_detailed(toks("a b"), toks("b a"));
  CHECK(!ok.empty_alignment);
  CHECK_THROWS_AS(wpd_detailed(toks(""), toks("a")), DataError);
}

TEST_CASE("wpd is symmetric") {
  Rng rng(3);
  std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> x, y;
    size_t nx = 2 + rng.uniform(6), ny = 2 + rng.uniform(6);
    for (size_t i = 0; i < nx; ++i) x.push_back(pool[rng.uniform(pool.size())]);
    for (size_t i = 0; i < ny; ++i) y.push_back(pool[rng.uniform(pool.size())]);
    CHECK(wpd_detailed(x, y).value ==
          doctest::Approx(wpd_detailed(y, x).value).epsilon(1e-12));
  }
}

TEST_CASE("numeracy matches the closed-form example to ten decimals") {
  double v = numeracy({"100", "3000", "5"}, {"100", "5"}, 3.0);
  CHECK(std::abs(v - 8.0 / 27.0) < 1e-10);
}

TEST_CASE("numeracy conventions and symmetry") {
  CHECK(numeracy({"5", "100", "3000"}, {"100", "3000", "5"}, 3.0) == 1.0);
  CHECK(numeracy(std::vector<std::string>{}, std::vector<std::string>{}, 3.0) == 1.0);
  CHECK(numeracy({"5"}, std::vector<std::string>{}, 3.0) == 0.0);
  CHECK(numeracy(std::vector<std::string>{}, {"5"}, 3.0) == 0.0);
  Rng rng(17);
  std::vector<std::string> pool = {"1", "2", "3", "5", "100"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> a, b;
    for (size_t i = rng.uniform(5); i > 0; --i)
      a.push_back(pool[rng.uniform(pool.size())]);
    for (size_t i = rng.uniform(5); i > 0; --i)
      b.push_back(pool[rng.uniform(pool.size())]);
    auto sa = sorted_copy(a), sb = sorted_copy(b);
    CHECK(numeracy(sa, sb, 3.0) == doctest::Approx(numeracy(sb, sa, 3.0)));
    // nu == 1 iff the multisets are equal (both nonempty case included)
    if (!sa.empty() || !sb.empty()) {
      CHECK((numeracy(sa, sb, 3.0) == 1.0) == (sa == sb));
    }
  }
}

TEST_CASE("numeracy is robust to formatting-only changes") {
  CHECK(numeracy_texts("he made $3,000 profit", "he made 3000 profit", 3.0) ==
        1.0);
  CHECK(numeracy_texts("a 25% cut", "a 25 percent cut", 3.0) == 1.0);
}

TEST_CASE("diversity reproduces the published mixes") {
  MetricWeights w;
  CHECK(diversity(0.40, 0.13, w) == doctest::Approx(0.292).epsilon(1e-12));
  CHECK(diversity(0.32, 0.07, w) == doctest::Approx(0.220).epsilon(1e-12));
  CHECK(diversity(0.0, 0.0, w) == 0.0);
  CHECK(diversity(std::string("same text here"), std::string("same text here"),
                  w) == doctest::Approx(0.0));
}

TEST_CASE("pqi identities and the reported spot value") {
  MetricWeights w;
  CHECK(pqi(1.0, 1.0, 1.0, w) == doctest::Approx(1.0).epsilon(1e-12));
  double v = pqi(0.98, 0.29, 1.00, w);
  CHECK(v == doctest::Approx(0.7264).epsilon(2e-3));
  CHECK(std::abs(v - 0.72) < 0.01);
}

TEST_CASE("pqi properties: fixed point, monotonicity, bounds, clamp") {
  MetricWeights w;
  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = w.epsilon + rng.real() * (1.0 - w.epsilon);
    CHECK(pqi(a, a, a, w) == doctest::Approx(a).epsilon(1e-9));

    double s = rng.real(), d = rng.real(), n = rng.real();
    double base = pqi(s, d, n, w);
    double lo = std::min({s, d, n});
    double hi = std::max({s, d, n});
    if (lo >= w.epsilon) {
      CHECK(base >= lo - 1e-12);
      CHECK(base <= hi + 1e-12);
    }
    double bump = rng.real() * (1.0 - s);
    CHECK(pqi(s + bump, d, n, w) >= base - 1e-12);
    CHECK(pqi(s, std::min(1.0, d + bump), n, w) >= base - 1e-12);
    // epsilon only matters at exact zeros
    if (s >= w.epsilon && d >= w.epsilon && n >= w.epsilon) {
      MetricWeights w2 = w;
      w2.epsilon = 1e-9;
      CHECK(pqi(s, d, n, w2) == doctest::Approx(base).epsilon(1e-12));
    }
  }
  CHECK(pqi(0.5, 0.0, 0.9, w) <= std::pow(w.epsilon, 0.25) + 1e-12);
}

TEST_CASE("numeracy agrees with the brute-force oracle on random pairs") {
  Rng rng(99);
  std::vector<std::string> pool = {"1", "2", "3", "5", "100", "0.5"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> a, b;
    for (size_t i = rng.uniform(6); i > 0; --i)
      a.push_back(pool[rng.uniform(pool.size())]);
    for (size_t i = rng.uniform(6); i > 0; --i)
      b.push_back(pool[rng.uniform(pool.size())]);
    auto sa = sorted_copy(a), sb = sorted_copy(b);
    CHECK(numeracy(sa, sb, 3.0) ==
          doctest::Approx(numeracy_oracle(sa, sb, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("metric weights validate") {
  MetricWeights w;
  CHECK_NOTHROW(w.validate());
  MetricWeights bad = w;
  bad.v1 = 0.7;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = w;
  bad.w_sigma = 0.6;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = w;
  bad.p = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = w;
  bad.epsilon = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("score_candidate on an exact copy") {
  Document doc = example_doc();
  EmbeddedSimilarity scorer;
  MetricWeights w;
  ScoreVector s = score_candidate(doc, doc.text(), scorer, w);
  CHECK(s.sigma == doctest::Approx(1.0));
  CHECK(s.bleu_div == doctest::Approx(0.0));
  CHECK(s.wpd == doctest::Approx(0.0));
  CHECK(s.delta == doctest::Approx(0.0));
  CHECK(s.nu == doctest::Approx(1.0));
  CHECK(s.pqi == doctest::Approx(pqi(1.0, w.epsilon, 1.0, w)).epsilon(1e-9));
  CHECK(!s.unscorable);
}

TEST_CASE("score_candidate numeracy tracks dropped numbers") {
  std::vector<Token> tokens = {
      tok("He", Pos::PRON),     tok("makes", Pos::VERB),
      tok("a", Pos::DET),       tok("25%", Pos::NUM),
      tok("profit", Pos::NOUN), tok("at", Pos::ADP),
      tok("$100", Pos::NUM),    tok("and", Pos::CCONJ),
      tok("$3,000", Pos::NUM),  tok("total", Pos::ADJ),
      tok(".", Pos::PUNCT),
  };
  Document doc = Document::create("t3", tokens, {{0, 11}});
  EmbeddedSimilarity scorer;
  MetricWeights w;
  // all three numbers preserved
  ScoreVector keep = score_candidate(
      doc, "He keeps a 25% profit at $100 and $3,000 total.", scorer, w);
  CHECK(keep.nu == doctest::Approx(1.0));
  // one of three missing
  ScoreVector drop = score_candidate(
      doc, "He makes a 25% profit at $100 total.", scorer, w);
  CHECK(drop.nu == doctest::Approx(std::pow(2.0 / 3.0, 3.0)).epsilon(1e-9));
}

TEST_CASE("score_candidate marks empty candidates unscorable") {
  Document doc = example_doc();
  EmbeddedSimilarity scorer;
  MetricWeights w;
  ScoreVector s = score_candidate(doc, "", scorer, w);
  CHECK(s.unscorable);
  CHECK(!s.error.empty());
}

TEST_CASE("score vector json round trip") {
  ScoreVector s;
  s.sigma = 0.9;
  s.bleu_div = 0.4;
  s.wpd = 0.1;
  s.delta = 0.28;
  s.nu = 1.0;
  s.pqi = 0.7;
  ScoreVector back = ScoreVector::from_json(s.to_json());
  CHECK(back.sigma == s.sigma);
  CHECK(back.pqi == s.pqi);
  CHECK(!back.unscorable);
}

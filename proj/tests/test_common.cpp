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

#include <algorithm>
#include <set>

#include "parakit/common.hpp"
#include "parakit/decimal.hpp"

#include "doctest.h"

using namespace parakit;

TEST_CASE("rng is deterministic and bounded") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    size_t x = a.uniform(17);
    CHECK(x == b.uniform(17));
    CHECK(x < 17);
  }
  Rng c(43);
  bool differs = false;
  Rng a2(42);
  for (int i = 0; i < 50; ++i) differs |= a2.next() != c.next();
  CHECK(differs);
}

TEST_CASE("rng shuffle is a permutation") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> v(1 + rng.uniform(20));
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    std::vector<int> shuffled = v;
    rng.shuffle(shuffled);
    std::sort(shuffled.begin(), shuffled.end());
    CHECK(shuffled == v);
  }
}

TEST_CASE("fnv1a is stable") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == fnv1a64("a"));
  CHECK(fnv1a64("a") != fnv1a64("b"));
}

TEST_CASE("string helpers") {
  CHECK(lowercase("Steve Rode") == "steve rode");
  CHECK(split_ws("  a  b\tc ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(join({"a", "b"}, " ") == "a b");
  CHECK(starts_with("paraphrase passive:", "paraphrase"));
  CHECK(!starts_with("para", "paraphrase"));
}

TEST_CASE("decimal parse and canonical form") {
  CHECK(Decimal::parse("3000")->str() == "3000");
  CHECK(Decimal::parse("1.25")->str() == "1.25");
  CHECK(Decimal::parse("1.250")->str() == "1.25");
  CHECK(Decimal::parse("0.5")->str() == "0.5");
  CHECK(Decimal::parse(".5")->str() == "0.5");
  CHECK(Decimal::parse("007")->str() == "7");
  CHECK(Decimal::parse("0")->str() == "0");
  CHECK(Decimal::parse("0.0")->str() == "0");
  CHECK(!Decimal::parse("1.2.3").has_value());
  CHECK(!Decimal::parse("abc").has_value());
  CHECK(!Decimal::parse("").has_value());
}

TEST_CASE("decimal equality and order are exact") {
  CHECK(*Decimal::parse("3000") == *Decimal::parse("3000.0"));
  CHECK(*Decimal::parse("1.25") == *Decimal::parse("1.2500"));
  CHECK(*Decimal::parse("2") < *Decimal::parse("10"));
  CHECK(*Decimal::parse("0.9") < *Decimal::parse("1"));
  CHECK(*Decimal::parse("0.09") < *Decimal::parse("0.1"));
  CHECK(*Decimal::parse("123456789123456789") <
        *Decimal::parse("123456789123456790"));
}

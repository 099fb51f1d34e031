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

#include "parakit/tree.hpp"

#include "parakit/common.hpp"

#include "doctest.h"

using namespace parakit;

namespace {

const char* kExample =
    "(S (NP (NNP Steve)) (VP (VBD rode) (NP (PRP$ his) (NN car)) "
    "(PP (IN for) (NP (CD 5) (NNS miles))) "
    "(PP (IN on) (NP (DT the) (NN way) (NN home)))) (. .))";

std::vector<std::string> apply_order(const ParseTree& tree,
                                     const std::vector<int>& order) {
  std::vector<std::string> leaves = tree.leaves();
  std::vector<std::string> out;
  for (int i : order) out.push_back(leaves[i]);
  return out;
}

}  // namespace

TEST_CASE("parse counts leaves and preserves order") {
  ParseTree tree = ParseTree::parse(kExample);
  CHECK(tree.leaf_count() == 12);
  CHECK(tree.leaves() ==
        std::vector<std::string>{"Steve", "rode", "his", "car", "for", "5",
                                 "miles", "on", "the", "way", "home", "."});
  std::vector<int> order = tree.leaf_order();
  for (int i = 0; i < 12; ++i) CHECK(order[i] == i);
  CHECK(bracketed_leaf_count(kExample) == 12);
}

TEST_CASE("parse accepts an anonymous wrapper") {
  ParseTree tree = ParseTree::parse("( (S (NN cats) (VBD ran)) )");
  CHECK(tree.leaf_count() == 2);
  CHECK(tree.leaves() == std::vector<std::string>{"cats", "ran"});
}

TEST_CASE("malformed trees are rejected") {
  CHECK_THROWS_AS(ParseTree::parse(""), DataError);
  CHECK_THROWS_AS(ParseTree::parse("cats ran"), DataError);
  CHECK_THROWS_AS(ParseTree::parse("(S (NN cats)"), DataError);
  CHECK_THROWS_AS(ParseTree::parse("(S (NN cats))) "), DataError);
  CHECK_THROWS_AS(ParseTree::parse("(S (NN cats)) trailing"), DataError);
}

TEST_CASE("to_string round-trips through parse") {
  ParseTree tree = ParseTree::parse(kExample);
  ParseTree again = ParseTree::parse(tree.to_string());
  CHECK(again.leaves() == tree.leaves());
  CHECK(again.to_string() == tree.to_string());
}

TEST_CASE("label matching respects functional annotations") {
  ParseTree tree = ParseTree::parse("(S (PP-TMP (IN on)) (NP (NN way)))");
  CHECK(tree.find_nodes("PP").size() == 1);
  ParseTree tricky = ParseTree::parse("(S (PPX (IN on)) (NP (NN way)))");
  CHECK(tricky.find_nodes("PP").empty());
}

TEST_CASE("fronting a PP moves its leaves leftmost within the parent") {
  ParseTree tree = ParseTree::parse(kExample);
  std::vector<int> pps = tree.find_nodes("PP");
  REQUIRE(pps.size() == 2);
  // Front "for 5 miles" inside the VP.
  std::vector<int> order = tree.with_child_fronted(pps[0]);
  CHECK(apply_order(tree, order) ==
        std::vector<std::string>{"Steve", "for", "5", "miles", "rode", "his",
                                 "car", "on", "the", "way", "home", "."});
  // Fronting does not mutate the original tree.
  std::vector<int> ident = tree.leaf_order();
  for (int i = 0; i < 12; ++i) CHECK(ident[i] == i);
}

TEST_CASE("conjunct swap around a CC node") {
  ParseTree tree = ParseTree::parse(
      "(S (NP (NP (NNS cats)) (CC and) (NP (NNS dogs))) (VP (VBD ran)))");
  std::vector<int> ccs = tree.find_nodes("CC");
  REQUIRE(ccs.size() == 1);
  std::vector<int> order = tree.with_conjuncts_swapped(ccs[0]);
  CHECK(apply_order(tree, order) ==
        std::vector<std::string>{"dogs", "and", "cats", "ran"});
}

TEST_CASE("disjoint subtree swap and relatedness") {
  ParseTree tree = ParseTree::parse(kExample);
  std::vector<int> nps = tree.find_nodes("NP");
  std::vector<int> vps = tree.find_nodes("VP");
  REQUIRE(!nps.empty());
  REQUIRE(!vps.empty());
  // The subject NP and the VP are disjoint siblings.
  int subject = nps[0];
  int vp = vps[0];
  CHECK(!tree.related(subject, vp));
  std::vector<int> order = tree.with_subtrees_swapped(subject, vp);
  std::vector<std::string> swapped = apply_order(tree, order);
  CHECK(swapped.front() == "rode");
  CHECK(swapped[swapped.size() - 2] == "Steve");
  // A nested NP is related to the VP that contains it; swap is a no-op.
  int nested = -1;
  for (int np : nps) {
    if (tree.related(np, vp) && np != subject) nested = np;
  }
  REQUIRE(nested != -1);
  std::vector<int> unchanged = tree.with_subtrees_swapped(nested, vp);
  for (int i = 0; i < 12; ++i) CHECK(unchanged[i] == i);
}

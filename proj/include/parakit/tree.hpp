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

#include <string>
#include <string_view>
#include <vector>

namespace parakit {

// Bracketed constituency tree over one sentence. Nodes live in an arena so
// trees copy cheaply for candidate generation.
class ParseTree {
 public:
  struct Node {
    std::string label;        // empty for terminal leaves
    std::string surface;      // set for terminal leaves only
    int parent = -1;
    std::vector<int> children;
    int leaf_index = -1;      // in-order position among leaves
  };

  // Throws DataError on malformed input. Accepts an optional outer wrapper
  // "( (S ...) )" as emitted by some parsers.
  static ParseTree parse(std::string_view bracketed);

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }
  int leaf_count() const { return leaf_count_; }

  std::vector<std::string> leaves() const;
  // Current leaf order as in-order leaf indices (identity for a fresh parse,
  // a permutation after child reordering).
  std::vector<int> leaf_order() const;

  bool label_is(int node, std::string_view prefix) const;
  // True when `a` is an ancestor of `b` or vice versa.
  bool related(int a, int b) const;

  // Transformations used by phrase shuffling. Each returns the resulting
  // leaf order of a modified copy; the tree itself is untouched.

  // Move a PP (or other) node to be the leftmost child of its parent.
  std::vector<int> with_child_fronted(int node) const;
  // Swap the siblings immediately before and after a conjunction node.
  std::vector<int> with_conjuncts_swapped(int cc_node) const;
  // Swap two disjoint subtrees.
  std::vector<int> with_subtrees_swapped(int a, int b) const;

  // Candidate node finders.
  std::vector<int> find_nodes(std::string_view label_prefix) const;

  std::string to_string() const;

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
  int leaf_count_ = 0;
};

// Convenience: leaf count of a bracketed string, for ingestion validation.
int bracketed_leaf_count(std::string_view bracketed);

}  // namespace parakit

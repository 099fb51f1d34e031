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

#include <algorithm>
#include <cctype>

#include "parakit/common.hpp"

namespace parakit {

namespace {

struct Lexer {
  std::string_view s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return s[i];
  }
  char take() {
    skip_ws();
    return s[i++];
  }
  std::string atom() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && s[i] != '(' && s[i] != ')' &&
           !std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    return std::string(s.substr(start, i - start));
  }
};

}  // namespace

ParseTree ParseTree::parse(std::string_view bracketed) {
  ParseTree tree;
  Lexer lex{bracketed};

  // Recursive-descent over an explicit stack of open nodes.
  std::vector<int> stack;
  auto add_node = [&](const std::string& label, const std::string& surface) {
    Node n;
    n.label = label;
    n.surface = surface;
    n.parent = stack.empty() ? -1 : stack.back();
    int id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back(std::move(n));
    if (!stack.empty()) tree.nodes_[stack.back()].children.push_back(id);
    return id;
  };

  if (lex.eof() || lex.peek() != '(') {
    throw DataError("constituency tree must start with '('");
  }
  int roots = 0;
  while (!lex.eof()) {
    char c = lex.peek();
    if (c == '(') {
      lex.take();
      if (lex.eof()) throw DataError("unterminated constituency tree");
      std::string label = lex.peek() == '(' ? std::string() : lex.atom();
      int id = add_node(label, "");
      if (id == 0) ++roots;
      stack.push_back(id);
    } else if (c == ')') {
      lex.take();
      if (stack.empty()) throw DataError("unbalanced ')' in constituency tree");
      stack.pop_back();
      if (stack.empty() && !lex.eof() && lex.peek() != '(') {
        throw DataError("trailing content after constituency tree");
      }
    } else {
      std::string word = lex.atom();
      if (stack.empty()) throw DataError("token outside constituency tree");
      add_node("", word);
    }
  }
  if (!stack.empty()) throw DataError("unbalanced '(' in constituency tree");
  if (tree.nodes_.empty() || roots != 1) {
    throw DataError("constituency tree must have exactly one root");
  }
  tree.root_ = 0;

  // Unwrap an anonymous single-child root: "( (S ...) )".
  if (tree.nodes_[0].label.empty() && tree.nodes_[0].surface.empty() &&
      tree.nodes_[0].children.size() == 1) {
    tree.root_ = tree.nodes_[0].children[0];
    tree.nodes_[tree.root_].parent = -1;
  }

  // Number leaves in order.
  int next = 0;
  std::vector<int> dfs{tree.root_};
  // Iterative in-order: push children right-to-left.
  while (!dfs.empty()) {
    int id = dfs.back();
    dfs.pop_back();
    Node& n = tree.nodes_[id];
    if (n.children.empty()) {
      if (n.label.empty() && n.surface.empty()) {
        throw DataError("empty node in constituency tree");
      }
      if (!n.surface.empty()) n.leaf_index = next++;
      // A childless labeled node ("(NP )") carries no leaf; tolerated.
    } else {
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        dfs.push_back(*it);
      }
    }
  }
  tree.leaf_count_ = next;
  return tree;
}

std::vector<std::string> ParseTree::leaves() const {
  std::vector<std::string> out(leaf_count_);
  std::vector<int> order = leaf_order();
  // leaf_order yields original leaf indices in current order; a fresh parse
  // is the identity so surface lookup by scan is fine here.
  std::vector<std::string> by_index(leaf_count_);
  for (const Node& n : nodes_) {
    if (n.leaf_index >= 0) by_index[n.leaf_index] = n.surface;
  }
  for (int i = 0; i < leaf_count_; ++i) out[i] = by_index[order[i]];
  return out;
}

std::vector<int> ParseTree::leaf_order() const {
  std::vector<int> out;
  out.reserve(leaf_count_);
  std::vector<int> dfs{root_};
  while (!dfs.empty()) {
    int id = dfs.back();
    dfs.pop_back();
    const Node& n = nodes_[id];
    if (n.leaf_index >= 0) out.push_back(n.leaf_index);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
      dfs.push_back(*it);
    }
  }
  return out;
}

bool ParseTree::label_is(int node, std::string_view prefix) const {
  const std::string& label = nodes_[node].label;
  if (label.size() < prefix.size()) return false;
  if (label.compare(0, prefix.size(), prefix) != 0) return false;
  // "PP" matches "PP" and "PP-TMP" but not "PPX".
  return label.size() == prefix.size() || label[prefix.size()] == '-' ||
         label[prefix.size()] == '=';
}

bool ParseTree::related(int a, int b) const {
  for (int x = a; x != -1; x = nodes_[x].parent) {
    if (x == b) return true;
  }
  for (int x = b; x != -1; x = nodes_[x].parent) {
    if (x == a) return true;
  }
  return false;
}

std::vector<int> ParseTree::with_child_fronted(int node) const {
  ParseTree copy = *this;
  int parent = copy.nodes_[node].parent;
  if (parent < 0) return leaf_order();
  auto& siblings = copy.nodes_[parent].children;
  auto it = std::find(siblings.begin(), siblings.end(), node);
  if (it == siblings.begin() || it == siblings.end()) return leaf_order();
  siblings.erase(it);
  siblings.insert(siblings.begin(), node);
  return copy.leaf_order();
}

std::vector<int> ParseTree::with_conjuncts_swapped(int cc_node) const {
  ParseTree copy = *this;
  int parent = copy.nodes_[cc_node].parent;
  if (parent < 0) return leaf_order();
  auto& siblings = copy.nodes_[parent].children;
  auto it = std::find(siblings.begin(), siblings.end(), cc_node);
  if (it == siblings.end() || it == siblings.begin() ||
      it + 1 == siblings.end()) {
    return leaf_order();
  }
  std::iter_swap(it - 1, it + 1);
  return copy.leaf_order();
}

std::vector<int> ParseTree::with_subtrees_swapped(int a, int b) const {
  if (related(a, b)) return leaf_order();
  ParseTree copy = *this;
  int pa = copy.nodes_[a].parent;
  int pb = copy.nodes_[b].parent;
  if (pa < 0 || pb < 0) return leaf_order();
  auto& ca = copy.nodes_[pa].children;
  auto& cb = copy.nodes_[pb].children;
  auto ia = std::find(ca.begin(), ca.end(), a);
  auto ib = std::find(cb.begin(), cb.end(), b);
  *ia = b;
  *ib = a;
  copy.nodes_[a].parent = pb;
  copy.nodes_[b].parent = pa;
  return copy.leaf_order();
}

std::vector<int> ParseTree::find_nodes(std::string_view label_prefix) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    if (!nodes_[i].label.empty() && label_is(i, label_prefix)) out.push_back(i);
  }
  return out;
}

std::string ParseTree::to_string() const {
  std::string out;
  struct Frame {
    int id;
    bool close;
  };
  std::vector<Frame> stack{{root_, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const Node& n = nodes_[f.id];
    if (f.close) {
      out += ")";
      continue;
    }
    if (n.children.empty() && !n.surface.empty()) {
      if (!out.empty() && out.back() != '(') out += " ";
      out += n.surface;
      continue;
    }
    if (!out.empty() && out.back() != '(') out += " ";
    out += "(" + n.label;
    stack.push_back({f.id, true});
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
      stack.push_back({*it, false});
    }
  }
  return out;
}

int bracketed_leaf_count(std::string_view bracketed) {
  return ParseTree::parse(bracketed).leaf_count();
}

}  // namespace parakit

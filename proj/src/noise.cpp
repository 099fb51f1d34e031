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

#include "parakit/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "parakit/tree.hpp"

namespace parakit {

namespace {

struct FnInfo {
  NoiseFn fn;
  const char* name;
  NoiseCategory category;
};

constexpr std::array<FnInfo, 11> kFnTable = {{
    {NoiseFn::sent_permute_t, "sent_permute_t", NoiseCategory::s},
    {NoiseFn::rand_shuffle_t, "rand_shuffle_t", NoiseCategory::s},
    {NoiseFn::complete_shuffle_t, "complete_shuffle_t", NoiseCategory::s},
    {NoiseFn::templatize_t, "templatize_t", NoiseCategory::c},
    {NoiseFn::synonym_sub_t, "synonym_sub_t", NoiseCategory::c},
    {NoiseFn::rand_delete, "rand_delete", NoiseCategory::cs},
    {NoiseFn::word_insert, "word_insert", NoiseCategory::cs},
    {NoiseFn::sent_permute_i, "sent_permute_i", NoiseCategory::s},
    {NoiseFn::phrase_shuffle_i, "phrase_shuffle_i", NoiseCategory::s},
    {NoiseFn::templatize_obj_i, "templatize_obj_i", NoiseCategory::c},
    {NoiseFn::synonym_sub_obj_i, "synonym_sub_obj_i", NoiseCategory::c},
}};

bool is_terminal_punct(const std::string& s) {
  return s == "." || s == "?" || s == "!";
}

bool is_object_label(const std::string& label) {
  return label == "obj" || label == "dobj" || label == "iobj" ||
         label == "pobj" || label == "obl" || starts_with(label, "obl:");
}

const UnitGazetteer& gazetteer_or_default(const NoiseResources& res) {
  static const UnitGazetteer defaults = UnitGazetteer::defaults();
  return res.gazetteer ? *res.gazetteer : defaults;
}

// Selection shared by templatization and substitution: one Bernoulli draw per
// eligible position; with object priority the same number of picks is routed
// to object positions first. With no object positions this is exactly the
// training behavior, draw for draw.
std::vector<int> select_positions(const std::vector<int>& eligible,
                                  const Document& doc, const WorkDoc& w,
                                  double rate, bool object_priority, Rng& rng) {
  std::vector<int> hits;
  for (int pos : eligible) {
    if (rng.bernoulli(rate)) hits.push_back(pos);
  }
  if (!object_priority) return hits;

  std::vector<int> objects;
  std::vector<int> others;
  for (int pos : eligible) {
    const auto& cell = w.cells[pos];
    if (cell.src >= 0 && is_object_label(doc.tokens()[cell.src].dep_label)) {
      objects.push_back(pos);
    } else {
      others.push_back(pos);
    }
  }
  if (objects.empty()) return hits;

  size_t budget = hits.size();
  rng.shuffle(objects);
  std::vector<int> selected(objects.begin(),
                            objects.begin() + std::min(budget, objects.size()));
  if (budget > objects.size()) {
    rng.shuffle(others);
    size_t extra = std::min(budget - objects.size(), others.size());
    selected.insert(selected.end(), others.begin(), others.begin() + extra);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

void shift_spans_for_insert(std::vector<SentenceSpan>& spans, int pos) {
  bool placed = false;
  for (size_t i = 0; i < spans.size(); ++i) {
    SentenceSpan& s = spans[i];
    if (placed) {
      ++s.begin;
      ++s.end;
      continue;
    }
    bool last = i + 1 == spans.size();
    if (pos < s.end || (last && pos >= s.end)) {
      ++s.end;
      placed = true;
    }
  }
}

void shift_spans_for_delete(std::vector<SentenceSpan>& spans, int pos) {
  bool hit = false;
  for (SentenceSpan& s : spans) {
    if (hit) {
      --s.begin;
      --s.end;
      continue;
    }
    if (pos < s.end) {
      --s.end;
      hit = true;
    }
  }
}

// Interior of a sentence: the span minus a pinned terminal punctuation token.
std::pair<int, int> interior(const WorkDoc& w, const SentenceSpan& s) {
  int end = s.end;
  if (end > s.begin && is_terminal_punct(w.cells[end - 1].surface)) --end;
  return {s.begin, end};
}

std::vector<std::string> sentence_surfaces(const WorkDoc& w,
                                           const SentenceSpan& s) {
  std::vector<std::string> out;
  for (int i = s.begin; i < s.end; ++i) out.push_back(w.cells[i].surface);
  return out;
}

void apply_rotation(WorkDoc& w, int start, int len, int h) {
  std::vector<WorkDoc::Cell> rotated;
  rotated.reserve(len);
  for (int i = 0; i < len; ++i) {
    rotated.push_back(w.cells[start + (h - 1 + i) % len]);
  }
  std::copy(rotated.begin(), rotated.end(), w.cells.begin() + start);
}

void apply_permutation(WorkDoc& w, int start, const std::vector<int>& perm) {
  std::vector<WorkDoc::Cell> shuffled;
  shuffled.reserve(perm.size());
  for (int src : perm) shuffled.push_back(w.cells[start + src]);
  std::copy(shuffled.begin(), shuffled.end(), w.cells.begin() + start);
}

// Rotation at the most fluent candidate index; shared by the preposition-
// grounded rotation and the treeless fallback of phrase shuffling.
void fluent_rotate_sentence(WorkDoc& w, const Document& doc,
                            const NoiseResources& res, size_t span_idx,
                            NoiseFn attributed, std::vector<Edit>& edits,
                            std::vector<std::string>& flags) {
  const SentenceSpan& span = w.spans[span_idx];
  auto [begin, end] = interior(w, span);
  int n = end - begin;
  std::string flag_id =
      std::string("identity:") + noise_fn_name(attributed);
  if (n < 2) {
    flags.push_back(flag_id);
    return;
  }
  std::vector<int> hs;
  for (int i = begin; i < end; ++i) {
    const auto& cell = w.cells[i];
    if (cell.src >= 0 && doc.tokens()[cell.src].pos == Pos::ADP) {
      hs.push_back(i - begin + 1);
    }
  }
  if (hs.empty()) {
    for (int h = 2; h <= n; ++h) hs.push_back(h);
  }
  if (!res.fluency) throw ConfigError("grounded s-noise requires a fluency model");

  double best = -1;
  int best_h = 1;
  bool has_punct = end < span.end;
  for (int h : hs) {
    std::vector<std::string> candidate;
    candidate.reserve(span.end - span.begin);
    for (int i = 0; i < n; ++i) {
      candidate.push_back(w.cells[begin + (h - 1 + i) % n].surface);
    }
    if (has_punct) candidate.push_back(w.cells[span.end - 1].surface);
    double fl = res.fluency->fluency(candidate);
    if (fl > best) {
      best = fl;
      best_h = h;
    }
  }
  if (best_h == 1) {
    flags.push_back(flag_id);
    return;
  }
  apply_rotation(w, begin, n, best_h);
  Edit e;
  e.kind = Edit::Kind::rotate;
  e.source_fn = attributed;
  e.start = begin;
  e.len = n;
  e.h = best_h;
  edits.push_back(std::move(e));
}

// Dependency descendants of a token (the token included).
std::unordered_set<int> dep_subtree(const Document& doc, int root) {
  std::unordered_set<int> members{root};
  const auto& tokens = doc.tokens();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
      if (members.count(i)) continue;
      if (tokens[i].dep_head && *tokens[i].dep_head != kRootHead &&
          members.count(*tokens[i].dep_head)) {
        members.insert(i);
        changed = true;
      }
    }
  }
  return members;
}

bool disjoint(const std::unordered_set<int>& a,
              const std::unordered_set<int>& b) {
  for (int x : a) {
    if (b.count(x)) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Names and categories

const char* noise_fn_name(NoiseFn fn) {
  for (const FnInfo& info : kFnTable) {
    if (info.fn == fn) return info.name;
  }
  return "?";
}

NoiseFn parse_noise_fn(std::string_view name) {
  for (const FnInfo& info : kFnTable) {
    if (name == info.name) return info.fn;
  }
  throw ConfigError("unknown noise function '" + std::string(name) + "'");
}

NoiseCategory noise_fn_category(NoiseFn fn) {
  for (const FnInfo& info : kFnTable) {
    if (info.fn == fn) return info.category;
  }
  return NoiseCategory::s;
}

const char* category_name(NoiseCategory c) {
  switch (c) {
    case NoiseCategory::s: return "s";
    case NoiseCategory::c: return "c";
    case NoiseCategory::cs: return "cs";
  }
  return "?";
}

NoiseCategory parse_category(std::string_view name) {
  if (name == "s") return NoiseCategory::s;
  if (name == "c") return NoiseCategory::c;
  if (name == "cs") return NoiseCategory::cs;
  throw ConfigError("unknown noise category '" + std::string(name) + "'");
}

const char* phase_name(Phase p) {
  return p == Phase::train ? "train" : "inference";
}

Phase parse_phase(std::string_view name) {
  if (name == "train") return Phase::train;
  if (name == "inference") return Phase::inference;
  throw ConfigError("unknown phase '" + std::string(name) + "'");
}

bool is_pan_structural(NoiseFn fn) {
  return fn == NoiseFn::sent_permute_i || fn == NoiseFn::phrase_shuffle_i;
}

nlohmann::json NoiseParams::to_json() const {
  return {{"mask_rate", mask_rate},       {"sub_rate", sub_rate},
          {"delete_rate", delete_rate},   {"insert_rate", insert_rate},
          {"shuffle_span", shuffle_span}, {"shuffle_repeats", shuffle_repeats},
          {"sentence_prob", sentence_prob}};
}

NoiseParams NoiseParams::from_json(const nlohmann::json& j) {
  NoiseParams p;
  if (j.contains("mask_rate")) p.mask_rate = j.at("mask_rate").get<double>();
  if (j.contains("sub_rate")) p.sub_rate = j.at("sub_rate").get<double>();
  if (j.contains("delete_rate")) p.delete_rate = j.at("delete_rate").get<double>();
  if (j.contains("insert_rate")) p.insert_rate = j.at("insert_rate").get<double>();
  if (j.contains("shuffle_span")) p.shuffle_span = j.at("shuffle_span").get<int>();
  if (j.contains("shuffle_repeats")) {
    p.shuffle_repeats = j.at("shuffle_repeats").get<int>();
  }
  if (j.contains("sentence_prob")) {
    p.sentence_prob = j.at("sentence_prob").get<double>();
  }
  return p;
}

// ---------------------------------------------------------------------------
// WorkDoc

WorkDoc WorkDoc::from_document(const Document& doc) {
  WorkDoc w;
  w.cells.reserve(doc.tokens().size());
  for (int i = 0; i < static_cast<int>(doc.tokens().size()); ++i) {
    w.cells.push_back({doc.tokens()[i].surface, i, false});
  }
  w.spans = doc.sentences();
  return w;
}

std::vector<std::string> WorkDoc::surfaces() const {
  std::vector<std::string> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) out.push_back(c.surface);
  return out;
}

std::vector<bool> WorkDoc::pinned() const {
  std::vector<bool> out(cells.size(), false);
  if (spans_valid) {
    for (const SentenceSpan& s : spans) {
      if (s.end > s.begin && is_terminal_punct(cells[s.end - 1].surface)) {
        out[s.end - 1] = true;
      }
    }
  } else {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (is_terminal_punct(cells[i].surface)) out[i] = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// s-noise (training)

std::vector<std::string> rotate_tokens(const std::vector<std::string>& tokens,
                                       int h) {
  const int n = static_cast<int>(tokens.size());
  if (n == 0 || h < 1 || h > n) throw DataError("rotation index out of range");
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(tokens[(h - 1 + i) % n]);
  return out;
}

void sent_permute_train(WorkDoc& w, const NoiseParams& p, Rng& rng,
                        std::vector<Edit>& edits,
                        std::vector<std::string>& flags) {
  if (!w.spans_valid) {
    flags.push_back("skip:sent_permute_t");
    return;
  }
  bool rotated = false;
  for (const SentenceSpan& span : w.spans) {
    if (!rng.bernoulli(p.sentence_prob)) continue;
    auto [begin, end] = interior(w, span);
    int n = end - begin;
    if (n < 2) {
      flags.push_back("identity:sent_permute_t");
      continue;
    }
    int h = 2 + static_cast<int>(rng.uniform(n - 1));  // [2, n]
    apply_rotation(w, begin, n, h);
    Edit e;
    e.kind = Edit::Kind::rotate;
    e.source_fn = NoiseFn::sent_permute_t;
    e.start = begin;
    e.len = n;
    e.h = h;
    edits.push_back(std::move(e));
    rotated = true;
  }
  if (!rotated) flags.push_back("identity:sent_permute_t");
}

void rand_shuffle_train(WorkDoc& w, const NoiseParams& p, Rng& rng,
                        std::vector<Edit>& edits,
                        std::vector<std::string>& flags) {
  const int span_len = p.shuffle_span;
  if (span_len <= 1) {
    flags.push_back("identity:rand_shuffle_t");
    return;
  }
  for (int r = 0; r < p.shuffle_repeats; ++r) {
    // Windows live inside one sentence interior; when sentence structure is
    // gone (after a complete shuffle) the whole doc minus pinned tails is
    // one window space.
    std::vector<std::pair<int, int>> regions;
    if (w.spans_valid) {
      for (const SentenceSpan& span : w.spans) {
        auto [begin, end] = interior(w, span);
        if (end - begin >= span_len) regions.emplace_back(begin, end);
      }
    } else if (static_cast<int>(w.cells.size()) >= span_len) {
      regions.emplace_back(0, static_cast<int>(w.cells.size()));
    }
    if (regions.empty()) {
      flags.push_back("identity:rand_shuffle_t");
      return;
    }
    auto [begin, end] = regions[rng.uniform(regions.size())];
    int start = begin + static_cast<int>(rng.uniform(end - begin - span_len + 1));
    std::vector<int> perm(span_len);
    for (int i = 0; i < span_len; ++i) perm[i] = i;
    rng.shuffle(perm);
    apply_permutation(w, start, perm);
    Edit e;
    e.kind = Edit::Kind::permute;
    e.source_fn = NoiseFn::rand_shuffle_t;
    e.start = start;
    e.perm = std::move(perm);
    edits.push_back(std::move(e));
  }
}

void complete_shuffle_train(WorkDoc& w, Rng& rng, std::vector<Edit>& edits,
                            std::vector<std::string>& flags) {
  const int n = static_cast<int>(w.cells.size());
  if (n < 2) {
    flags.push_back("identity:complete_shuffle_t");
    return;
  }
  std::vector<bool> pins = w.pinned();
  std::vector<int> movable;
  for (int i = 0; i < n; ++i) {
    if (!pins[i]) movable.push_back(i);
  }
  if (movable.size() < 2) {
    flags.push_back("identity:complete_shuffle_t");
    return;
  }
  std::vector<int> shuffled = movable;
  rng.shuffle(shuffled);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (size_t i = 0; i < movable.size(); ++i) perm[movable[i]] = shuffled[i];
  apply_permutation(w, 0, perm);
  Edit e;
  e.kind = Edit::Kind::permute;
  e.source_fn = NoiseFn::complete_shuffle_t;
  e.start = 0;
  e.perm = std::move(perm);
  edits.push_back(std::move(e));
  w.spans_valid = false;
}

// ---------------------------------------------------------------------------
// c-noise

void templatize(WorkDoc& w, const Document& doc, const NoiseResources& res,
                const NoiseParams& p, Rng& rng, bool object_priority,
                std::vector<Edit>& edits, std::vector<std::string>& flags) {
  ProtectedMask mask = protected_mask(doc, ProtectPhase::templatize_delete,
                                      gazetteer_or_default(res));
  std::vector<int> eligible;
  for (int i = 0; i < static_cast<int>(w.cells.size()); ++i) {
    const auto& cell = w.cells[i];
    if (cell.src < 0 || cell.masked) continue;
    const Token& tok = doc.tokens()[cell.src];
    if (tok.pos == Pos::PUNCT || tok.pos == Pos::SYM) continue;
    if (mask.is_protected(cell.src)) continue;
    eligible.push_back(i);
  }
  NoiseFn fn = object_priority ? NoiseFn::templatize_obj_i : NoiseFn::templatize_t;
  if (eligible.empty()) {
    flags.push_back(std::string("identity:") + noise_fn_name(fn));
    return;
  }
  std::vector<int> selected =
      select_positions(eligible, doc, w, p.mask_rate, object_priority, rng);
  if (selected.empty()) {
    flags.push_back(std::string("identity:") + noise_fn_name(fn));
    return;
  }

  // Close the selection over coreference chains: masking one mention masks
  // every eligible mention of the chain.
  std::unordered_set<int> chain_ids;
  std::unordered_set<int> chosen(selected.begin(), selected.end());
  for (int pos : selected) {
    const Token& tok = doc.tokens()[w.cells[pos].src];
    if (tok.coref_id) chain_ids.insert(*tok.coref_id);
  }
  for (int pos : eligible) {
    const Token& tok = doc.tokens()[w.cells[pos].src];
    if (tok.coref_id && chain_ids.count(*tok.coref_id)) chosen.insert(pos);
  }

  // Dense per-tag indices in output order; chain mates share one mask token.
  std::map<std::string, int> next_index;
  std::map<int, std::string> chain_mask;   // coref chain -> mask token
  std::vector<int> ordered(chosen.begin(), chosen.end());
  std::sort(ordered.begin(), ordered.end());
  for (int pos : ordered) {
    const Token& tok = doc.tokens()[w.cells[pos].src];
    std::string mask_token;
    auto chain_it = tok.coref_id ? chain_mask.find(*tok.coref_id)
                                 : chain_mask.end();
    if (tok.coref_id && chain_it != chain_mask.end()) {
      mask_token = chain_it->second;
    } else {
      std::string tag = pos_name(tok.pos);
      mask_token = tag + std::to_string(++next_index[tag]);
      if (tok.coref_id) chain_mask[*tok.coref_id] = mask_token;
    }
    Edit e;
    e.kind = Edit::Kind::mask;
    e.source_fn = fn;
    e.pos = pos;
    e.surface = mask_token;
    e.original = w.cells[pos].surface;
    e.tag = pos_name(tok.pos);
    e.src = w.cells[pos].src;
    edits.push_back(std::move(e));
    w.cells[pos].surface = mask_token;
    w.cells[pos].masked = true;
  }
}

void synonym_substitute(WorkDoc& w, const Document& doc,
                        const NoiseResources& res, const NoiseParams& p,
                        Rng& rng, bool object_priority, std::vector<Edit>& edits,
                        std::vector<std::string>& flags) {
  if (!res.lexicon) throw ConfigError("synonym substitution requires a lexicon");
  ProtectedMask mask = protected_mask(doc, ProtectPhase::substitute_insert,
                                      gazetteer_or_default(res));
  std::vector<int> eligible;
  for (int i = 0; i < static_cast<int>(w.cells.size()); ++i) {
    const auto& cell = w.cells[i];
    if (cell.src < 0 || cell.masked) continue;
    const Token& tok = doc.tokens()[cell.src];
    if (tok.pos == Pos::PUNCT || tok.pos == Pos::SYM) continue;
    if (mask.is_protected(cell.src)) continue;
    eligible.push_back(i);
  }
  NoiseFn fn =
      object_priority ? NoiseFn::synonym_sub_obj_i : NoiseFn::synonym_sub_t;
  if (eligible.empty()) {
    flags.push_back(std::string("identity:") + noise_fn_name(fn));
    return;
  }
  std::vector<int> selected =
      select_positions(eligible, doc, w, p.sub_rate, object_priority, rng);
  bool substituted = false;
  for (int pos : selected) {
    const Token& tok = doc.tokens()[w.cells[pos].src];
    const auto& entries = res.lexicon->lookup(tok.lemma, tok.pos);
    if (entries.empty()) continue;  // absent from lexicon: skipped
    const std::string& synonym = entries[rng.uniform(entries.size())].synonym;
    Edit e;
    e.kind = Edit::Kind::sub;
    e.source_fn = fn;
    e.pos = pos;
    e.surface = synonym;
    e.original = w.cells[pos].surface;
    e.src = w.cells[pos].src;
    edits.push_back(std::move(e));
    w.cells[pos].surface = synonym;
    substituted = true;
  }
  if (!substituted) {
    flags.push_back(std::string("identity:") + noise_fn_name(fn));
  }
}

// ---------------------------------------------------------------------------
// cs-noise

void rand_delete(WorkDoc& w, const Document& doc, const NoiseResources& res,
                 const NoiseParams& p, Rng& rng, std::vector<Edit>& edits,
                 std::vector<std::string>& flags) {
  ProtectedMask mask = protected_mask(doc, ProtectPhase::templatize_delete,
                                      gazetteer_or_default(res));
  std::vector<bool> pins = w.pinned();
  std::vector<int> victims;
  for (int i = 0; i < static_cast<int>(w.cells.size()); ++i) {
    const auto& cell = w.cells[i];
    if (pins[i] || cell.masked) continue;
    if (cell.src >= 0 && mask.is_protected(cell.src)) continue;
    if (rng.bernoulli(p.delete_rate)) victims.push_back(i);
  }
  if (static_cast<int>(victims.size()) == static_cast<int>(w.cells.size())) {
    victims.pop_back();  // never empty the document entirely
  }
  if (victims.empty()) {
    flags.push_back("identity:rand_delete");
    return;
  }
  for (auto it = victims.rbegin(); it != victims.rend(); ++it) {
    int pos = *it;
    Edit e;
    e.kind = Edit::Kind::del;
    e.source_fn = NoiseFn::rand_delete;
    e.pos = pos;
    e.surface = w.cells[pos].surface;
    edits.push_back(std::move(e));
    w.cells.erase(w.cells.begin() + pos);
    shift_spans_for_delete(w.spans, pos);
  }
}

void word_insert(WorkDoc& w, const Document& doc, const NoiseResources& res,
                 const NoiseParams& p, Rng& rng, std::vector<Edit>& edits,
                 std::vector<std::string>& flags) {
  if (!res.lexicon) throw ConfigError("word insertion requires a lexicon");
  const auto& vocab = res.lexicon->insertion_vocabulary();
  int count = 0;
  for (size_t i = 0; i < w.cells.size(); ++i) {
    if (rng.bernoulli(p.insert_rate)) ++count;
  }
  if (count == 0) {
    flags.push_back("identity:word_insert");
    return;
  }
  for (int k = 0; k < count; ++k) {
    int pos = static_cast<int>(rng.uniform(w.cells.size() + 1));
    std::string word;
    if (rng.bernoulli(0.5)) {
      // In-context synonym of a token from the sample.
      std::vector<int> sources;
      for (int i = 0; i < static_cast<int>(w.cells.size()); ++i) {
        const auto& cell = w.cells[i];
        if (cell.src < 0 || cell.masked) continue;
        const Token& tok = doc.tokens()[cell.src];
        if (res.lexicon->has(tok.lemma, tok.pos)) sources.push_back(i);
      }
      if (!sources.empty()) {
        const Token& tok =
            doc.tokens()[w.cells[sources[rng.uniform(sources.size())]].src];
        const auto& entries = res.lexicon->lookup(tok.lemma, tok.pos);
        word = entries[rng.uniform(entries.size())].synonym;
      }
    }
    if (word.empty()) word = vocab[rng.uniform(vocab.size())];
    w.cells.insert(w.cells.begin() + pos, {word, -1, false});
    shift_spans_for_insert(w.spans, pos);
    Edit e;
    e.kind = Edit::Kind::ins;
    e.source_fn = NoiseFn::word_insert;
    e.pos = pos;
    e.surface = word;
    edits.push_back(std::move(e));
  }
}

// ---------------------------------------------------------------------------
// Grounded s-noise (inference)

std::vector<int> adp_rotation_points(const Document& doc, SentenceSpan span,
                                     const WorkDoc& w) {
  auto [begin, end] = interior(w, span);
  std::vector<int> hs;
  for (int i = begin; i < end; ++i) {
    const auto& cell = w.cells[i];
    if (cell.src >= 0 && doc.tokens()[cell.src].pos == Pos::ADP) {
      hs.push_back(i - begin + 1);
    }
  }
  return hs;
}

void sent_permute_infer(WorkDoc& w, const Document& doc,
                        const NoiseResources& res, std::vector<Edit>& edits,
                        std::vector<std::string>& flags) {
  if (!w.spans_valid) {
    flags.push_back("skip:sent_permute_i");
    return;
  }
  for (size_t s = 0; s < w.spans.size(); ++s) {
    fluent_rotate_sentence(w, doc, res, s, NoiseFn::sent_permute_i, edits,
                           flags);
  }
}

void phrase_shuffle_infer(WorkDoc& w, const Document& doc,
                          const NoiseResources& res, std::vector<Edit>& edits,
                          std::vector<std::string>& flags) {
  if (!w.spans_valid) {
    flags.push_back("skip:phrase_shuffle_i");
    return;
  }
  if (!res.fluency) throw ConfigError("grounded s-noise requires a fluency model");
  for (size_t s = 0; s < w.spans.size(); ++s) {
    const SentenceSpan& span = w.spans[s];
    const std::string* tree_str = nullptr;
    if (s < doc.constituency().size() && !doc.constituency()[s].empty()) {
      tree_str = &doc.constituency()[s];
    }
    // A tree only lines up with pristine sentences: same tokens, no masks.
    bool pristine = true;
    for (int i = span.begin; i < span.end; ++i) {
      if (w.cells[i].src != i || w.cells[i].masked) {
        pristine = false;
        break;
      }
    }
    if (!tree_str || !pristine) {
      fluent_rotate_sentence(w, doc, res, s, NoiseFn::phrase_shuffle_i, edits,
                             flags);
      continue;
    }

    ParseTree tree = ParseTree::parse(*tree_str);
    const int len = span.end - span.begin;
    std::vector<std::vector<int>> candidates;
    auto add_candidate = [&](std::vector<int> order) {
      if (static_cast<int>(order.size()) != len) return;
      bool identity = true;
      for (int i = 0; i < len; ++i) identity &= order[i] == i;
      if (identity) return;
      if (std::find(candidates.begin(), candidates.end(), order) ==
          candidates.end()) {
        candidates.push_back(std::move(order));
      }
    };

    // (i) preposition shuffle: PP node fronted within its parent
    for (int pp : tree.find_nodes("PP")) {
      add_candidate(tree.with_child_fronted(pp));
    }
    // (ii) conjunction shuffle: swap around CC nodes
    for (int cc : tree.find_nodes("CC")) {
      add_candidate(tree.with_conjuncts_swapped(cc));
    }
    // (iii) verb shuffle: swap verbs with disjoint dependency subtrees
    {
      std::vector<int> verbs;
      for (int i = span.begin; i < span.end; ++i) {
        if (doc.tokens()[i].pos == Pos::VERB) verbs.push_back(i);
      }
      for (size_t a = 0; a < verbs.size(); ++a) {
        for (size_t b = a + 1; b < verbs.size(); ++b) {
          auto sub_a = dep_subtree(doc, verbs[a]);
          auto sub_b = dep_subtree(doc, verbs[b]);
          if (!disjoint(sub_a, sub_b)) continue;
          std::vector<int> order(len);
          for (int i = 0; i < len; ++i) order[i] = i;
          std::swap(order[verbs[a] - span.begin], order[verbs[b] - span.begin]);
          add_candidate(std::move(order));
        }
      }
    }
    // (iv) noun-verb shuffle: swap an NP subtree with a disjoint VP subtree
    for (int np : tree.find_nodes("NP")) {
      for (int vp : tree.find_nodes("VP")) {
        if (tree.related(np, vp)) continue;
        add_candidate(tree.with_subtrees_swapped(np, vp));
      }
    }

    if (candidates.empty()) {
      flags.push_back("identity:phrase_shuffle_i");
      continue;
    }
    double best = -1;
    size_t best_idx = 0;
    for (size_t c = 0; c < candidates.size(); ++c) {
      std::vector<std::string> toks;
      toks.reserve(len);
      for (int srcoff : candidates[c]) {
        toks.push_back(w.cells[span.begin + srcoff].surface);
      }
      double fl = res.fluency->fluency(toks);
      if (fl > best) {
        best = fl;
        best_idx = c;
      }
    }
    apply_permutation(w, span.begin, candidates[best_idx]);
    Edit e;
    e.kind = Edit::Kind::permute;
    e.source_fn = NoiseFn::phrase_shuffle_i;
    e.start = span.begin;
    e.perm = candidates[best_idx];
    edits.push_back(std::move(e));
  }
}

// ---------------------------------------------------------------------------
// Prompts

std::string assign_prompt(const std::set<NoiseCategory>& categories,
                          bool passive) {
  std::vector<std::string> words;
  if (categories.count(NoiseCategory::c)) words.push_back("replace");
  if (categories.count(NoiseCategory::s)) words.push_back("shuffle");
  if (categories.count(NoiseCategory::cs)) words.push_back("fix");
  if (words.empty()) return passive ? "paraphrase passive:" : "paraphrase:";
  std::string out = "paraphrase ";
  if (passive) out += "passive ";
  return out + join(words, " ") + " :";
}

std::set<NoiseCategory> parse_prompt_categories(const std::string& prompt) {
  std::string cleaned = prompt;
  std::replace(cleaned.begin(), cleaned.end(), ':', ' ');
  std::vector<std::string> words = split_ws(cleaned);
  if (words.empty() || words[0] != "paraphrase") {
    throw ConfigError("prompt must start with 'paraphrase': '" + prompt + "'");
  }
  std::set<NoiseCategory> out;
  for (size_t i = 1; i < words.size(); ++i) {
    if (words[i] == "replace") {
      out.insert(NoiseCategory::c);
    } else if (words[i] == "shuffle") {
      out.insert(NoiseCategory::s);
    } else if (words[i] == "fix") {
      out.insert(NoiseCategory::cs);
    } else if (words[i] == "passive") {
      // passivization marker; no consistency condition attached
    } else {
      throw ConfigError("unknown prompt word '" + words[i] + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Combination application

NoisedSample apply_combination(const Document& doc,
                               const NoiseCombination& combo, uint64_t seed,
                               const NoiseResources& res, bool passive) {
  if (passive && !doc.passive_text()) {
    throw DataError(doc.id() + ": passive sample without passive_text");
  }
  Rng rng(seed);
  WorkDoc w = WorkDoc::from_document(doc);
  NoisedSample out;
  out.doc_id = doc.id();
  out.combination_id = combo.id;
  out.seed = seed;
  out.phase = combo.phase;
  out.passive = passive;

  for (const FnSpec& spec : combo.functions) {
    switch (spec.fn) {
      case NoiseFn::sent_permute_t:
        sent_permute_train(w, spec.params, rng, out.edits, out.flags);
        break;
      case NoiseFn::rand_shuffle_t:
        rand_shuffle_train(w, spec.params, rng, out.edits, out.flags);
        break;
      case NoiseFn::complete_shuffle_t:
        complete_shuffle_train(w, rng, out.edits, out.flags);
        break;
      case NoiseFn::templatize_t:
        templatize(w, doc, res, spec.params, rng, false, out.edits, out.flags);
        break;
      case NoiseFn::synonym_sub_t:
        synonym_substitute(w, doc, res, spec.params, rng, false, out.edits,
                           out.flags);
        break;
      case NoiseFn::rand_delete:
        rand_delete(w, doc, res, spec.params, rng, out.edits, out.flags);
        break;
      case NoiseFn::word_insert:
        word_insert(w, doc, res, spec.params, rng, out.edits, out.flags);
        break;
      case NoiseFn::sent_permute_i:
        sent_permute_infer(w, doc, res, out.edits, out.flags);
        break;
      case NoiseFn::phrase_shuffle_i:
        phrase_shuffle_infer(w, doc, res, out.edits, out.flags);
        break;
      case NoiseFn::templatize_obj_i:
        templatize(w, doc, res, spec.params, rng, true, out.edits, out.flags);
        break;
      case NoiseFn::synonym_sub_obj_i:
        synonym_substitute(w, doc, res, spec.params, rng, true, out.edits,
                           out.flags);
        break;
    }
  }

  out.noised_text = detokenize(w.surfaces());
  out.target_text = passive ? *doc.passive_text() : doc.text();
  out.prompt = assign_prompt(combo.phase == Phase::inference
                                 ? combo.category
                                 : std::set<NoiseCategory>{},
                             passive);
  if (out.edits.empty() &&
      std::find_if(out.flags.begin(), out.flags.end(), [](const std::string& f) {
        return starts_with(f, "identity:");
      }) == out.flags.end()) {
    out.flags.push_back("identity:empty-combination");
  }
  return out;
}

std::vector<bool> select_passive_targets(const std::vector<Document>& corpus,
                                         double fraction, uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw ConfigError("passive fraction must be in [0, 1]");
  }
  const size_t n = corpus.size();
  const size_t m = static_cast<size_t>(std::floor(fraction * n));
  std::vector<int> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<bool> flags(n, false);
  for (size_t i = 0; i < m; ++i) flags[order[i]] = true;
  return flags;
}

// ---------------------------------------------------------------------------
// Rule-based passivizer fallback

namespace {

const std::unordered_map<std::string, std::string>& irregular_participles() {
  static const std::unordered_map<std::string, std::string> table = {
      {"rode", "ridden"},   {"gave", "given"},   {"made", "made"},
      {"sold", "sold"},     {"bought", "bought"}, {"paid", "paid"},
      {"spent", "spent"},   {"got", "gotten"},   {"took", "taken"},
      {"drove", "driven"},  {"went", "gone"},    {"ran", "run"},
      {"held", "held"},     {"found", "found"},  {"left", "left"},
      {"grew", "grown"},    {"swam", "swum"},    {"read", "read"},
      {"put", "put"},       {"ate", "eaten"},    {"saw", "seen"},
      {"wrote", "written"}, {"drew", "drawn"},   {"charged", "charged"}};
  return table;
}

std::string participle_of(const std::string& surface, const std::string& lemma) {
  std::string lower = lowercase(surface);
  auto it = irregular_participles().find(lower);
  if (it != irregular_participles().end()) return it->second;
  std::string base = lemma;
  if (base.empty()) base = lower;
  size_t n = base.size();
  if (n >= 2 && base.compare(n - 2, 2, "ed") == 0) return base;
  if (!base.empty() && base.back() == 'e') return base + "d";
  if (n >= 2 && base.back() == 'y' &&
      std::string("aeiou").find(base[n - 2]) == std::string::npos) {
    return base.substr(0, n - 1) + "ied";
  }
  return base + "ed";
}

bool is_past_form(const std::string& surface) {
  std::string lower = lowercase(surface);
  if (irregular_participles().count(lower)) return true;
  return lower.size() > 3 && lower.compare(lower.size() - 2, 2, "ed") == 0;
}

bool is_nominal(Pos pos) {
  return pos == Pos::NOUN || pos == Pos::PROPN || pos == Pos::PRON;
}

}  // namespace

std::optional<std::string> passivize_fallback(const Document& doc) {
  std::vector<std::string> out_tokens;
  bool transformed = false;
  for (const SentenceSpan& span : doc.sentences()) {
    const auto& toks = doc.tokens();
    int verb = -1;
    for (int i = span.begin; i < span.end; ++i) {
      if (toks[i].pos == Pos::VERB) {
        verb = i;
        break;
      }
    }
    bool ok = verb > span.begin;
    int subj_begin = span.begin, subj_end = verb;  // [begin, verb)
    int obj_begin = verb + 1, obj_end = -1;
    if (ok) {
      bool subj_nominal = false;
      for (int i = subj_begin; i < subj_end; ++i) {
        subj_nominal |= is_nominal(toks[i].pos);
      }
      ok = subj_nominal;
    }
    if (ok) {
      int i = obj_begin;
      bool obj_nominal = false;
      while (i < span.end) {
        Pos p = toks[i].pos;
        if (p == Pos::DET || p == Pos::ADJ || p == Pos::NUM ||
            is_nominal(p)) {
          obj_nominal |= is_nominal(p);
          ++i;
        } else {
          break;
        }
      }
      obj_end = i;
      ok = obj_nominal && obj_end > obj_begin;
    }
    if (!ok) {
      for (int i = span.begin; i < span.end; ++i) {
        out_tokens.push_back(toks[i].surface);
      }
      continue;
    }

    // object + be + participle + by + subject + rest
    std::string obj_head_surface;
    for (int i = obj_begin; i < obj_end; ++i) {
      if (is_nominal(toks[i].pos)) obj_head_surface = toks[i].surface;
    }
    bool plural = !obj_head_surface.empty() && obj_head_surface.back() == 's';
    bool past = is_past_form(toks[verb].surface);
    std::string be = past ? (plural ? "were" : "was") : (plural ? "are" : "is");

    std::vector<std::string> rebuilt;
    for (int i = obj_begin; i < obj_end; ++i) rebuilt.push_back(toks[i].surface);
    if (!rebuilt.empty() && !rebuilt[0].empty() &&
        std::islower(static_cast<unsigned char>(rebuilt[0][0]))) {
      rebuilt[0][0] =
          static_cast<char>(std::toupper(static_cast<unsigned char>(rebuilt[0][0])));
    }
    rebuilt.push_back(be);
    rebuilt.push_back(participle_of(toks[verb].surface, toks[verb].lemma));
    rebuilt.push_back("by");
    for (int i = subj_begin; i < subj_end; ++i) {
      std::string s = toks[i].surface;
      if (i == subj_begin && toks[i].pos == Pos::DET && !s.empty()) {
        s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
      }
      rebuilt.push_back(s);
    }
    for (int i = obj_end; i < span.end; ++i) rebuilt.push_back(toks[i].surface);
    out_tokens.insert(out_tokens.end(), rebuilt.begin(), rebuilt.end());
    transformed = true;
  }
  if (!transformed) return std::nullopt;
  return detokenize(out_tokens);
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json Edit::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case Kind::del: j["kind"] = "del"; break;
    case Kind::ins: j["kind"] = "ins"; break;
    case Kind::mask: j["kind"] = "mask"; break;
    case Kind::sub: j["kind"] = "sub"; break;
    case Kind::rotate: j["kind"] = "rotate"; break;
    case Kind::permute: j["kind"] = "permute"; break;
  }
  j["fn"] = noise_fn_name(source_fn);
  switch (kind) {
    case Kind::del:
    case Kind::ins:
      j["pos"] = pos;
      j["surface"] = surface;
      break;
    case Kind::mask:
      j["pos"] = pos;
      j["surface"] = surface;
      j["original"] = original;
      j["tag"] = tag;
      if (src >= 0) j["src"] = src;
      break;
    case Kind::sub:
      j["pos"] = pos;
      j["surface"] = surface;
      j["original"] = original;
      if (src >= 0) j["src"] = src;
      break;
    case Kind::rotate:
      j["start"] = start;
      j["len"] = len;
      j["h"] = h;
      break;
    case Kind::permute:
      j["start"] = start;
      j["perm"] = perm;
      break;
  }
  return j;
}

Edit Edit::from_json(const nlohmann::json& j) {
  Edit e;
  std::string kind = j.at("kind").get<std::string>();
  e.source_fn = parse_noise_fn(j.at("fn").get<std::string>());
  if (kind == "del" || kind == "ins") {
    e.kind = kind == "del" ? Kind::del : Kind::ins;
    e.pos = j.at("pos").get<int>();
    e.surface = j.at("surface").get<std::string>();
  } else if (kind == "mask") {
    e.kind = Kind::mask;
    e.pos = j.at("pos").get<int>();
    e.surface = j.at("surface").get<std::string>();
    e.original = j.at("original").get<std::string>();
    e.tag = j.at("tag").get<std::string>();
    if (j.contains("src")) e.src = j.at("src").get<int>();
  } else if (kind == "sub") {
    e.kind = Kind::sub;
    e.pos = j.at("pos").get<int>();
    e.surface = j.at("surface").get<std::string>();
    e.original = j.at("original").get<std::string>();
    if (j.contains("src")) e.src = j.at("src").get<int>();
  } else if (kind == "rotate") {
    e.kind = Kind::rotate;
    e.start = j.at("start").get<int>();
    e.len = j.at("len").get<int>();
    e.h = j.at("h").get<int>();
  } else if (kind == "permute") {
    e.kind = Kind::permute;
    e.start = j.at("start").get<int>();
    e.perm = j.at("perm").get<std::vector<int>>();
  } else {
    throw DataError("unknown edit kind '" + kind + "'");
  }
  return e;
}

nlohmann::json NoisedSample::to_json(bool strip_edits) const {
  nlohmann::json j;
  j["doc_id"] = doc_id;
  j["prompt"] = prompt;
  j["source"] = prompt + " " + noised_text;
  j["target"] = target_text;
  j["combination_id"] = combination_id;
  j["seed"] = seed;
  j["phase"] = phase_name(phase);
  j["passive"] = passive;
  if (!flags.empty()) j["flags"] = flags;
  if (!strip_edits) {
    nlohmann::json edits_json = nlohmann::json::array();
    for (const Edit& e : edits) edits_json.push_back(e.to_json());
    j["edits"] = std::move(edits_json);
  }
  return j;
}

NoisedSample NoisedSample::from_json(const nlohmann::json& j) {
  NoisedSample s;
  s.doc_id = j.at("doc_id").get<std::string>();
  s.prompt = j.at("prompt").get<std::string>();
  std::string source = j.at("source").get<std::string>();
  std::string prefix = s.prompt + " ";
  s.noised_text = starts_with(source, prefix) ? source.substr(prefix.size())
                                              : source;
  s.target_text = j.at("target").get<std::string>();
  s.combination_id = j.at("combination_id").get<std::string>();
  s.seed = j.at("seed").get<uint64_t>();
  if (j.contains("phase")) s.phase = parse_phase(j.at("phase").get<std::string>());
  if (j.contains("passive")) s.passive = j.at("passive").get<bool>();
  if (j.contains("flags")) s.flags = j.at("flags").get<std::vector<std::string>>();
  if (j.contains("edits")) {
    for (const auto& ej : j.at("edits")) s.edits.push_back(Edit::from_json(ej));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Registry

CombinationRegistry CombinationRegistry::from_file(const std::string& path,
                                                   const NoiseParams& defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open combination registry: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed combination registry " + path + ": " +
                      e.what());
  }
  return from_json(j, defaults);
}

CombinationRegistry CombinationRegistry::from_json(const nlohmann::json& j,
                                                   const NoiseParams& defaults) {
  CombinationRegistry reg;
  if (!j.contains("combinations") || !j.at("combinations").is_array()) {
    throw ConfigError("registry needs a 'combinations' array");
  }
  for (const auto& cj : j.at("combinations")) {
    NoiseCombination combo;
    combo.id = cj.at("id").get<std::string>();
    if (reg.find(combo.id)) {
      throw ConfigError("duplicate combination id '" + combo.id + "'");
    }
    combo.phase = parse_phase(cj.at("phase").get<std::string>());
    if (cj.contains("weight")) combo.weight = cj.at("weight").get<double>();
    if (combo.weight < 0) {
      throw ConfigError(combo.id + ": sampling weight must be >= 0");
    }
    for (const auto& fj : cj.at("functions")) {
      FnSpec spec;
      spec.fn = parse_noise_fn(fj.at("fn").get<std::string>());
      spec.params = defaults;
      if (fj.contains("params")) {
        nlohmann::json merged = defaults.to_json();
        merged.update(fj.at("params"));
        spec.params = NoiseParams::from_json(merged);
      }
      combo.category.insert(noise_fn_category(spec.fn));
      combo.functions.push_back(std::move(spec));
    }
    if (combo.phase == Phase::inference) {
      for (const FnSpec& spec : combo.functions) {
        if (spec.fn == NoiseFn::complete_shuffle_t) {
          throw ConfigError(combo.id +
                            ": complete shuffling is not usable at inference");
        }
      }
    }
    if (cj.contains("category")) {
      std::set<NoiseCategory> declared;
      for (const auto& c : cj.at("category")) {
        declared.insert(parse_category(c.get<std::string>()));
      }
      if (declared != combo.category) {
        throw ConfigError(combo.id +
                          ": declared category does not match the union of "
                          "member function categories");
      }
    }
    reg.combos_.push_back(std::move(combo));
  }
  return reg;
}

CombinationRegistry CombinationRegistry::builtin(const NoiseParams& defaults) {
  nlohmann::json j;
  j["combinations"] = nlohmann::json::array();
  auto add = [&](const std::string& id, const std::string& phase,
                 std::vector<std::string> fns) {
    nlohmann::json cj;
    cj["id"] = id;
    cj["phase"] = phase;
    nlohmann::json fjs = nlohmann::json::array();
    for (const std::string& fn : fns) fjs.push_back({{"fn", fn}});
    cj["functions"] = std::move(fjs);
    j["combinations"].push_back(std::move(cj));
  };
  add("train_a", "train", {"rand_delete", "rand_shuffle_t", "templatize_t"});
  add("train_b", "train", {"templatize_t"});
  add("train_c", "train", {"rand_delete", "templatize_t", "word_insert"});
  add("train_d", "train", {"rand_delete", "word_insert"});
  add("train_e", "train",
      {"rand_delete", "rand_shuffle_t", "sent_permute_t", "synonym_sub_t",
       "templatize_t", "word_insert"});
  add("train_f", "train",
      {"rand_delete", "rand_shuffle_t", "synonym_sub_t", "word_insert"});
  add("train_g", "train",
      {"rand_delete", "synonym_sub_t", "templatize_t", "word_insert"});
  add("train_h", "train",
      {"rand_delete", "sent_permute_t", "synonym_sub_t", "word_insert"});
  add("train_i", "train", {"complete_shuffle_t", "synonym_sub_t"});
  add("train_j", "train", {"complete_shuffle_t", "rand_delete", "word_insert"});
  add("infer_a", "inference", {"sent_permute_i", "templatize_obj_i"});
  add("infer_b", "inference", {"phrase_shuffle_i", "synonym_sub_obj_i"});
  add("infer_c", "inference", {"phrase_shuffle_i", "templatize_obj_i"});
  add("infer_d", "inference", {"phrase_shuffle_i", "synonym_sub_obj_i"});
  add("infer_e", "inference", {"synonym_sub_obj_i", "templatize_obj_i"});
  add("infer_f", "inference", {"sent_permute_i", "synonym_sub_obj_i"});
  add("infer_g", "inference",
      {"rand_delete", "templatize_obj_i", "word_insert"});
  add("infer_h", "inference",
      {"phrase_shuffle_i", "sent_permute_i", "synonym_sub_obj_i"});
  add("infer_i", "inference", {"rand_delete", "word_insert"});
  add("infer_j", "inference",
      {"phrase_shuffle_i", "synonym_sub_obj_i", "templatize_obj_i"});
  return from_json(j, defaults);
}

std::vector<const NoiseCombination*> CombinationRegistry::for_phase(
    Phase phase) const {
  std::vector<const NoiseCombination*> out;
  for (const NoiseCombination& c : combos_) {
    if (c.phase == phase) out.push_back(&c);
  }
  return out;
}

const NoiseCombination* CombinationRegistry::find(std::string_view id) const {
  for (const NoiseCombination& c : combos_) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const NoiseCombination& CombinationRegistry::sample(Phase phase,
                                                    Rng& rng) const {
  auto combos = for_phase(phase);
  if (combos.empty()) {
    throw ConfigError(std::string("registry has no ") + phase_name(phase) +
                      "-phase combinations");
  }
  double total = 0;
  for (const NoiseCombination* c : combos) total += c->weight;
  if (total <= 0) throw ConfigError("all sampling weights are zero");
  double draw = rng.real() * total;
  for (const NoiseCombination* c : combos) {
    draw -= c->weight;
    if (draw < 0) return *c;
  }
  return *combos.back();
}

}  // namespace parakit

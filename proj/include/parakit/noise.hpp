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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parakit/common.hpp"
#include "parakit/corpus.hpp"
#include "parakit/lexicon.hpp"
#include "parakit/scorers.hpp"

#include "json.hpp"

namespace parakit {

enum class NoiseFn {
  sent_permute_t,
  rand_shuffle_t,
  complete_shuffle_t,
  templatize_t,
  synonym_sub_t,
  rand_delete,
  word_insert,
  sent_permute_i,
  phrase_shuffle_i,
  templatize_obj_i,
  synonym_sub_obj_i,
};

enum class NoiseCategory { s, c, cs };
enum class Phase { train, inference };

const char* noise_fn_name(NoiseFn fn);
NoiseFn parse_noise_fn(std::string_view name);
NoiseCategory noise_fn_category(NoiseFn fn);
const char* category_name(NoiseCategory c);
NoiseCategory parse_category(std::string_view name);
const char* phase_name(Phase p);
Phase parse_phase(std::string_view name);

// Structural permutations from these functions are grounded noise the
// denoiser is built to be unable to detect; the mock denoiser leaves them in
// place for inference-phase samples.
bool is_pan_structural(NoiseFn fn);

struct NoiseParams {
  double mask_rate = 0.15;
  double sub_rate = 0.15;
  double delete_rate = 0.10;
  double insert_rate = 0.10;
  int shuffle_span = 3;      // contiguous window size (p + 1)
  int shuffle_repeats = 2;
  double sentence_prob = 0.5;  // per-sentence selection for sent_permute_t

  nlohmann::json to_json() const;
  static NoiseParams from_json(const nlohmann::json& j);
};

struct FnSpec {
  NoiseFn fn;
  NoiseParams params;
};

struct NoiseCombination {
  std::string id;
  Phase phase = Phase::train;
  std::vector<FnSpec> functions;
  std::set<NoiseCategory> category;  // always the union of member categories
  double weight = 1.0;
};

// Reversible edit record. Replaying a sample's edits in reverse restores the
// pre-noise token sequence exactly.
struct Edit {
  enum class Kind { del, ins, mask, sub, rotate, permute };
  Kind kind;
  NoiseFn source_fn;
  int pos = 0;               // del/ins/mask/sub: index at application time
  std::string surface;       // del: removed token; ins: added; mask/sub: new
  std::string original;      // mask/sub: replaced token
  std::string tag;           // mask: POS tag of the masked token
  int src = -1;              // mask/sub: original document token index
  int start = 0;             // rotate/permute: span start
  int len = 0;               // rotate: span length
  int h = 0;                 // rotate: 1-based rotation index
  std::vector<int> perm;     // permute: perm[i] = source offset within span

  nlohmann::json to_json() const;
  static Edit from_json(const nlohmann::json& j);
};

struct NoisedSample {
  std::string doc_id;
  std::string noised_text;
  std::string target_text;  // original, or the passive form for passive samples
  std::string prompt;
  std::vector<Edit> edits;
  std::string combination_id;
  uint64_t seed = 0;
  Phase phase = Phase::train;
  bool passive = false;
  std::vector<std::string> flags;

  nlohmann::json to_json(bool strip_edits = false) const;
  static NoisedSample from_json(const nlohmann::json& j);
};

// Shared read-only context for the noise functions.
struct NoiseResources {
  const SynonymLexicon* lexicon = nullptr;
  const UnitGazetteer* gazetteer = nullptr;
  const FluencyModel* fluency = nullptr;  // required by the grounded s-noise
};

// Mutable working state threaded through a combination. Tracks per-token
// provenance so later functions still see the original annotations.
struct WorkDoc {
  struct Cell {
    std::string surface;
    int src = -1;        // original token index, -1 for inserted tokens
    bool masked = false;
  };
  std::vector<Cell> cells;
  std::vector<SentenceSpan> spans;
  bool spans_valid = true;

  static WorkDoc from_document(const Document& doc);
  std::vector<std::string> surfaces() const;
  // Positions whose token is pinned (sentence-terminal punctuation).
  std::vector<bool> pinned() const;
};

// Individual noise functions. Each appends its reversible edits. "flags"
// collects identity/no-op notes.

// Rotation of each stochastically selected sentence around an interior index.
void sent_permute_train(WorkDoc& w, const NoiseParams& p, Rng& rng,
                        std::vector<Edit>& edits,
                        std::vector<std::string>& flags);
// Deterministic single-sentence rotation around h (1-based, h=1 identity).
std::vector<std::string> rotate_tokens(const std::vector<std::string>& tokens,
                                       int h);

void rand_shuffle_train(WorkDoc& w, const NoiseParams& p, Rng& rng,
                        std::vector<Edit>& edits,
                        std::vector<std::string>& flags);
void complete_shuffle_train(WorkDoc& w, Rng& rng, std::vector<Edit>& edits,
                            std::vector<std::string>& flags);
void templatize(WorkDoc& w, const Document& doc, const NoiseResources& res,
                const NoiseParams& p, Rng& rng, bool object_priority,
                std::vector<Edit>& edits, std::vector<std::string>& flags);
void synonym_substitute(WorkDoc& w, const Document& doc,
                        const NoiseResources& res, const NoiseParams& p,
                        Rng& rng, bool object_priority, std::vector<Edit>& edits,
                        std::vector<std::string>& flags);
void rand_delete(WorkDoc& w, const Document& doc, const NoiseResources& res,
                 const NoiseParams& p, Rng& rng, std::vector<Edit>& edits,
                 std::vector<std::string>& flags);
void word_insert(WorkDoc& w, const Document& doc, const NoiseResources& res,
                 const NoiseParams& p, Rng& rng, std::vector<Edit>& edits,
                 std::vector<std::string>& flags);
void sent_permute_infer(WorkDoc& w, const Document& doc,
                        const NoiseResources& res, std::vector<Edit>& edits,
                        std::vector<std::string>& flags);
void phrase_shuffle_infer(WorkDoc& w, const Document& doc,
                          const NoiseResources& res, std::vector<Edit>& edits,
                          std::vector<std::string>& flags);

// Candidate rotations for one sentence at preposition positions; used by
// sent_permute_infer and exposed for the brute-force tests.
std::vector<int> adp_rotation_points(const Document& doc, SentenceSpan span,
                                     const WorkDoc& w);

// Prompt assembly. Category words in canonical order replace < shuffle < fix;
// empty category is plain denoising ("paraphrase:") or the passive prompt.
std::string assign_prompt(const std::set<NoiseCategory>& categories,
                          bool passive);
// Inverse used by prompt-consistency filtering. Throws ConfigError on
// unknown prompt words.
std::set<NoiseCategory> parse_prompt_categories(const std::string& prompt);

// Applies the combination's functions in order. Deterministic given
// (doc, combo, seed).
NoisedSample apply_combination(const Document& doc,
                               const NoiseCombination& combo, uint64_t seed,
                               const NoiseResources& res, bool passive = false);

// Deterministically flags floor(fraction * n) documents for passive targets.
std::vector<bool> select_passive_targets(const std::vector<Document>& corpus,
                                         double fraction, uint64_t seed);

// Best-effort rule-based passivizer for simple transitive SVO clauses.
// Returns nullopt when the pattern is not found.
std::optional<std::string> passivize_fallback(const Document& doc);

// Combination registry.
class CombinationRegistry {
 public:
  static CombinationRegistry from_file(const std::string& path,
                                       const NoiseParams& defaults);
  static CombinationRegistry from_json(const nlohmann::json& j,
                                       const NoiseParams& defaults);
  // The built-in bank: ten training and ten inference combinations.
  static CombinationRegistry builtin(const NoiseParams& defaults);

  const std::vector<NoiseCombination>& combinations() const { return combos_; }
  std::vector<const NoiseCombination*> for_phase(Phase phase) const;
  const NoiseCombination* find(std::string_view id) const;

  // Weighted categorical draw among the given phase's combinations.
  const NoiseCombination& sample(Phase phase, Rng& rng) const;

 private:
  std::vector<NoiseCombination> combos_;
};

// Per-document seed derivation; keeps parallel runs bit-identical.
inline uint64_t document_seed(uint64_t global_seed, std::string_view doc_id) {
  return global_seed ^ fnv1a64(doc_id);
}

}  // namespace parakit

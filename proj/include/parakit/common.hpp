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

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace parakit {

// Exit codes used by the CLI: config errors map to 2, data errors to 3,
// scorer-backend errors to 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScorerError : public std::runtime_error {
 public:
  ScorerError(const std::string& msg, int attempts, bool retryable)
      : std::runtime_error(msg), attempts(attempts), retryable(retryable) {}
  int attempts;
  bool retryable;
};

class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(const std::string& msg, int edit_index)
      : std::runtime_error(msg), edit_index(edit_index) {}
  int edit_index;
};

// FNV-1a. Stable across platforms; used to derive per-document seeds so
// worker count cannot change outputs.
inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard;
// the bounded draws below avoid std::uniform_int_distribution, whose
// mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Uniform draw from [0, n). Rejection sampling keeps it unbiased.
  size_t uniform(size_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<size_t>(x % n);
  }

  // Uniform real in [0, 1).
  double real() { return (gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real() < p; }

  // Fisher-Yates; element type agnostic.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

inline uint64_t derive_seed(uint64_t global_seed, std::string_view key) {
  return global_seed ^ fnv1a64(key);
}

std::string lowercase(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace parakit

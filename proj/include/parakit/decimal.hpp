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

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace parakit {

// Exact decimal value: digits * 10^exponent, fully normalized so that equal
// values have identical representations ("3,000" == "3000", "1.250" == "1.25").
// Numeracy comparisons must never go through floating point.
class Decimal {
 public:
  Decimal() = default;

  // Accepts plain digit strings with an optional single '.', e.g. "3000",
  // "1.25", ".5". Commas and currency/percent symbols are the caller's job.
  static std::optional<Decimal> parse(std::string_view s);

  // Canonical human-readable form: "3000", "1.25", "0.5", "0".
  std::string str() const;
  double to_double() const;

  bool operator==(const Decimal& other) const {
    return digits_ == other.digits_ && exp_ == other.exp_;
  }
  std::strong_ordering operator<=>(const Decimal& other) const;

 private:
  // digits_ has no leading or trailing zeros; "0" is represented by an empty
  // digit string with exp_ 0.
  std::string digits_;
  int exp_ = 0;
};

}  // namespace parakit

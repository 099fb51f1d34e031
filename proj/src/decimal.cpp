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

#include "parakit/decimal.hpp"

#include <cctype>
#include <cstdlib>

namespace parakit {

std::optional<Decimal> Decimal::parse(std::string_view s) {
  std::string digits;
  int frac_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;

  Decimal d;
  d.exp_ = -frac_digits;
  // Normalize: strip leading zeros, then trailing zeros (adjusting exp).
  size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) {
    d.digits_.clear();
    d.exp_ = 0;
    return d;
  }
  digits.erase(0, first);
  while (!digits.empty() && digits.back() == '0') {
    digits.pop_back();
    ++d.exp_;
  }
  d.digits_ = digits;
  return d;
}

std::string Decimal::str() const {
  if (digits_.empty()) return "0";
  if (exp_ >= 0) return digits_ + std::string(exp_, '0');
  int frac = -exp_;
  if (static_cast<int>(digits_.size()) > frac) {
    return digits_.substr(0, digits_.size() - frac) + "." +
           digits_.substr(digits_.size() - frac);
  }
  return "0." + std::string(frac - digits_.size(), '0') + digits_;
}

double Decimal::to_double() const { return std::strtod(str().c_str(), nullptr); }

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  // All values are nonnegative. Compare magnitude order first, then digits.
  if (digits_.empty() || other.digits_.empty()) {
    return digits_.size() <=> other.digits_.size();  // empty == zero
  }
  long mag_a = exp_ + static_cast<long>(digits_.size());
  long mag_b = other.exp_ + static_cast<long>(other.digits_.size());
  if (mag_a != mag_b) return mag_a <=> mag_b;
  return digits_.compare(other.digits_) <=> 0;
}

}  // namespace parakit

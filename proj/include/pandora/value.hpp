// Copyright 2026 The Authors.
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
#include <utility>

#include "pandora/rational.hpp"

namespace pandora {

/// A box value: either a nonnegative rational or an infinite sentinel that
/// carries a tag. Infinite values are larger than every finite one; two
/// infinite values have equal magnitude and differ only by tag.
class Value {
 public:
  Value() = default;

  static Value finite(Rational q) {
    if (q < 0) throw Error("negative box value " + to_string(q));
    Value v;
    v.q_ = std::move(q);
    return v;
  }
  static Value infinite(std::string tag) {
    Value v;
    v.infinite_ = true;
    v.tag_ = std::move(tag);
    return v;
  }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  const Rational& number() const {
    if (infinite_) throw Error("value inf:" + tag_ + " has no finite magnitude");
    return q_;
  }
  const std::string& tag() const { return tag_; }

  /// Text form used both in files and as an outcome label.
  std::string label() const { return infinite_ ? "inf:" + tag_ : to_string(q_); }

  static Value parse(std::string_view text) {
    if (text.substr(0, 4) == "inf:") return infinite(std::string(text.substr(4)));
    return finite(parse_rational(text));
  }

  /// True when the value is finite and at most t.
  bool at_most(const Rational& t) const { return !infinite_ && q_ <= t; }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.infinite_ != b.infinite_) return false;
    return a.infinite_ ? a.tag_ == b.tag_ : a.q_ == b.q_;
  }

  /// Magnitude order; tags are ignored.
  friend bool magnitude_less(const Value& a, const Value& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.q_ < b.q_;
  }

 private:
  bool infinite_ = false;
  Rational q_ = 0;
  std::string tag_;
};

}  // namespace pandora

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

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace pandora {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A policy could not be evaluated because some scenario never reaches a
/// feasible terminal (no finite value, uncovered set, unidentified leaf...).
class InfeasiblePolicy : public Error {
 public:
  using Error::Error;
};

/// Exact-search or state-space budget exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Arbitrary-precision rational used for every probability, cost and exact
/// expected cost.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline Integer numerator_of(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator_of(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) { return q.str(); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Parses "p", "-p" or "p/q" with decimal digits. Decimal points are also
/// accepted ("0.25") and converted exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw Error("malformed rational '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    Integer d{std::string(den)};
    if (d == 0) return fail();
    result = Rational(Integer(std::string(num)), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) return fail();
    Integer scale = boost::multiprecision::pow(Integer(10),
                                               static_cast<unsigned>(frac.size()));
    result = Rational(Integer(std::string(whole)) * scale +
                          Integer(std::string(frac)),
                      scale);
  } else {
    if (!all_digits(body)) return fail();
    result = Rational(Integer(std::string(body)));
  }
  return negative ? Rational(-result) : result;
}

inline Rational sum(const std::vector<Rational>& xs) {
  Rational total = 0;
  for (const auto& x : xs) total += x;
  return total;
}

/// Smallest integer >= q.
inline Integer ceil_of(const Rational& q) {
  Integer num = numerator_of(q);
  Integer den = denominator_of(q);
  Integer quotient = num / den;  // truncates toward zero
  if (quotient * den != num && q > 0) quotient += 1;
  return quotient;
}

}  // namespace pandora

// Copyright 2026 The pmatch Authors
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

#ifndef PMATCH_NUMBERS_HPP
#define PMATCH_NUMBERS_HPP

// Exact number types. Every correctness path in the library works over
// these; floating point only appears in human-facing summaries.

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace pmatch {

using Rational = mpq_class;
using Integer = mpz_class;

/// p/q in lowest terms. The two-argument mpq_class constructor does not
/// canonicalize, so build fractions through this.
inline Rational ratio(const Integer& p, const Integer& q) {
  Rational out(p, q);
  out.canonicalize();
  return out;
}

/// Parses "p", "p/q", "-p/q" or a decimal such as "1.25". Exponent
/// notation is rejected. Throws std::invalid_argument on malformed text or
/// a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" otherwise (lowest terms).
std::string format_rational(const Rational& value);

/// Rational power with integer exponent (negative allowed for nonzero base).
Rational pow_rational(const Rational& base, long exponent);

double to_double(const Rational& value);

/// An element a + b*sqrt(2) of Q(sqrt 2), compared and ordered exactly.
/// Used for 3+2*sqrt(2), gamma = sqrt(2)/2 and the local-policy constants.
class Surd {
 public:
  Surd() = default;
  Surd(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
  Surd(long a) : a_(a) {}                 // NOLINT(google-explicit-constructor)
  Surd(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static Surd sqrt2() { return Surd(Rational(0), Rational(1)); }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }
  bool is_rational() const { return b_ == 0; }

  /// -1, 0 or +1, decided without approximation.
  int sign() const;

  Surd conjugate() const { return Surd(a_, -b_); }
  Surd inverse() const;

  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  Surd& operator*=(const Surd& o);
  Surd& operator/=(const Surd& o);

  friend Surd operator+(Surd l, const Surd& r) { return l += r; }
  friend Surd operator-(Surd l, const Surd& r) { return l -= r; }
  friend Surd operator*(Surd l, const Surd& r) { return l *= r; }
  friend Surd operator/(Surd l, const Surd& r) { return l /= r; }
  Surd operator-() const { return Surd(-a_, -b_); }

  friend bool operator==(const Surd& l, const Surd& r) {
    return l.a_ == r.a_ && l.b_ == r.b_;
  }
  friend std::strong_ordering operator<=>(const Surd& l, const Surd& r);

  double approx() const;

 private:
  Rational a_{0};
  Rational b_{0};
};

Surd pow_surd(const Surd& base, unsigned exponent);

/// Largest integer n with n <= x.
Integer floor_surd(const Surd& x);

/// Largest p/denominator <= x, and smallest p/denominator >= x.
Rational rational_below(const Surd& x, const Integer& denominator);
Rational rational_above(const Surd& x, const Integer& denominator);

/// Accepts rationals ("5/2"), "sqrt2", "sqrt2/2", "3*sqrt2", "1/2*sqrt2",
/// "3+2*sqrt2", "3-sqrt2/4" and similar a +/- b*sqrt2 spellings.
Surd parse_surd(std::string_view text);

/// "a", "b*sqrt2" or "a+b*sqrt2" with canonical rationals.
std::string format_surd(const Surd& value);

std::ostream& operator<<(std::ostream& os, const Surd& value);

/// 3 + 2*sqrt(2), McGregor's optimal deterministic ratio.
inline Surd alpha_surd() { return Surd(Rational(3), Rational(2)); }

}  // namespace pmatch

#endif  // PMATCH_NUMBERS_HPP

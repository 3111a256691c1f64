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

#include "pmatch/numbers.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace pmatch {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    const Integer d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    out = Rational(Integer(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      bad_number(text);
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    std::string digits = std::string(whole.empty() ? "0" : whole) + std::string(frac);
    out = Rational(Integer(digits), scale);
  } else {
    if (!all_digits(s)) bad_number(text);
    out = Rational(Integer(std::string(s)));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string format_rational(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Rational pow_rational(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return pow_rational(Rational(1) / base, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

double to_double(const Rational& value) { return value.get_d(); }

int Surd::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sa >= 0 && sb >= 0) return (sa > 0 || sb > 0) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  // Opposite signs: compare a^2 against 2 b^2.
  const Rational a2 = a_ * a_;
  const Rational b2 = 2 * b_ * b_;
  const int c = cmp(a2, b2);
  return sa > 0 ? c : -c;
}

Surd Surd::inverse() const {
  const Rational norm = a_ * a_ - 2 * b_ * b_;
  if (norm == 0) throw std::domain_error("inverse of zero surd");
  return Surd(a_ / norm, -b_ / norm);
}

Surd& Surd::operator+=(const Surd& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

Surd& Surd::operator-=(const Surd& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

Surd& Surd::operator*=(const Surd& o) {
  Rational a = a_ * o.a_ + 2 * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

Surd& Surd::operator/=(const Surd& o) { return *this *= o.inverse(); }

std::strong_ordering operator<=>(const Surd& l, const Surd& r) {
  const int s = (l - r).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double Surd::approx() const { return a_.get_d() + b_.get_d() * std::sqrt(2.0); }

Surd pow_surd(const Surd& base, unsigned exponent) {
  Surd out(1);
  Surd b = base;
  while (exponent != 0) {
    if (exponent & 1U) out *= b;
    b *= b;
    exponent >>= 1U;
  }
  return out;
}

Integer floor_surd(const Surd& x) {
  // floor(a + b*sqrt2) = floor(a) + floor(b*sqrt2 + frac(a)); b*sqrt2 is
  // bracketed with an integer square root, then corrected by exact compares.
  Integer n;
  {
    // isqrt(2 * b^2 * D^2) / D brackets |b|*sqrt2 from below.
    const Integer den = x.sqrt2_part().get_den();
    const Integer num = abs(x.sqrt2_part().get_num());
    Integer sq = 2 * num * num;
    Integer root;
    mpz_sqrt(root.get_mpz_t(), sq.get_mpz_t());
    Rational approx_b = ratio(root, den);
    if (x.sqrt2_part() < 0) approx_b = -approx_b;
    Rational guess = x.rational_part() + approx_b;
    mpz_fdiv_q(n.get_mpz_t(), guess.get_num_mpz_t(), guess.get_den_mpz_t());
  }
  while (Surd(Rational(n)) > x) --n;
  while (Surd(Rational(n + 1)) <= x) ++n;
  return n;
}

Rational rational_below(const Surd& x, const Integer& denominator) {
  if (denominator <= 0) throw std::invalid_argument("denominator must be positive");
  Rational out(floor_surd(x * Surd(Rational(denominator))), denominator);
  out.canonicalize();
  return out;
}

Rational rational_above(const Surd& x, const Integer& denominator) {
  Rational out = -rational_below(-x, denominator);
  out.canonicalize();
  return out;
}

namespace {

// Parses one signed term: rational, "sqrt2", "q*sqrt2", "sqrt2/d",
// "q*sqrt2/d" (the last two divide the sqrt2 coefficient).
Surd parse_term(std::string_view t, std::string_view whole) {
  t = trim(t);
  if (t.empty()) bad_number(whole);
  const auto pos = t.find("sqrt2");
  if (pos == std::string_view::npos) return Surd(parse_rational(t));
  std::string_view coef = trim(t.substr(0, pos));
  std::string_view tail = trim(t.substr(pos + 5));
  Rational c(1);
  if (!coef.empty()) {
    if (coef.back() != '*') bad_number(whole);
    coef.remove_suffix(1);
    c = parse_rational(coef);
  }
  if (!tail.empty()) {
    if (tail.front() != '/') bad_number(whole);
    Rational d = parse_rational(tail.substr(1));
    if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(whole) + "'");
    c /= d;
  }
  return Surd(Rational(0), c);
}

}  // namespace

Surd parse_surd(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) bad_number(text);
  Surd total;
  std::size_t start = 0;
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    start = 1;
  }
  for (std::size_t i = start; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '+' || s[i] == '-') {
      Surd term = parse_term(s.substr(start, i - start), text);
      total += negative ? -term : term;
      if (i < s.size()) negative = s[i] == '-';
      start = i + 1;
    }
  }
  return total;
}

std::string format_surd(const Surd& value) {
  const Rational& a = value.rational_part();
  const Rational& b = value.sqrt2_part();
  if (b == 0) return format_rational(a);
  std::string sq = format_rational(b) + "*sqrt2";
  if (a == 0) return sq;
  return format_rational(a) + (b > 0 ? "+" : "") + sq;
}

std::ostream& operator<<(std::ostream& os, const Surd& value) {
  return os << format_surd(value);
}

}  // namespace pmatch

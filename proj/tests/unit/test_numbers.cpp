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

#include <doctest.h>

#include <cmath>
#include <random>

#include "pmatch/numbers.hpp"

using namespace pmatch;

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-3/6") == ratio(-1, 2));
  CHECK(parse_rational("2.25") == ratio(9, 4));
  CHECK(parse_rational("0.1") == ratio(1, 10));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("format_rational is canonical") {
  CHECK(format_rational(ratio(6, 4)) == "3/2");
  CHECK(format_rational(ratio(4, 2)) == "2");
  CHECK(format_rational(parse_rational(format_rational(ratio(-22, 7)))) == "-22/7");
}

TEST_CASE("pow_rational handles negative exponents") {
  CHECK(pow_rational(ratio(2, 3), 3) == ratio(8, 27));
  CHECK(pow_rational(Rational(2), -2) == ratio(1, 4));
  CHECK(pow_rational(Rational(5), 0) == 1);
}

TEST_CASE("surd sign matches a long double oracle away from zero") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int t = 0; t < 2000; ++t) {
    const Rational a = ratio(d(rng), 1 + (d(rng) + 50) % 9);
    const Rational b = ratio(d(rng), 1 + (d(rng) + 50) % 7);
    const long double approx = a.get_d() + b.get_d() * std::sqrt(2.0L);
    if (std::fabs(approx) < 1e-9L) continue;
    CHECK(Surd(a, b).sign() == (approx > 0 ? 1 : -1));
  }
}

TEST_CASE("surd arithmetic") {
  const Surd r2 = Surd::sqrt2();
  CHECK(r2 * r2 == Surd(2));
  const Surd alpha = alpha_surd();
  // (1 + sqrt2)^2 = 3 + 2 sqrt2
  CHECK(pow_surd(Surd(1) + r2, 2) == alpha);
  CHECK(alpha * alpha.inverse() == Surd(1));
  CHECK(alpha.conjugate() * alpha == Surd(1));
  CHECK_FALSE(Surd(ratio(3, 2)) < r2);
  CHECK(Surd(ratio(7, 5)) < r2);
  CHECK(Surd(ratio(17, 12)) > r2);
  CHECK(r2 / Surd(2) == Surd(Rational(0), ratio(1, 2)));
}

TEST_CASE("floor and rational brackets of surds") {
  CHECK(floor_surd(alpha_surd()) == 5);
  CHECK(floor_surd(-Surd::sqrt2()) == -2);
  CHECK(floor_surd(Surd(4)) == 4);
  const Surd x = Surd::sqrt2();
  const Rational lo = rational_below(x, 1000);
  const Rational hi = rational_above(x, 1000);
  CHECK(lo == ratio(1414, 1000));
  CHECK(hi == ratio(1415, 1000));
  CHECK(Surd(lo) <= x);
  CHECK(Surd(hi) >= x);
  CHECK(rational_below(Surd(3), 7) == 3);
  CHECK(rational_above(Surd(3), 7) == 3);
}

TEST_CASE("parse_surd and format_surd round trip") {
  CHECK(parse_surd("sqrt2/2") == Surd(Rational(0), ratio(1, 2)));
  CHECK(parse_surd("3+2*sqrt2") == alpha_surd());
  CHECK(parse_surd("1/2*sqrt2") == Surd(Rational(0), ratio(1, 2)));
  CHECK(parse_surd("3-sqrt2/4") == Surd(Rational(3), ratio(-1, 4)));
  CHECK(parse_surd("5/2") == Surd(ratio(5, 2)));
  for (const char* text : {"3+2*sqrt2", "sqrt2/2", "-1/3", "2-7/3*sqrt2"}) {
    const Surd s = parse_surd(text);
    CHECK(parse_surd(format_surd(s)) == s);
  }
  CHECK_THROWS_AS(parse_surd("sqrt3"), std::invalid_argument);
}

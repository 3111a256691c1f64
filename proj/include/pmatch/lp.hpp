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

#ifndef PMATCH_LP_HPP
#define PMATCH_LP_HPP

#include <optional>
#include <vector>

#include "pmatch/numbers.hpp"

namespace pmatch {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Some x >= 0 with a x = b, by Phase I of the simplex method on a dense
/// rational tableau with Bland's rule, or nullopt if none exists.
std::optional<std::vector<Rational>> find_nonnegative_solution(const RationalMatrix& a,
                                                               const std::vector<Rational>& b);

/// Outcome for the system g x <= h, x >= 0. Exactly one of point / farkas
/// is filled: farkas is lambda >= 0 with lambda^T g >= 0 and lambda^T h < 0.
struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> point;
  std::vector<Rational> farkas;
};

FeasibilityResult solve_inequalities(const RationalMatrix& g, const std::vector<Rational>& h);

bool verify_point(const RationalMatrix& g, const std::vector<Rational>& h, const std::vector<Rational>& x);
bool verify_farkas(const RationalMatrix& g, const std::vector<Rational>& h, const std::vector<Rational>& lambda);

}  // namespace pmatch

#endif  // PMATCH_LP_HPP

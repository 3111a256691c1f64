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

#ifndef PMATCH_ORACLE_HPP
#define PMATCH_ORACLE_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "pmatch/graph.hpp"

namespace pmatch {

struct OfflineResult {
  Rational value{0};
  std::vector<EdgeId> witness;  // sorted edge ids
};

struct OracleOptions {
  std::size_t max_edges = 30;  // brute-force guard
};

class CycleDetected : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Maximum weight matching by branch and bound over edges in id order.
/// Among optimal matchings the lexicographically smallest sorted id list
/// is returned. Throws GuardExceeded above options.max_edges edges.
OfflineResult brute_force_opt(std::span<const Edge> edges, OracleOptions options = {});

/// Maximum weight matching of a forest by dynamic programming. Throws
/// CycleDetected if the edges contain a cycle.
OfflineResult tree_opt_dp(std::span<const Edge> edges);

/// Maximum cardinality of a matching in a disjoint union of paths: the sum
/// of ceil(n/2) over components with n edges. Throws CycleDetected on a
/// cycle and ContractViolation on a vertex of degree > 2.
long path_collection_cardinality(std::span<const Edge> edges);

bool is_forest(std::span<const Edge> edges);

/// Forest DP when the edges are acyclic, brute force otherwise.
OfflineResult offline_opt(std::span<const Edge> edges, OracleOptions options = {});

/// Entry t (0-based) is the optimum of the first t+1 events.
std::vector<Rational> opt_per_prefix(const EdgeStream& stream, OracleOptions options = {});

}  // namespace pmatch

#endif  // PMATCH_ORACLE_HPP

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

#ifndef PMATCH_CERTIFICATES_HPP
#define PMATCH_CERTIFICATES_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pmatch/graph.hpp"
#include "pmatch/numbers.hpp"

namespace pmatch {

/// One assertion outcome, printed as "check <name> <pass|fail> <detail>".
struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

std::string format_check(const Check& check);

/// a / b > target, exactly. Precondition: b > 0.
bool exceeds_ratio(const Rational& a, const Rational& b, const Surd& target);

// ---------------------------------------------------------------------------
// McGregor primal-dual trace

struct PdStep {
  std::size_t index = 0;  // 1-based event index
  EdgeId edge = 0;
  bool accepted = false;
  Rational delta_primal{0};
  Surd delta_dual;
  bool dual_feasible = true;     // y_u + y_v >= w for every revealed edge
  bool matched_bound_ok = true;  // both ends of every matched edge carry y >= (1+gamma) w
  bool step_ratio_ok = true;     // delta dual <= (1+gamma)(2+1/gamma) delta primal
  bool monotone_ok = true;       // no dual value went down
};

struct PdViolation {
  std::size_t step = 0;
  std::string invariant;
  EdgeId witness = 0;
};

struct PdTraceReport {
  std::vector<PdStep> steps;
  std::vector<PdViolation> violations;
  Rational primal{0};
  Surd dual;
  Surd bound;  // (1+gamma)(2+1/gamma)
  std::map<VertexId, Surd> y;
  bool ok() const { return violations.empty(); }
};

/// Replays McGregor's rule with dual updates y = max(y, (1+gamma) w) on
/// acceptance and checks the three invariants after every event.
PdTraceReport pd_trace_mcgregor(const EdgeStream& stream, const Surd& gamma);

/// (1+gamma)(2+1/gamma).
Surd mcgregor_ratio_bound(const Surd& gamma);

// ---------------------------------------------------------------------------
// Ranks

using RankMap = std::map<VertexId, int>;

/// rank(v) = min over neighbours v_i of the largest distance from v to a
/// leaf of the tree once edge (v, v_i) is removed. Throws
/// std::invalid_argument on an empty, cyclic or disconnected input.
RankMap compute_ranks(std::span<const Edge> tree);

/// Vertices where rank differs from 1 + second highest neighbour rank
/// (leaves: 0). Empty when the recurrence holds everywhere.
std::vector<VertexId> rank_recurrence_mismatches(std::span<const Edge> tree, const RankMap& ranks);

// ---------------------------------------------------------------------------
// Edge classification and structural lemmas

struct EdgeClass {
  EdgeId id = 0;
  int multiplicity = 0;      // matchings containing the edge
  int coverage = 0;          // multiplicity plus multiplicities of adjacent edges
  int covering = 0;          // distinct matchings covering u or v
  bool internal = false;     // other edges at both endpoints
  bool leaf = false;         // an endpoint of degree 1
  bool bad = false;          // covering == k - 1
};

/// Per tree edge, in the order given.
std::vector<EdgeClass> classify_edges(std::span<const Edge> tree, std::span<const Matching> matchings);

struct LemmaViolation {
  std::string kind;
  std::vector<EdgeId> edges;
  std::vector<VertexId> vertices;
  std::string detail;
};

/// (a) internal edges have coverage >= 4; (b) no three consecutive vertices
/// p, q, r each carry a bad edge (three distinct bad edges).
std::vector<LemmaViolation> check_lemma_internal(std::span<const Edge> tree, std::span<const Matching> matchings);

/// Degree-3 trees with three matchings: no edge with distinct bad edges at
/// both ends, at most one edge at a degree-3 vertex with a bad neighbour,
/// and no edge outside all matchings.
std::vector<LemmaViolation> check_deg3_lemmas(std::span<const Edge> tree, std::span<const Matching> matchings);

/// Runs barely4 over the stream and reports the 1-based prefixes whose state
/// has an internal edge covered fewer than four times.
std::vector<std::size_t> internal_coverage_failing_prefixes(const EdgeStream& stream);

// ---------------------------------------------------------------------------
// Dual charge feasibility

struct ChargeShare {
  EdgeId edge = 0;
  int copy = 0;  // 0-based copy among the matchings holding the edge
  Rational to_u;
  Rational to_v;
};

struct ChargeResult {
  bool feasible = false;
  Rational target;                  // 2 + epsilon
  std::vector<ChargeShare> shares;  // feasible: one per matched copy
  std::map<VertexId, Rational> y;
  Rational min_margin;              // min over edges of y_u + y_v - target
  std::vector<Rational> farkas;     // infeasible: one multiplier per constraint row
  bool certificate_verified = false;
};

inline constexpr std::size_t kChargeEdgeGuard = 64;

/// Whether each matched copy's unit charge can be split between its
/// endpoints so that y_u + y_v >= 2 + epsilon on every tree edge. Decided
/// exactly; a witness or Farkas certificate is re-verified before return.
ChargeResult charge_feasibility(std::span<const Edge> tree, std::span<const Matching> matchings,
                                const Rational& epsilon = ratio(1, 7));

/// Re-checks a feasible result's shares against the constraints.
bool verify_charge_witness(std::span<const Edge> tree, std::span<const Matching> matchings,
                           const ChargeResult& result);

/// min over tree edges of (y_u + y_v) / k when every matched copy gives 1/2
/// to each endpoint.
Rational half_split_min(std::span<const Edge> tree, std::span<const Matching> matchings);

}  // namespace pmatch

#endif  // PMATCH_CERTIFICATES_HPP

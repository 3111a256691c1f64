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

#ifndef PMATCH_GRAPH_HPP
#define PMATCH_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmatch/numbers.hpp"

namespace pmatch {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr VertexId kMaxVertexId = (1 << 26) - 1;

/// Raised when a caller breaks a documented precondition of a mutation.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an input exceeds a desk-scale size guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  Rational weight{1};

  bool touches(VertexId x) const { return u == x || v == x; }
  VertexId other(VertexId x) const { return x == u ? v : u; }
  bool adjacent_to(const Edge& o) const {
    return id != o.id && (touches(o.u) || touches(o.v));
  }
};

enum class StreamKind {
  kGeneral,
  kPathCollection,
  kGrowingTree,
  kGrowingTreeDeg3,
  kThetaStructured,
};

struct StreamClass {
  StreamKind kind = StreamKind::kGeneral;
  Rational theta{0};  // meaningful for kThetaStructured only

  static StreamClass general() { return {}; }
  static StreamClass paths() { return {StreamKind::kPathCollection, Rational(0)}; }
  static StreamClass growing_tree() { return {StreamKind::kGrowingTree, Rational(0)}; }
  static StreamClass growing_tree_deg3() { return {StreamKind::kGrowingTreeDeg3, Rational(0)}; }
  static StreamClass theta_structured(Rational theta) {
    return {StreamKind::kThetaStructured, std::move(theta)};
  }

  friend bool operator==(const StreamClass&, const StreamClass&) = default;
};

std::string stream_kind_name(StreamKind kind);
StreamKind parse_stream_kind(const std::string& name);

/// The online input: edges in reveal order plus the class it claims.
struct EdgeStream {
  std::vector<Edge> events;
  StreamClass declared_class;

  /// Appends an edge with the next dense id.
  const Edge& push(VertexId u, VertexId v, Rational weight = Rational(1));
  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }

  /// The first n events (same class).
  EdgeStream prefix(std::size_t n) const;
};

struct ValidationReport {
  bool ok = true;
  std::size_t event_index = 0;  // 1-based index of the first violation
  std::string reason;
};

/// Scans every prefix against the declared class and reports the earliest
/// violating event. Never throws on bad content.
ValidationReport validate_stream(const EdgeStream& stream);

/// A matching over revealed edges, with a per-vertex cover map.
class Matching {
 public:
  bool contains(EdgeId id) const;
  std::optional<EdgeId> edge_at(VertexId x) const;
  bool covers(VertexId x) const { return edge_at(x).has_value(); }

  /// Distinct matched edges sharing an endpoint with e (at most two).
  std::vector<EdgeId> conflicts(const Edge& e) const;

  /// Precondition: neither endpoint covered.
  void add(const Edge& e);
  /// Precondition: id is a member.
  void remove(EdgeId id);

  const Edge& edge(EdgeId id) const;
  std::size_t size() const { return edges_.size(); }
  const Rational& weight() const { return weight_; }

  /// Members in increasing id order.
  std::vector<EdgeId> edge_ids() const;
  const std::vector<Edge>& members() const { return edges_; }

  friend bool operator==(const Matching& l, const Matching& r) {
    return l.edge_ids() == r.edge_ids();
  }

 private:
  std::vector<Edge> edges_;
  std::vector<EdgeId> cover_;  // vertex -> edge id, -1 when free
  std::vector<std::int32_t> slot_;  // edge id -> index in edges_, -1 when absent
  Rational weight_{0};
};

/// Checks that no two edges share a vertex.
bool is_matching(std::span<const Edge> edges);

/// k matchings plus the incrementally maintained sum over unordered pairs
/// i < j of |M_i intersect M_j|.
class MultiMatchingState {
 public:
  explicit MultiMatchingState(int k);

  int k() const { return static_cast<int>(matchings_.size()); }
  const Matching& matching(int i) const { return matchings_.at(static_cast<std::size_t>(i)); }
  std::span<const Matching> matchings() const { return matchings_; }

  long overlap() const { return overlap_; }
  /// Number of matchings containing the edge.
  int multiplicity(EdgeId id) const;

  /// Adds e to M_i after evicting exactly the listed edges. The evicted list
  /// must equal the set of conflicts of e in M_i; anything else throws
  /// ContractViolation before the state is touched.
  void apply_accept(int i, const Edge& e, std::span<const EdgeId> evicted = {});

  /// Removes a member of M_i without adding anything.
  void evict(int i, EdgeId id);

  /// Overlap change that apply_accept(i, e, conflicts) would cause.
  long overlap_delta(int i, const Edge& e) const;

  /// Reference value recomputed from the matchings directly.
  long recompute_overlap() const;

 private:
  std::vector<Matching> matchings_;
  std::vector<int> multiplicity_;  // by edge id
  long overlap_ = 0;
};

}  // namespace pmatch

#endif  // PMATCH_GRAPH_HPP

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

#include "pmatch/graph.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace pmatch {

std::string stream_kind_name(StreamKind kind) {
  switch (kind) {
    case StreamKind::kGeneral: return "general";
    case StreamKind::kPathCollection: return "path_collection";
    case StreamKind::kGrowingTree: return "growing_tree";
    case StreamKind::kGrowingTreeDeg3: return "growing_tree_deg3";
    case StreamKind::kThetaStructured: return "theta_structured";
  }
  return "general";
}

StreamKind parse_stream_kind(const std::string& name) {
  if (name == "general") return StreamKind::kGeneral;
  if (name == "path_collection") return StreamKind::kPathCollection;
  if (name == "growing_tree") return StreamKind::kGrowingTree;
  if (name == "growing_tree_deg3") return StreamKind::kGrowingTreeDeg3;
  if (name == "theta_structured") return StreamKind::kThetaStructured;
  throw std::invalid_argument("unknown stream class '" + name + "'");
}

const Edge& EdgeStream::push(VertexId u, VertexId v, Rational weight) {
  events.push_back(Edge{static_cast<EdgeId>(events.size()), u, v, std::move(weight)});
  return events.back();
}

EdgeStream EdgeStream::prefix(std::size_t n) const {
  EdgeStream out;
  out.declared_class = declared_class;
  out.events.assign(events.begin(), events.begin() + static_cast<std::ptrdiff_t>(std::min(n, events.size())));
  return out;
}

namespace {

bool is_integer_power(Rational w, Rational theta) {
  if (w <= 0 || theta <= 0 || theta == 1) return false;
  if (theta < 1) theta = 1 / theta;
  while (w > 1) w /= theta;
  while (w < 1) w *= theta;
  return w == 1;
}

struct Dsu {
  std::unordered_map<VertexId, VertexId> parent;
  VertexId find(VertexId x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent.emplace(x, x);
      return x;
    }
    if (it->second == x) return x;
    VertexId root = find(it->second);
    parent[x] = root;
    return root;
  }
  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

ValidationReport validate_stream(const EdgeStream& stream) {
  const StreamClass& cls = stream.declared_class;
  auto fail = [](std::size_t index, std::string reason) {
    return ValidationReport{false, index, std::move(reason)};
  };
  if (cls.kind == StreamKind::kThetaStructured && (cls.theta <= 0 || cls.theta == 1)) {
    return fail(0, "theta must be positive and different from 1");
  }
  std::unordered_set<EdgeId> ids;
  std::unordered_set<std::uint64_t> pairs;
  std::unordered_map<VertexId, int> degree;
  Dsu dsu;
  for (std::size_t t = 0; t < stream.events.size(); ++t) {
    const Edge& e = stream.events[t];
    const std::size_t index = t + 1;
    if (e.u < 0 || e.v < 0 || e.u > kMaxVertexId || e.v > kMaxVertexId) {
      return fail(index, "vertex id out of range");
    }
    if (e.u == e.v) return fail(index, "self loop");
    if (e.weight < 0) return fail(index, "negative weight");
    if (e.id < 0 || !ids.insert(e.id).second) return fail(index, "duplicate or negative edge id");
    const auto lo = static_cast<std::uint64_t>(std::min(e.u, e.v));
    const auto hi = static_cast<std::uint64_t>(std::max(e.u, e.v));
    if (!pairs.insert((lo << 32U) | hi).second) return fail(index, "parallel edge");

    const bool seen_u = degree.contains(e.u);
    const bool seen_v = degree.contains(e.v);
    const int du = ++degree[e.u];
    const int dv = ++degree[e.v];
    const bool merged = dsu.unite(e.u, e.v);

    switch (cls.kind) {
      case StreamKind::kGeneral:
        break;
      case StreamKind::kThetaStructured:
        if (!is_integer_power(e.weight, cls.theta)) {
          return fail(index, "weight is not an integer power of theta");
        }
        break;
      case StreamKind::kPathCollection:
        if (du > 2 || dv > 2) return fail(index, "vertex degree exceeds 2");
        if (!merged) return fail(index, "edge closes a cycle");
        break;
      case StreamKind::kGrowingTreeDeg3:
        if (du > 3 || dv > 3) return fail(index, "vertex degree exceeds 3");
        [[fallthrough]];
      case StreamKind::kGrowingTree:
        if (t > 0 && seen_u == seen_v) {
          return fail(index, seen_u ? "no fresh vertex" : "edge disconnected from tree");
        }
        break;
    }
  }
  return {};
}

bool Matching::contains(EdgeId id) const {
  return id >= 0 && static_cast<std::size_t>(id) < slot_.size() &&
         slot_[static_cast<std::size_t>(id)] >= 0;
}

std::optional<EdgeId> Matching::edge_at(VertexId x) const {
  if (x < 0 || static_cast<std::size_t>(x) >= cover_.size()) return std::nullopt;
  const EdgeId id = cover_[static_cast<std::size_t>(x)];
  if (id < 0) return std::nullopt;
  return id;
}

std::vector<EdgeId> Matching::conflicts(const Edge& e) const {
  std::vector<EdgeId> out;
  if (auto a = edge_at(e.u)) out.push_back(*a);
  if (auto b = edge_at(e.v); b && (out.empty() || out.front() != *b)) out.push_back(*b);
  return out;
}

void Matching::add(const Edge& e) {
  if (covers(e.u) || covers(e.v) || contains(e.id)) {
    throw ContractViolation("edge " + std::to_string(e.id) + " conflicts with the matching");
  }
  if (e.id < 0) throw ContractViolation("negative edge id");
  const auto need = static_cast<std::size_t>(std::max(e.u, e.v)) + 1;
  if (cover_.size() < need) cover_.resize(need, -1);
  if (slot_.size() <= static_cast<std::size_t>(e.id)) slot_.resize(static_cast<std::size_t>(e.id) + 1, -1);
  cover_[static_cast<std::size_t>(e.u)] = e.id;
  cover_[static_cast<std::size_t>(e.v)] = e.id;
  slot_[static_cast<std::size_t>(e.id)] = static_cast<std::int32_t>(edges_.size());
  edges_.push_back(e);
  weight_ += e.weight;
}

void Matching::remove(EdgeId id) {
  if (!contains(id)) {
    throw ContractViolation("edge " + std::to_string(id) + " is not in the matching");
  }
  const auto pos = static_cast<std::size_t>(slot_[static_cast<std::size_t>(id)]);
  const Edge& e = edges_[pos];
  cover_[static_cast<std::size_t>(e.u)] = -1;
  cover_[static_cast<std::size_t>(e.v)] = -1;
  weight_ -= e.weight;
  slot_[static_cast<std::size_t>(id)] = -1;
  if (pos + 1 != edges_.size()) {
    edges_[pos] = std::move(edges_.back());
    slot_[static_cast<std::size_t>(edges_[pos].id)] = static_cast<std::int32_t>(pos);
  }
  edges_.pop_back();
}

const Edge& Matching::edge(EdgeId id) const {
  if (!contains(id)) {
    throw ContractViolation("edge " + std::to_string(id) + " is not in the matching");
  }
  return edges_[static_cast<std::size_t>(slot_[static_cast<std::size_t>(id)])];
}

std::vector<EdgeId> Matching::edge_ids() const {
  std::vector<EdgeId> ids;
  ids.reserve(edges_.size());
  for (const Edge& e : edges_) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool is_matching(std::span<const Edge> edges) {
  std::unordered_set<VertexId> used;
  for (const Edge& e : edges) {
    if (e.u == e.v) return false;
    if (!used.insert(e.u).second || !used.insert(e.v).second) return false;
  }
  return true;
}

MultiMatchingState::MultiMatchingState(int k) {
  if (k < 1) throw std::invalid_argument("need at least one matching");
  matchings_.resize(static_cast<std::size_t>(k));
}

int MultiMatchingState::multiplicity(EdgeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= multiplicity_.size()) return 0;
  return multiplicity_[static_cast<std::size_t>(id)];
}

long MultiMatchingState::overlap_delta(int i, const Edge& e) const {
  const Matching& m = matching(i);
  if (m.contains(e.id)) return 0;
  long delta = multiplicity(e.id);
  for (EdgeId c : m.conflicts(e)) delta -= multiplicity(c) - 1;
  return delta;
}

void MultiMatchingState::apply_accept(int i, const Edge& e, std::span<const EdgeId> evicted) {
  if (i < 0 || i >= k()) throw ContractViolation("matching index out of range");
  Matching& m = matchings_[static_cast<std::size_t>(i)];
  if (m.contains(e.id)) throw ContractViolation("edge already in matching");
  std::vector<EdgeId> expected = m.conflicts(e);
  std::vector<EdgeId> given(evicted.begin(), evicted.end());
  std::sort(expected.begin(), expected.end());
  std::sort(given.begin(), given.end());
  if (expected != given) {
    throw ContractViolation("evicted edges must be exactly the conflicts of edge " +
                            std::to_string(e.id) + " in M" + std::to_string(i + 1));
  }
  if (static_cast<std::size_t>(e.id) >= multiplicity_.size()) {
    multiplicity_.resize(static_cast<std::size_t>(e.id) + 1, 0);
  }
  for (EdgeId c : given) {
    m.remove(c);
    int& mult = multiplicity_[static_cast<std::size_t>(c)];
    --mult;
    overlap_ -= mult;
  }
  m.add(e);
  int& mult = multiplicity_[static_cast<std::size_t>(e.id)];
  overlap_ += mult;
  ++mult;
}

void MultiMatchingState::evict(int i, EdgeId id) {
  if (i < 0 || i >= k()) throw ContractViolation("matching index out of range");
  matchings_[static_cast<std::size_t>(i)].remove(id);
  int& mult = multiplicity_[static_cast<std::size_t>(id)];
  --mult;
  overlap_ -= mult;
}

long MultiMatchingState::recompute_overlap() const {
  long total = 0;
  for (std::size_t i = 0; i < matchings_.size(); ++i) {
    for (std::size_t j = i + 1; j < matchings_.size(); ++j) {
      for (EdgeId id : matchings_[i].edge_ids()) {
        if (matchings_[j].contains(id)) ++total;
      }
    }
  }
  return total;
}

}  // namespace pmatch

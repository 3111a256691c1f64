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

#include "pmatch/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace pmatch {
namespace {

struct Dsu {
  std::unordered_map<VertexId, VertexId> parent;
  VertexId find(VertexId x) {
    auto [it, fresh] = parent.try_emplace(x, x);
    if (fresh || it->second == x) return x;
    const VertexId root = find(it->second);
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

class BranchAndBound {
 public:
  explicit BranchAndBound(std::span<const Edge> edges) : edges_(edges.begin(), edges.end()) {
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (const Edge& e : edges_) {
      if (e.weight == 0) has_zero_ = true;
      for (VertexId x : {e.u, e.v}) index_.try_emplace(x, static_cast<int>(index_.size()));
    }
    used_.assign(index_.size(), false);
    best_cap_.assign(index_.size(), Rational(0));
  }

  OfflineResult run() {
    search(0, Rational(0));
    return {best_value_, best_ids_};
  }

 private:
  int slot(VertexId x) const { return index_.at(x); }

  // Half the sum, over free vertices, of the heaviest remaining edge at the
  // vertex whose other end is also free. Every matched edge is bounded by
  // both of its endpoint caps, so the sum bounds any completion.
  Rational completion_bound(std::size_t from) {
    std::vector<int> touched;
    for (std::size_t i = from; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      const int a = slot(e.u);
      const int b = slot(e.v);
      if (used_[a] || used_[b]) continue;
      for (int s : {a, b}) {
        if (best_cap_[s] == 0) touched.push_back(s);
        if (e.weight > best_cap_[s]) best_cap_[s] = e.weight;
      }
    }
    Rational total{0};
    for (int s : touched) {
      total += best_cap_[s];
      best_cap_[s] = 0;
    }
    return total / 2;
  }

  void search(std::size_t i, const Rational& value) {
    if (i == edges_.size()) {
      if (!found_ || value > best_value_ || (value == best_value_ && chosen_ < best_ids_)) {
        found_ = true;
        best_value_ = value;
        best_ids_ = chosen_;
      }
      return;
    }
    if (found_) {
      const Rational bound = value + completion_bound(i);
      if (bound < best_value_ || (bound == best_value_ && !has_zero_)) return;
    }
    const Edge& e = edges_[i];
    const int a = slot(e.u);
    const int b = slot(e.v);
    if (!used_[a] && !used_[b]) {
      used_[a] = used_[b] = true;
      chosen_.push_back(e.id);
      search(i + 1, value + e.weight);
      chosen_.pop_back();
      used_[a] = used_[b] = false;
    }
    search(i + 1, value);
  }

  std::vector<Edge> edges_;
  std::unordered_map<VertexId, int> index_;
  std::vector<bool> used_;
  std::vector<Rational> best_cap_;
  std::vector<EdgeId> chosen_;
  bool has_zero_ = false;
  bool found_ = false;
  Rational best_value_{0};
  std::vector<EdgeId> best_ids_;
};

}  // namespace

OfflineResult brute_force_opt(std::span<const Edge> edges, OracleOptions options) {
  if (edges.size() > options.max_edges) {
    throw GuardExceeded("brute force limited to " + std::to_string(options.max_edges) + " edges, got " +
                        std::to_string(edges.size()));
  }
  return BranchAndBound(edges).run();
}

bool is_forest(std::span<const Edge> edges) {
  Dsu dsu;
  for (const Edge& e : edges) {
    if (!dsu.unite(e.u, e.v)) return false;
  }
  return true;
}

OfflineResult tree_opt_dp(std::span<const Edge> edges) {
  if (!is_forest(edges)) throw CycleDetected("input contains a cycle");
  std::unordered_map<VertexId, std::vector<std::size_t>> adj;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].u].push_back(i);
    adj[edges[i].v].push_back(i);
  }
  // free_[v]: best in v's subtree with v unmatched; best_[v]: best overall.
  std::unordered_map<VertexId, Rational> free_, best_;
  std::unordered_map<VertexId, std::size_t> parent_edge;
  std::unordered_map<VertexId, long> pick;  // child edge index matched to v, -1 if none
  std::vector<VertexId> order;
  std::vector<VertexId> roots;
  std::unordered_map<VertexId, bool> seen;
  std::vector<VertexId> vertices;
  for (const Edge& e : edges) {
    vertices.push_back(e.u);
    vertices.push_back(e.v);
  }
  for (VertexId r : vertices) {
    if (seen[r]) continue;
    seen[r] = true;
    roots.push_back(r);
    std::vector<VertexId> stack{r};
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (std::size_t i : adj[v]) {
        const VertexId c = edges[i].other(v);
        if (seen[c]) continue;
        seen[c] = true;
        parent_edge[c] = i;
        stack.push_back(c);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    Rational sum_best{0};
    for (std::size_t i : adj[v]) {
      const VertexId c = edges[i].other(v);
      if (parent_edge.contains(c) && parent_edge[c] == i) sum_best += best_[c];
    }
    free_[v] = sum_best;
    Rational top = sum_best;
    long chosen = -1;
    for (std::size_t i : adj[v]) {
      const VertexId c = edges[i].other(v);
      if (!(parent_edge.contains(c) && parent_edge[c] == i)) continue;
      const Rational with = sum_best - best_[c] + free_[c] + edges[i].weight;
      if (with > top) {
        top = with;
        chosen = static_cast<long>(i);
      }
    }
    best_[v] = top;
    pick[v] = chosen;
  }
  OfflineResult out;
  // top-down reconstruction; matched_to_parent marks vertices already used
  std::unordered_map<VertexId, bool> taken;
  for (VertexId v : order) {
    if (taken[v]) continue;
    const long i = pick[v];
    if (i < 0) continue;
    const Edge& e = edges[static_cast<std::size_t>(i)];
    out.witness.push_back(e.id);
    taken[e.other(v)] = true;
  }
  for (VertexId r : roots) out.value += best_[r];
  std::sort(out.witness.begin(), out.witness.end());
  return out;
}

long path_collection_cardinality(std::span<const Edge> edges) {
  Dsu dsu;
  std::unordered_map<VertexId, int> degree;
  for (const Edge& e : edges) {
    if (++degree[e.u] > 2 || ++degree[e.v] > 2) throw ContractViolation("vertex of degree > 2");
    if (!dsu.unite(e.u, e.v)) throw CycleDetected("input contains a cycle");
  }
  std::map<VertexId, long> size;
  for (const Edge& e : edges) ++size[dsu.find(e.u)];
  long total = 0;
  for (const auto& [root, n] : size) total += (n + 1) / 2;
  return total;
}

OfflineResult offline_opt(std::span<const Edge> edges, OracleOptions options) {
  if (is_forest(edges)) return tree_opt_dp(edges);
  return brute_force_opt(edges, options);
}

std::vector<Rational> opt_per_prefix(const EdgeStream& stream, OracleOptions options) {
  std::vector<Rational> out;
  out.reserve(stream.size());
  std::span<const Edge> all(stream.events);
  for (std::size_t t = 1; t <= stream.size(); ++t) out.push_back(offline_opt(all.first(t), options).value);
  return out;
}

}  // namespace pmatch

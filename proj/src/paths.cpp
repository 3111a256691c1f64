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

#include "pmatch/paths.hpp"

#include <algorithm>

namespace pmatch {

VertexId PathIndex::find(VertexId x) const {
  auto it = parent_.find(x);
  if (it == parent_.end() || it->second == x) return x;
  const VertexId root = find(it->second);
  parent_[x] = root;
  return root;
}

int PathIndex::degree(VertexId x) const {
  auto it = incident_.find(x);
  return it == incident_.end() ? 0 : static_cast<int>(it->second.size());
}

PathJoin PathIndex::classify(const Edge& e) const {
  if (slot_.contains(e.id)) throw ContractViolation("edge " + std::to_string(e.id) + " already revealed");
  auto side = [&](VertexId x) -> std::pair<int, std::optional<EdgeId>> {
    const int d = degree(x);
    if (d == 0) return {0, std::nullopt};
    if (d > 1) throw ContractViolation("vertex " + std::to_string(x) + " is interior to a path");
    return {component_edges_.at(find(x)), incident_.at(x).front()};
  };
  auto [lu, eu] = side(e.u);
  auto [lv, ev] = side(e.v);
  if (lu > 0 && lv > 0 && find(e.u) == find(e.v)) throw ContractViolation("edge closes a cycle");
  if (lu < lv) {
    std::swap(lu, lv);
    std::swap(eu, ev);
  }
  return PathJoin{lu, lv, eu, ev};
}

void PathIndex::insert(const Edge& e) {
  const PathJoin join = classify(e);
  const int total = join.l1 + join.l2 + 1;
  for (VertexId x : {e.u, e.v}) {
    if (!parent_.contains(x)) parent_.emplace(x, x);
    incident_[x].push_back(e.id);
  }
  const VertexId a = find(e.u);
  const VertexId b = find(e.v);
  component_edges_.erase(a);
  component_edges_.erase(b);
  parent_[a] = b;
  component_edges_[b] = total;
  slot_.emplace(e.id, edges_.size());
  edges_.push_back(e);
}

std::vector<std::vector<EdgeId>> PathIndex::maximal_paths() const {
  std::vector<std::vector<EdgeId>> out;
  std::unordered_map<EdgeId, bool> done;
  std::vector<EdgeId> order;
  for (const Edge& e : edges_) order.push_back(e.id);
  std::sort(order.begin(), order.end());
  for (EdgeId start : order) {
    if (done[start]) continue;
    // walk to one end of the path, then collect edges toward the other end
    const Edge& s = edges_[slot_.at(start)];
    EdgeId cur = start;
    VertexId x = s.u;
    while (true) {
      const auto& inc = incident_.at(x);
      if (inc.size() < 2) break;
      const EdgeId next = inc[0] == cur ? inc[1] : inc[0];
      cur = next;
      x = edges_[slot_.at(cur)].other(x);
    }
    std::vector<EdgeId> path;
    VertexId y = x;
    while (true) {
      path.push_back(cur);
      done[cur] = true;
      y = edges_[slot_.at(cur)].other(y);
      const auto& inc = incident_.at(y);
      if (inc.size() < 2) break;
      cur = inc[0] == cur ? inc[1] : inc[0];
    }
    out.push_back(std::move(path));
  }
  return out;
}

}  // namespace pmatch

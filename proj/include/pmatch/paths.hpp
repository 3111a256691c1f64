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

#ifndef PMATCH_PATHS_HPP
#define PMATCH_PATHS_HPP

#include <optional>
#include <unordered_map>
#include <vector>

#include "pmatch/graph.hpp"

namespace pmatch {

/// How a new edge attaches to a collection of paths: it joins a path of
/// length L1 and one of length L2 (L1 >= L2, 0 for a fresh endpoint), and
/// e1/e2 are the end edges of those paths touching the new edge.
struct PathJoin {
  int l1 = 0;
  int l2 = 0;
  std::optional<EdgeId> e1;
  std::optional<EdgeId> e2;
};

/// Incremental structure of a revealed path collection.
class PathIndex {
 public:
  /// Throws ContractViolation if adding e would leave the path class.
  PathJoin classify(const Edge& e) const;
  void insert(const Edge& e);

  /// Maximal paths as edge-id sequences, ordered end to end; paths are
  /// listed by their smallest edge id.
  std::vector<std::vector<EdgeId>> maximal_paths() const;

 private:
  struct Component {
    int edges = 0;
  };
  VertexId find(VertexId x) const;
  int degree(VertexId x) const;

  std::unordered_map<VertexId, std::vector<EdgeId>> incident_;
  mutable std::unordered_map<VertexId, VertexId> parent_;
  std::unordered_map<VertexId, int> component_edges_;  // by root
  std::vector<Edge> edges_;                            // by insertion
  std::unordered_map<EdgeId, std::size_t> slot_;
};

}  // namespace pmatch

#endif  // PMATCH_PATHS_HPP

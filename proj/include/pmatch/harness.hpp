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

#ifndef PMATCH_HARNESS_HPP
#define PMATCH_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pmatch/certificates.hpp"
#include "pmatch/graph.hpp"
#include "pmatch/numbers.hpp"
#include "pmatch/online.hpp"

namespace pmatch {

// ---------------------------------------------------------------------------
// Enumerators and generators

/// Number of growing-tree streams with n edges when edge k joins a new
/// vertex k to one of the k earlier vertices (n! without a cap).
std::size_t count_growing_tree_streams(int n, std::optional<int> degree_cap = std::nullopt);

/// Calls fn on every growing-tree stream with n edges (n <= 9). With a
/// degree cap, attachments that would push a vertex past it are skipped.
void for_each_growing_tree_stream(int n, std::optional<int> degree_cap,
                                  const std::function<void(const EdgeStream&)>& fn);

/// Calls fn on every reveal order of the n edges of a path (n <= 8).
void for_each_path_order(int n, const std::function<void(const EdgeStream&)>& fn);

/// 4-regular tree of the given depth with one extra pendant edge on every
/// non-leaf vertex, revealed breadth first (children, then the pendant).
EdgeStream gen_fixture_b3(int depth);

/// Chain on which McGregor switches at every step: each held edge gets a
/// pendant at its old end just too light to be taken, then the next chain
/// edge just heavy enough to be taken; one last pendant closes the chain.
EdgeStream gen_mcgregor_chain(int length, const Surd& gamma);

/// Random general graph with 1..max_edges edges and weights p/q.
EdgeStream random_weighted_stream(std::mt19937_64& rng, int max_edges);
/// Same shape, weights theta^k for k in [0, 5].
EdgeStream random_theta_stream(std::mt19937_64& rng, int max_edges, const Rational& theta);
/// Random tree on 2..max_vertices vertices in random reveal order, weights
/// p/q including zero now and then.
EdgeStream random_weighted_tree(std::mt19937_64& rng, int max_vertices);

/// Lower bound on E[|M cap P|] for a maximal path of length n under the
/// coin-flip algorithm: 3n/8 + 1/4 for even n, 3n/8 + 3/8 for odd n.
Rational coinflip_path_bound(int n);

// ---------------------------------------------------------------------------
// Sources

struct Instance {
  std::string key;
  EdgeStream stream;
};

/// Indexable family of streams so workers can pick instances by number.
class InstanceSource {
 public:
  virtual ~InstanceSource() = default;
  virtual std::size_t size() const = 0;
  /// nullopt for indices the family skips (degree-capped enumeration).
  virtual std::optional<Instance> get(std::size_t index) const = 0;
};

/// Source specs:
///   <path>                                a stream file
///   enum:growing:<n>[:<cap>]              all growing-tree streams, n edges
///   enum:growing-upto:<n>[:<cap>]         the same for 1..n edges
///   enum:paths:<n>  enum:paths-upto:<n>   all reveal orders of P_n
///   fixture:b3:<depth>
///   fixture:chain:<length>:<gamma>
///   random:general:<count>:<max_edges>:<seed>
///   random:theta=<theta>:<count>:<max_edges>:<seed>
///   random:tree:<count>:<max_vertices>:<seed>
std::unique_ptr<InstanceSource> make_source(const std::string& spec);

// ---------------------------------------------------------------------------
// Experiments

enum class RunMode { kExact, kMonteCarlo };

struct ExperimentConfig {
  AlgorithmSpec algorithm;
  std::string source;
  RunMode mode = RunMode::kExact;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// Any of: bound, prefix, lemma_internal, deg3_lemmas, charge, pd,
  /// path_bounds. "valid" is always run.
  std::vector<std::string> checks;
  std::optional<Surd> target;  // OPT / E[ALG] <= target
  std::size_t workers = 0;     // 0: PMATCH_WORKERS or 1
  std::size_t oracle_edge_guard = 40;
};

/// Parses "exact" or "mc:<trials>:<seed>".
void parse_mode(const std::string& text, ExperimentConfig& config);

struct RatioRow {
  std::string key;
  std::size_t events = 0;
  Rational opt{0};
  Rational alg{0};  // exact expectation, or the sample mean in mc mode
  std::optional<Rational> ratio;  // OPT / ALG when ALG > 0
  std::optional<Rational> worst_prefix;
  std::optional<Surd> margin;  // target * ALG - OPT
  std::vector<Check> checks;
  std::string error;
};

struct RatioReport {
  std::string algorithm;
  std::string source;
  std::string mode;
  std::vector<RatioRow> rows;  // sorted by key
  std::optional<Rational> min_ratio;
  std::optional<Rational> max_ratio;
  std::optional<Surd> min_margin;
  std::size_t errors = 0;
  std::vector<Check> checks;  // one per requested check, aggregated
  bool all_pass() const;
};

RatioReport run_experiment(const ExperimentConfig& config);

/// One row for a single stream (what run_experiment does per instance).
RatioRow evaluate_instance(const ExperimentConfig& config, const Instance& instance);

/// key=value text with a stable field order. Rows are omitted when
/// summary_only is set.
std::string format_report(const RatioReport& report, bool summary_only = false);

/// Worker count from PMATCH_WORKERS (at least 1).
std::size_t default_workers();

}  // namespace pmatch

#endif  // PMATCH_HARNESS_HPP

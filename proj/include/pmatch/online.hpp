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

#ifndef PMATCH_ONLINE_HPP
#define PMATCH_ONLINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pmatch/graph.hpp"
#include "pmatch/numbers.hpp"
#include "pmatch/paths.hpp"

namespace pmatch {

enum class AlgorithmKind {
  kGreedy,
  kMcGregor,
  kBarely2Paths,
  kBarely3Deg3,
  kBarely4Trees,
  kPathsCoinflip,
};

std::string algorithm_name(AlgorithmKind kind);
AlgorithmKind parse_algorithm(const std::string& name);
/// Number of matchings the algorithm maintains (1 for single-matching ones).
int matching_count(AlgorithmKind kind);
bool is_barely_random(AlgorithmKind kind);

struct AlgorithmParams {
  Surd gamma{1};  // McGregor's improvement factor, > 0
};

/// Algorithm name plus parameters, written "mcgregor:gamma=sqrt2/2" or
/// just "greedy". Only mcgregor takes a parameter.
struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::kGreedy;
  AlgorithmParams params;
};

AlgorithmSpec parse_algorithm_spec(const std::string& text);
std::string format_algorithm_spec(const AlgorithmSpec& spec);

struct StepRecord {
  bool accepted = false;
  std::vector<EdgeId> evicted;
};

/// Accepts e iff neither endpoint is covered. Never preempts.
StepRecord greedy_process(Matching& m, const Edge& e);

/// Accepts e and evicts its conflicts iff w(e) > (1 + gamma) * w(conflicts),
/// with w(conflicts) the summed weight of the (at most two) matched edges
/// touching e. An edge with no conflicts is accepted iff w(e) > 0.
StepRecord mcgregor_process(Matching& m, const Edge& e, const Surd& gamma);

struct SwitchRecord {
  int matching = 0;  // 0-based
  EdgeId evicted = 0;
  long overlap_before = 0;
  long overlap_after = 0;
};

struct BarelyStep {
  std::vector<int> augmented;  // 0-based matchings e joined without conflict
  std::vector<SwitchRecord> switches;
};

/// Shared augment/switch kernel. Augment: e joins every conflict-free
/// matching. Switch: for i = 2..k in order (skipping matchings e joined
/// while augmenting), e replaces the single conflicting edge of M_i when
/// that strictly lowers the pairwise overlap of the current state. A
/// matching with two conflicting edges is never switched.
BarelyStep barely_process(MultiMatchingState& state, const Edge& e);

BarelyStep barely4_process(MultiMatchingState& state, const Edge& e);
BarelyStep barely3_process(MultiMatchingState& state, const Edge& e);
BarelyStep barely2_paths_process(MultiMatchingState& state, const Edge& e);

/// Which of the six cases of the coin-flip path algorithm a new edge hits.
enum class CoinCase {
  kIsolated,          // L1 = L2 = 0
  kOnDisjointEdge,    // L1 = 1, L2 = 0
  kExtendPath,        // L1 > 1, L2 = 0
  kJoinTwoEdges,      // L1 = L2 = 1
  kJoinPathAndEdge,   // L1 > 1, L2 = 1
  kJoinTwoPaths,      // L1 > 1, L2 > 1
};

CoinCase coin_case(const PathJoin& join);

/// One possible result of processing an edge: which of e, e1, e2 change,
/// and with what probability (1, or 1/2 for each side of a fair coin).
struct CoinOutcome {
  bool add_new = false;
  bool drop_e1 = false;
  bool drop_e2 = false;
  Rational probability{1};
};

/// The outcomes of the coin-flip algorithm for an edge with the given join
/// and membership of its neighbouring path-end edges: either one certain
/// outcome or two outcomes of probability 1/2.
std::vector<CoinOutcome> paths_coinflip_outcomes(const PathJoin& join, bool e1_in_m, bool e2_in_m);

/// Randomness source for the coin-flip algorithm.
struct CoinSource {
  enum class Mode { kSeeded, kExactBranching };
  Mode mode = Mode::kSeeded;
  std::uint64_t seed = 0;
};

/// Applies one edge to a sampled single-matching state (k = 1), drawing a
/// fair coin from the generator when the case calls for one.
CoinOutcome paths_coinflip_process(MultiMatchingState& state, PathIndex& paths, const Edge& e,
                                   std::mt19937_64& rng);

/// White-box access an adversary needs: feed an edge, read the matchings.
class AlgorithmHandle {
 public:
  virtual ~AlgorithmHandle() = default;
  virtual void feed(const Edge& e) = 0;
  virtual std::span<const Matching> matchings() const = 0;
  virtual std::string describe() const = 0;
};

/// Any of the six algorithms; the coin-flip variant samples its coins from
/// a seeded generator here (exact branching lives in ExpectationTracker).
class OnlineAlgorithm final : public AlgorithmHandle {
 public:
  explicit OnlineAlgorithm(AlgorithmKind kind, AlgorithmParams params = {}, std::uint64_t seed = 0);

  void feed(const Edge& e) override;
  std::span<const Matching> matchings() const override { return state_.matchings(); }
  std::string describe() const override;

  AlgorithmKind kind() const { return kind_; }
  const AlgorithmParams& params() const { return params_; }
  const MultiMatchingState& state() const { return state_; }

  /// (1/k) sum_i |M_i| and (1/k) sum_i w(M_i).
  Rational mean_size() const;
  Rational mean_weight() const;

 private:
  AlgorithmKind kind_;
  AlgorithmParams params_;
  MultiMatchingState state_;
  PathIndex paths_;
  std::mt19937_64 rng_;
};

/// A matching (sorted ids) with its probability mass.
struct WeightedOutcome {
  std::vector<EdgeId> edges;
  Rational mass;
  Rational weight;
};

struct ExpectationOptions {
  std::size_t state_cap = std::size_t{1} << 16;
};

class DistributionTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact output distribution of an algorithm, fed one edge at a time.
/// Barely-random variants: uniform over the k deterministic matchings.
/// Coin-flip: every fair coin splits each state into two halves.
class ExpectationTracker {
 public:
  ExpectationTracker(AlgorithmKind kind, AlgorithmParams params = {}, ExpectationOptions options = {});

  /// Throws DistributionTooLarge once the state count exceeds the cap
  /// (the caller should fall back to Monte Carlo).
  void feed(const Edge& e);

  Rational expected_size() const;
  Rational expected_weight() const;
  /// Probability that the edge is in the output matching.
  Rational edge_probability(EdgeId id) const;
  std::vector<WeightedOutcome> distribution() const;
  std::size_t state_count() const;
  const PathIndex& paths() const { return paths_; }

 private:
  AlgorithmKind kind_;
  ExpectationOptions options_;
  std::optional<OnlineAlgorithm> deterministic_;
  std::map<std::vector<EdgeId>, Rational> states_;  // coin-flip only
  std::map<EdgeId, Rational> weights_;
  PathIndex paths_;
};

struct ExpectationResult {
  Rational expected_size;
  Rational expected_weight;
  std::vector<WeightedOutcome> distribution;
};

ExpectationResult exact_expectation(AlgorithmKind kind, const EdgeStream& stream,
                                    AlgorithmParams params = {}, ExpectationOptions options = {});

}  // namespace pmatch

#endif  // PMATCH_ONLINE_HPP

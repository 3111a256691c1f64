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

#include "pmatch/online.hpp"

#include <algorithm>

namespace pmatch {

std::string algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kGreedy: return "greedy";
    case AlgorithmKind::kMcGregor: return "mcgregor";
    case AlgorithmKind::kBarely2Paths: return "barely2_paths";
    case AlgorithmKind::kBarely3Deg3: return "barely3_deg3";
    case AlgorithmKind::kBarely4Trees: return "barely4_trees";
    case AlgorithmKind::kPathsCoinflip: return "paths_coinflip";
  }
  return "greedy";
}

AlgorithmKind parse_algorithm(const std::string& name) {
  for (auto kind : {AlgorithmKind::kGreedy, AlgorithmKind::kMcGregor, AlgorithmKind::kBarely2Paths,
                    AlgorithmKind::kBarely3Deg3, AlgorithmKind::kBarely4Trees,
                    AlgorithmKind::kPathsCoinflip}) {
    if (algorithm_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

AlgorithmSpec parse_algorithm_spec(const std::string& text) {
  AlgorithmSpec spec;
  const auto colon = text.find(':');
  spec.kind = parse_algorithm(text.substr(0, colon));
  if (colon == std::string::npos) return spec;
  std::string rest = text.substr(colon + 1);
  if (spec.kind != AlgorithmKind::kMcGregor || rest.rfind("gamma=", 0) != 0) {
    throw std::invalid_argument("bad algorithm parameters '" + rest + "'");
  }
  spec.params.gamma = parse_surd(rest.substr(6));
  if (spec.params.gamma.sign() <= 0) throw std::invalid_argument("gamma must be positive");
  return spec;
}

std::string format_algorithm_spec(const AlgorithmSpec& spec) {
  std::string out = algorithm_name(spec.kind);
  if (spec.kind == AlgorithmKind::kMcGregor) out += ":gamma=" + format_surd(spec.params.gamma);
  return out;
}

int matching_count(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kBarely2Paths: return 2;
    case AlgorithmKind::kBarely3Deg3: return 3;
    case AlgorithmKind::kBarely4Trees: return 4;
    default: return 1;
  }
}

bool is_barely_random(AlgorithmKind kind) { return matching_count(kind) > 1; }

StepRecord greedy_process(Matching& m, const Edge& e) {
  if (!m.conflicts(e).empty()) return {};
  m.add(e);
  return {true, {}};
}

StepRecord mcgregor_process(Matching& m, const Edge& e, const Surd& gamma) {
  const std::vector<EdgeId> conflicts = m.conflicts(e);
  Rational blocking{0};
  for (EdgeId c : conflicts) blocking += m.edge(c).weight;
  if (!(Surd(e.weight) > (Surd(1) + gamma) * Surd(blocking))) return {};
  for (EdgeId c : conflicts) m.remove(c);
  m.add(e);
  return {true, conflicts};
}

BarelyStep barely_process(MultiMatchingState& state, const Edge& e) {
  BarelyStep step;
  for (int i = 0; i < state.k(); ++i) {
    if (state.matching(i).conflicts(e).empty()) {
      state.apply_accept(i, e);
      step.augmented.push_back(i);
    }
  }
  for (int i = 1; i < state.k(); ++i) {
    if (state.matching(i).contains(e.id)) continue;
    const std::vector<EdgeId> conflicts = state.matching(i).conflicts(e);
    if (conflicts.size() != 1) continue;
    if (state.overlap_delta(i, e) >= 0) continue;
    const long before = state.overlap();
    state.apply_accept(i, e, conflicts);
    step.switches.push_back({i, conflicts.front(), before, state.overlap()});
  }
  return step;
}

BarelyStep barely4_process(MultiMatchingState& state, const Edge& e) {
  if (state.k() != 4) throw ContractViolation("barely4 needs four matchings");
  return barely_process(state, e);
}

BarelyStep barely3_process(MultiMatchingState& state, const Edge& e) {
  if (state.k() != 3) throw ContractViolation("barely3 needs three matchings");
  return barely_process(state, e);
}

BarelyStep barely2_paths_process(MultiMatchingState& state, const Edge& e) {
  if (state.k() != 2) throw ContractViolation("barely2 needs two matchings");
  return barely_process(state, e);
}

CoinCase coin_case(const PathJoin& join) {
  if (join.l1 == 0) return CoinCase::kIsolated;
  if (join.l2 == 0) return join.l1 == 1 ? CoinCase::kOnDisjointEdge : CoinCase::kExtendPath;
  if (join.l2 == 1) return join.l1 == 1 ? CoinCase::kJoinTwoEdges : CoinCase::kJoinPathAndEdge;
  return CoinCase::kJoinTwoPaths;
}

std::vector<CoinOutcome> paths_coinflip_outcomes(const PathJoin& join, bool e1_in_m, bool e2_in_m) {
  const Rational half(1, 2);
  switch (coin_case(join)) {
    case CoinCase::kIsolated:
      return {{true, false, false, Rational(1)}};
    case CoinCase::kOnDisjointEdge:
      if (!e1_in_m) throw ContractViolation("a disjoint edge must be matched");
      return {{true, true, false, half}, {false, false, false, half}};
    case CoinCase::kExtendPath:
      return {{!e1_in_m, false, false, Rational(1)}};
    case CoinCase::kJoinTwoEdges:
      if (!e1_in_m || !e2_in_m) throw ContractViolation("a disjoint edge must be matched");
      return {{true, true, true, half}, {false, false, false, half}};
    case CoinCase::kJoinPathAndEdge:
      if (!e2_in_m) throw ContractViolation("a disjoint edge must be matched");
      // with e1 matched nothing changes
      if (e1_in_m) return {{false, false, false, Rational(1)}};
      return {{true, false, true, Rational(1)}};
    case CoinCase::kJoinTwoPaths:
      return {{!e1_in_m && !e2_in_m, false, false, Rational(1)}};
  }
  return {};
}

CoinOutcome paths_coinflip_process(MultiMatchingState& state, PathIndex& paths, const Edge& e,
                                   std::mt19937_64& rng) {
  if (state.k() != 1) throw ContractViolation("coin-flip keeps one matching");
  const PathJoin join = paths.classify(e);
  const Matching& m = state.matching(0);
  const bool in1 = join.e1 && m.contains(*join.e1);
  const bool in2 = join.e2 && m.contains(*join.e2);
  const std::vector<CoinOutcome> outcomes = paths_coinflip_outcomes(join, in1, in2);
  const CoinOutcome pick = outcomes.size() == 1 ? outcomes.front() : outcomes[rng() & 1U];
  if (pick.drop_e1) state.evict(0, *join.e1);
  if (pick.drop_e2) state.evict(0, *join.e2);
  if (pick.add_new) state.apply_accept(0, e);
  paths.insert(e);
  return pick;
}

OnlineAlgorithm::OnlineAlgorithm(AlgorithmKind kind, AlgorithmParams params, std::uint64_t seed)
    : kind_(kind), params_(std::move(params)), state_(matching_count(kind)), rng_(seed) {
  if (kind_ == AlgorithmKind::kMcGregor && params_.gamma.sign() <= 0) {
    throw std::invalid_argument("gamma must be positive");
  }
}

void OnlineAlgorithm::feed(const Edge& e) {
  switch (kind_) {
    case AlgorithmKind::kGreedy:
    case AlgorithmKind::kMcGregor: {
      const Matching& m = state_.matching(0);
      std::vector<EdgeId> conflicts = m.conflicts(e);
      bool accept = conflicts.empty();
      if (kind_ == AlgorithmKind::kMcGregor) {
        Rational blocking{0};
        for (EdgeId c : conflicts) blocking += m.edge(c).weight;
        accept = Surd(e.weight) > (Surd(1) + params_.gamma) * Surd(blocking);
      }
      if (accept) state_.apply_accept(0, e, conflicts);
      break;
    }
    case AlgorithmKind::kBarely2Paths:
    case AlgorithmKind::kBarely3Deg3:
    case AlgorithmKind::kBarely4Trees:
      barely_process(state_, e);
      break;
    case AlgorithmKind::kPathsCoinflip:
      paths_coinflip_process(state_, paths_, e, rng_);
      break;
  }
}

std::string OnlineAlgorithm::describe() const {
  return format_algorithm_spec({kind_, params_});
}

Rational OnlineAlgorithm::mean_size() const {
  Rational total{0};
  for (const Matching& m : state_.matchings()) total += static_cast<long>(m.size());
  return total / state_.k();
}

Rational OnlineAlgorithm::mean_weight() const {
  Rational total{0};
  for (const Matching& m : state_.matchings()) total += m.weight();
  return total / state_.k();
}

ExpectationTracker::ExpectationTracker(AlgorithmKind kind, AlgorithmParams params, ExpectationOptions options)
    : kind_(kind), options_(options) {
  if (kind_ == AlgorithmKind::kPathsCoinflip) {
    states_.emplace(std::vector<EdgeId>{}, Rational(1));
  } else {
    deterministic_.emplace(kind, std::move(params));
  }
}

void ExpectationTracker::feed(const Edge& e) {
  if (deterministic_) {
    deterministic_->feed(e);
    return;
  }
  const PathJoin join = paths_.classify(e);
  std::map<std::vector<EdgeId>, Rational> next;
  for (const auto& [edges, mass] : states_) {
    const bool in1 = join.e1 && std::binary_search(edges.begin(), edges.end(), *join.e1);
    const bool in2 = join.e2 && std::binary_search(edges.begin(), edges.end(), *join.e2);
    for (const CoinOutcome& o : paths_coinflip_outcomes(join, in1, in2)) {
      std::vector<EdgeId> out;
      out.reserve(edges.size() + 1);
      for (EdgeId id : edges) {
        if ((o.drop_e1 && id == *join.e1) || (o.drop_e2 && id == *join.e2)) continue;
        out.push_back(id);
      }
      if (o.add_new) out.insert(std::upper_bound(out.begin(), out.end(), e.id), e.id);
      next[std::move(out)] += mass * o.probability;
    }
    if (next.size() > options_.state_cap) {
      throw DistributionTooLarge("exact distribution exceeds " + std::to_string(options_.state_cap) +
                                 " states; use Monte Carlo");
    }
  }
  states_ = std::move(next);
  paths_.insert(e);
  weights_[e.id] = e.weight;
}

Rational ExpectationTracker::expected_size() const {
  if (deterministic_) return deterministic_->mean_size();
  Rational total{0};
  for (const auto& [edges, mass] : states_) total += mass * static_cast<long>(edges.size());
  return total;
}

Rational ExpectationTracker::expected_weight() const {
  if (deterministic_) return deterministic_->mean_weight();
  Rational total{0};
  for (const auto& [edges, mass] : states_) {
    for (EdgeId id : edges) total += mass * weights_.at(id);
  }
  return total;
}

Rational ExpectationTracker::edge_probability(EdgeId id) const {
  if (deterministic_) {
    return ratio(deterministic_->state().multiplicity(id), deterministic_->state().k());
  }
  Rational total{0};
  for (const auto& [edges, mass] : states_) {
    if (std::binary_search(edges.begin(), edges.end(), id)) total += mass;
  }
  return total;
}

std::vector<WeightedOutcome> ExpectationTracker::distribution() const {
  std::map<std::vector<EdgeId>, std::pair<Rational, Rational>> merged;
  if (deterministic_) {
    const auto& st = deterministic_->state();
    for (const Matching& m : st.matchings()) {
      auto& slot = merged[m.edge_ids()];
      slot.first += ratio(1, st.k());
      slot.second = m.weight();
    }
  } else {
    for (const auto& [edges, mass] : states_) {
      Rational w{0};
      for (EdgeId id : edges) w += weights_.at(id);
      merged[edges] = {mass, w};
    }
  }
  std::vector<WeightedOutcome> out;
  for (auto& [edges, mw] : merged) out.push_back({edges, mw.first, mw.second});
  return out;
}

std::size_t ExpectationTracker::state_count() const {
  if (deterministic_) return distribution().size();
  return states_.size();
}

ExpectationResult exact_expectation(AlgorithmKind kind, const EdgeStream& stream, AlgorithmParams params,
                                    ExpectationOptions options) {
  ExpectationTracker tracker(kind, std::move(params), options);
  for (const Edge& e : stream.events) tracker.feed(e);
  return {tracker.expected_size(), tracker.expected_weight(), tracker.distribution()};
}

}  // namespace pmatch

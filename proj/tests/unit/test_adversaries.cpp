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

#include <doctest.h>

#include "pmatch/adversaries.hpp"
#include "pmatch/oracle.hpp"

using namespace pmatch;

namespace {

// McGregor with gamma 1/2, except that a heavy edge meeting one matched
// edge of equal weight knocks it out and is not taken either.
class DroppingHandle final : public AlgorithmHandle {
 public:
  void feed(const Edge& e) override {
    const Matching& m = state_.matching(0);
    const auto conflicts = m.conflicts(e);
    if (e.weight > 1 && conflicts.size() == 1 && m.edge(conflicts[0]).weight == e.weight) {
      state_.evict(0, conflicts[0]);
      return;
    }
    Rational blocking{0};
    for (EdgeId c : conflicts) blocking += m.edge(c).weight;
    if (e.weight * 2 > blocking * 3) state_.apply_accept(0, e, conflicts);
  }
  std::span<const Matching> matchings() const override { return state_.matchings(); }
  std::string describe() const override { return "dropping"; }

 private:
  MultiMatchingState state_{1};
};

bool all_pass(const std::vector<Check>& checks) {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const Check* find_check(const std::vector<Check>& checks, const std::string& name) {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("theta formulas") {
  CHECK(theta_final_ratio(Rational(4), 3) == ratio(23, 8));
  CHECK(theta_final_ratio(Rational(4), 6) == ratio(191, 64));
  CHECK(theta_discard_bound(Rational(4)) == 3);
  CHECK(theta_discard_bound(Rational(6)) == ratio(5, 2));
  CHECK(theta_tree_weight(Rational(4), 1) == 6);
  CHECK(theta_tree_weight(Rational(4), 0) == 1);
  // sum_i theta^i 2^(n-i) directly
  Rational direct{0};
  for (int i = 0; i <= 5; ++i) direct += pow_rational(Rational(5), i) * pow_rational(Rational(2), 5 - i);
  CHECK(theta_tree_weight(Rational(5), 5) == direct);
}

TEST_CASE("make_tree base case against greedy") {
  OnlineAlgorithm greedy(AlgorithmKind::kGreedy);
  auto out = make_tree(0, Rational(4), greedy);
  REQUIRE(out.tree);
  const ThetaTree& t = *out.tree;
  REQUIRE(t.adversary.size() == 1);
  const Edge& adv_edge = out.transcript.stream.events[static_cast<std::size_t>(t.adversary[0])];
  // (v, v1) is the second edge revealed
  CHECK(adv_edge.id == 1);
  CHECK(t.adv == 1);
  CHECK(t.alg == 1);
  CHECK(greedy.matchings()[0].contains(0));
  CHECK(t.pending == out.transcript.stream.events[0].v);
  CHECK(out.transcript.discards.empty());
  CHECK(all_pass(out.transcript.checks));
}

TEST_CASE("make_tree level one with a switching algorithm") {
  OnlineAlgorithm mc(AlgorithmKind::kMcGregor, {Surd::sqrt2() / Surd(2)});
  auto out = make_tree(1, Rational(4), mc);
  REQUIRE(out.tree);
  CHECK(out.tree->adv == 6);
  CHECK(out.tree->alg == 4);
  CHECK(all_pass(out.transcript.checks));
  CHECK(validate_stream(out.transcript.stream).ok);
}

TEST_CASE("level-zero discards against a policy that takes nothing") {
  LocalPolicyAlgorithm reject(parse_policy("reject"), 1);
  auto out = make_tree(0, Rational(4), reject, 5);
  CHECK_FALSE(out.tree);
  CHECK(out.transcript.status == AdversaryStatus::kBudgetExhausted);
  REQUIRE(out.transcript.discards.size() == 5);
  for (const ThetaTree& d : out.transcript.discards) {
    CHECK(d.alg == 0);
    CHECK(d.adv == 1);
  }
  CHECK(find_check(out.transcript.checks, "discard_ratio")->pass);
}

TEST_CASE("greedy never picks the joining edge") {
  OnlineAlgorithm greedy(AlgorithmKind::kGreedy);
  auto t = run_theta_adversary(6, Rational(4), greedy);
  CHECK(t.status == AdversaryStatus::kBudgetExhausted);
  CHECK_FALSE(t.final_tree);
  REQUIRE(t.discards.size() == 64);
  for (const ThetaTree& d : t.discards) {
    CHECK(d.level == 1);
    CHECK(d.alg == 2);
    CHECK(d.adv == 6);
  }
  CHECK(find_check(t.checks, "discard_ratio")->pass);
  CHECK(all_pass(certify_transcript(parse_stream_text(emit_stream_text(transcript_file(t))))));
}

TEST_CASE("mcgregor with gamma 1 ties and is discarded") {
  OnlineAlgorithm mc(AlgorithmKind::kMcGregor, {Surd(1)});
  auto t = run_theta_adversary(6, Rational(4), mc, 8);
  CHECK(t.status == AdversaryStatus::kBudgetExhausted);
  CHECK(t.discards.size() == 8);
  for (const ThetaTree& d : t.discards) CHECK(d.adv / d.alg == 3);
}

TEST_CASE("full game follows the branches") {
  OnlineAlgorithm mc(AlgorithmKind::kMcGregor, {Surd::sqrt2() / Surd(2)});
  auto t = run_theta_adversary(6, Rational(4), mc);
  CHECK(t.status == AdversaryStatus::kCompleted);
  REQUIRE(t.final_tree);
  CHECK(t.final_tree->adv / t.final_tree->alg == ratio(191, 64));
  CHECK(t.final_tree->alg == pow_rational(Rational(4), 6));
  CHECK(t.discards.empty());
  CHECK(all_pass(t.checks));
  CHECK(validate_stream(t.stream).ok);

  // The adversary's matching is a lower bound on the tree's optimum.
  std::vector<Edge> tree_edges;
  for (EdgeId id : t.final_tree->edges) tree_edges.push_back(t.stream.events[static_cast<std::size_t>(id)]);
  CHECK(tree_opt_dp(tree_edges).value >= t.final_tree->adv);

  const std::string text = emit_stream_text(transcript_file(t));
  const auto checks = certify_transcript(parse_stream_text(text));
  CHECK(all_pass(checks));
  CHECK(find_check(checks, "final_ratio") != nullptr);

  // Tamper with a recorded weight.
  std::string bad = text;
  const auto pos = bad.find("alg=4096");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, 8, "alg=4095");
  CHECK_FALSE(all_pass(certify_transcript(parse_stream_text(bad))));
}

TEST_CASE("theta adversary flags an algorithm that drops without taking") {
  DroppingHandle h;
  auto t = run_theta_adversary(2, Rational(4), h);
  CHECK(t.status == AdversaryStatus::kModelViolation);
}

TEST_CASE("theta adversary preconditions") {
  OnlineAlgorithm greedy(AlgorithmKind::kGreedy);
  CHECK_THROWS_AS(run_theta_adversary(2, Rational(3), greedy), std::invalid_argument);
  CHECK_THROWS_AS(run_theta_adversary(0, Rational(4), greedy), std::invalid_argument);
  OnlineAlgorithm b2(AlgorithmKind::kBarely2Paths);
  CHECK_THROWS_AS(run_theta_adversary(2, Rational(4), b2), std::invalid_argument);
}

TEST_CASE("policy gamma") {
  LocalLowerBoundParams p;
  CHECK(p.gamma() == Surd(ratio(12, 7), ratio(4, 7)));
  CHECK(p.gamma() >= Surd(1));
  p.delta = ratio(1, 5);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("probe locates mcgregor's step") {
  LocalLowerBoundParams p;
  p.delta = ratio(1, 10);
  p.epsilon = ratio(1, 100);
  const ProbeResult r = probe_policy_thresholds(mcgregor_policy(Surd(1)), Rational(1), p);
  REQUIRE(r.ok);
  // 1/alpha is about 0.1716, so the grid is 18/100, 19/100, ... and 2 is on it.
  CHECK(r.lo == ratio(18, 100));
  CHECK(r.y == 2);
  CHECK(r.x == ratio(201, 100));
  CHECK(all_pass(r.checks));
}

TEST_CASE("probe reports policies outside the model") {
  LocalLowerBoundParams p;
  const ProbeResult never = probe_policy_thresholds(parse_policy("greedy"), Rational(1), p);
  CHECK_FALSE(never.ok);
  CHECK_FALSE(never.violation.empty());
  const ProbeResult always = probe_policy_thresholds(parse_policy("always"), Rational(1), p);
  CHECK_FALSE(always.ok);
  // A coin of exactly delta passes the scan but has f1 > 0 at the lower end.
  const ProbeResult coin = probe_policy_thresholds(parse_policy("coin:p=1/50"), Rational(1), p);
  REQUIRE(find_check(coin.checks, "f1_zero_at_lower_end"));
  CHECK_FALSE(coin.ok);
  CHECK_FALSE(find_check(coin.checks, "f1_zero_at_lower_end")->pass);
}

TEST_CASE("bernoulli draws") {
  std::mt19937_64 a(7);
  std::mt19937_64 b(7);
  CHECK_FALSE(bernoulli(Rational(0), a));
  CHECK(bernoulli(Rational(1), a));
  CHECK(a() == b());  // no draws consumed above
  std::mt19937_64 c(9);
  std::mt19937_64 d(9);
  const bool got = bernoulli(ratio(1, 2), c);
  CHECK(got == (d() < (std::uint64_t{1} << 63U)));
  CHECK(trial_seed(5, 0) != trial_seed(5, 1));
  CHECK(trial_seed(5, 3) == trial_seed(5, 3));
}

TEST_CASE("layered instance shape") {
  LocalLowerBoundParams p;
  p.m = 1;
  p.n = 1;
  const LayeredInstance inst = build_layered_instance(mcgregor_policy(Surd(1)), p);
  CHECK(inst.stream.size() == 4);
  CHECK(inst.opt_lower_bound == 2 * inst.y[0]);
  CHECK(all_pass(inst.checks));
  CHECK(inst.stream.events[1].weight == inst.y[0]);
  CHECK(inst.stream.events[2].weight == inst.x[0]);  // J_2 reuses x_1
  CHECK(inst.stream.events[3].weight == inst.y[0]);

  p.m = 3;
  p.n = 2;
  const LayeredInstance big = build_layered_instance(mcgregor_policy(Surd(1)), p);
  CHECK(big.stream.size() == 3u * 3 * 2 + 3 * 2 + 3 * 3 + 3);
  CHECK(layered_event_count(3, 2) == big.stream.size());
  CHECK(validate_stream(big.stream).ok);
  for (std::size_t t = 0; t < big.stream.size(); ++t) {
    if (t % 4 == 3) {
      CHECK(big.role[t] == LayerRole::kMatching);
    } else {
      CHECK(big.role[t] == LayerRole::kComplete);
    }
  }
}

TEST_CASE("layered instance rejects a policy outside the model") {
  LocalLowerBoundParams p;
  CHECK_THROWS_AS(build_layered_instance(parse_policy("greedy"), p), PolicyModelViolation);
}

TEST_CASE("measure_layered replays the policy handle exactly") {
  LocalLowerBoundParams p;
  p.m = 4;
  p.n = 2;
  const LayeredInstance inst = build_layered_instance(mcgregor_policy(Surd(1)), p);
  const LocalPolicy coin = parse_policy("coin:p=1/3");
  const std::size_t trials = 6;
  const auto meas = measure_layered(coin, inst, trials, 42);

  std::vector<double> y_sum(3, 0);
  std::vector<double> x_sum(3, 0);
  Rational alg_sum{0};
  for (std::size_t t = 0; t < trials; ++t) {
    LocalPolicyAlgorithm h(coin, trial_seed(42, t));
    for (const Edge& e : inst.stream.events) h.feed(e);
    for (const Edge& e : h.matchings()[0].members()) {
      const auto li = static_cast<std::size_t>(inst.layer[static_cast<std::size_t>(e.id)] - 1);
      if (inst.role[static_cast<std::size_t>(e.id)] == LayerRole::kMatching) {
        y_sum[li] += 1;
      } else {
        x_sum[li] += 1;
      }
    }
    alg_sum += h.matchings()[0].weight();
  }
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(meas.y[i].mean == doctest::Approx(y_sum[i] / trials));
    CHECK(meas.x[i].mean == doctest::Approx(x_sum[i] / trials));
  }
  CHECK(meas.mean_alg == alg_sum / Rational(static_cast<long>(trials)));
}

TEST_CASE("mcgregor on the layered instance keeps one block") {
  LocalLowerBoundParams p;
  p.m = 20;
  p.n = 3;
  const LayeredInstance inst = build_layered_instance(mcgregor_policy(Surd(1)), p);
  const auto meas = measure_layered(mcgregor_policy(Surd(1)), inst, 3, 1);
  for (const LayerStat& s : meas.y) CHECK(s.mean == 0);
  CHECK(meas.x[0].mean == 0);
  CHECK(meas.x[1].mean == 0);
  CHECK(meas.x[2].mean == 20);
  CHECK(meas.x[3].mean == 0);
  CHECK(meas.mean_alg == 20 * inst.x[2]);
  CHECK_FALSE(meas.any_flagged);
  CHECK(meas.x[0].bound == ratio(49, 1) * 1);
  CHECK(meas.y[0].bound == Rational(p.m) / 50 + 49);
}

TEST_CASE("degenerate policies are flagged") {
  LocalLowerBoundParams p;
  p.m = 200;
  p.n = 2;
  const LayeredInstance inst = build_layered_instance(mcgregor_policy(Surd(1)), p);
  const auto always = measure_layered(parse_policy("always"), inst, 2, 3);
  CHECK(always.y[0].mean == 200);
  CHECK(always.y[0].flagged);
  CHECK(always.any_flagged);
  const auto greedy = measure_layered(parse_policy("greedy"), inst, 2, 3);
  CHECK(greedy.x[0].mean == 200);
  CHECK(greedy.x[0].flagged);
}

TEST_CASE("barely-random paths adversary") {
  OnlineAlgorithm b2(AlgorithmKind::kBarely2Paths);
  const auto res = barely_paths_adversary(b2, 4);
  REQUIRE(res.rounds.size() == 4);
  for (const BarelyPathsRound& r : res.rounds) {
    CHECK(r.opt == 3 * r.round);
    CHECK(r.alg == 2 * r.round);
    REQUIRE(r.ratio);
    CHECK(*r.ratio == ratio(3, 2));
  }
  CHECK(validate_stream(res.stream).ok);
  CHECK(res.stream.size() == 20);

  OnlineAlgorithm fresh(AlgorithmKind::kBarely2Paths);
  CHECK(barely_paths_adversary(fresh, 0).rounds.empty());
  OnlineAlgorithm greedy(AlgorithmKind::kGreedy);
  CHECK_THROWS_AS(barely_paths_adversary(greedy, 1), std::invalid_argument);
}

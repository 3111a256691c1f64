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

#include <random>

#include "pmatch/certificates.hpp"
#include "pmatch/lp.hpp"
#include "pmatch/online.hpp"

using namespace pmatch;

namespace {

MultiMatchingState run_barely(int k, const std::vector<Edge>& edges) {
  MultiMatchingState s(k);
  for (const Edge& e : edges) barely_process(s, e);
  return s;
}

std::vector<Edge> star(int leaves) {
  std::vector<Edge> out;
  for (int i = 0; i < leaves; ++i) out.push_back(Edge{i, 0, i + 1, Rational(1)});
  return out;
}

std::vector<Edge> random_tree(std::mt19937_64& rng, int n) {
  std::vector<Edge> out;
  for (int i = 1; i <= n; ++i) out.push_back(Edge{i - 1, static_cast<VertexId>(rng() % i), i, Rational(1)});
  return out;
}

}  // namespace

TEST_CASE("exceeds_ratio") {
  CHECK(exceeds_ratio(6, 1, alpha_surd()));
  CHECK_FALSE(exceeds_ratio(5, 1, alpha_surd()));
  CHECK_FALSE(exceeds_ratio(28, 15, Surd(ratio(28, 15))));
  CHECK(ratio(15, 28) * ratio(28, 15) == 1);
  CHECK_THROWS(exceeds_ratio(1, 0, Surd(1)));
}

TEST_CASE("exceeds_ratio near an irrational target") {
  // (99/17 - 3)^2 = 2304/289 < 2 and (35/6 - 3)^2 = 289/36 > 2
  CHECK_FALSE(exceeds_ratio(99, 17, alpha_surd()));
  CHECK(exceeds_ratio(35, 6, alpha_surd()));
}

TEST_CASE("pd trace hand examples") {
  EdgeStream one;
  one.push(1, 2, 1);
  const auto r1 = pd_trace_mcgregor(one, Surd(1));
  CHECK(r1.ok());
  CHECK(r1.y.at(1) == Surd(2));
  CHECK(r1.y.at(2) == Surd(2));
  CHECK(r1.steps[0].delta_dual == Surd(4));
  CHECK(r1.bound == Surd(6));

  EdgeStream rej;
  rej.push(1, 2, 1);
  rej.push(2, 3, 2);
  const auto r2 = pd_trace_mcgregor(rej, Surd(1));
  CHECK(r2.ok());
  CHECK_FALSE(r2.steps[1].accepted);
  CHECK(r2.steps[1].delta_dual == Surd(0));
  CHECK(r2.y.at(2) >= Surd(2));

  EdgeStream sw;
  sw.push(1, 2, 1);
  sw.push(2, 3, ratio(5, 2));
  const auto r3 = pd_trace_mcgregor(sw, Surd(1));
  CHECK(r3.ok());
  CHECK(r3.steps[1].delta_primal == ratio(3, 2));
  CHECK(r3.steps[1].delta_dual == Surd(8));
  CHECK(r3.steps[1].delta_dual / Surd(r3.steps[1].delta_primal) == Surd(ratio(16, 3)));
}

TEST_CASE("pd trace on random weighted streams") {
  std::mt19937_64 rng(61);
  const Surd gammas[] = {Surd(1), Surd(2), parse_surd("sqrt2/2")};
  for (int trial = 0; trial < 200; ++trial) {
    EdgeStream s;
    for (int i = 0; i < 25; ++i) {
      const VertexId u = static_cast<VertexId>(rng() % 10);
      const VertexId v = static_cast<VertexId>((u + 1 + rng() % 9) % 10);
      s.push(u, v, ratio(static_cast<long>(1 + rng() % 30), static_cast<long>(1 + rng() % 5)));
    }
    for (const Surd& g : gammas) {
      const auto r = pd_trace_mcgregor(s, g);
      CHECK(r.ok());
      CHECK(r.dual <= r.bound * Surd(r.primal));
      for (const Edge& e : s.events) {
        CHECK(r.y.at(e.u) + r.y.at(e.v) >= Surd(e.weight));
      }
    }
  }
}

TEST_CASE("ranks: leaves, stars, short paths") {
  const auto st = star(5);
  const RankMap r = compute_ranks(st);
  CHECK(r.at(0) == 1);
  for (int i = 1; i <= 5; ++i) CHECK(r.at(i) == 0);
  const std::vector<Edge> p2{{0, 0, 1}, {1, 1, 2}};
  const RankMap rp = compute_ranks(p2);
  CHECK(rp.at(1) == 1);
  CHECK(rp.at(0) == 0);
  const std::vector<Edge> single{{0, 4, 9}};
  CHECK(compute_ranks(single).at(4) == 0);
  const std::vector<Edge> cyc{{0, 0, 1}, {1, 1, 2}, {2, 2, 0}};
  CHECK_THROWS_AS(compute_ranks(cyc), std::invalid_argument);
}

TEST_CASE("ranks agree with the neighbour recurrence on random trees") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 300; ++trial) {
    const auto tree = random_tree(rng, 1 + static_cast<int>(rng() % 20));
    const RankMap r = compute_ranks(tree);
    CHECK(rank_recurrence_mismatches(tree, r).empty());
    // at most one neighbour with rank at least rank(v)
    std::map<VertexId, std::vector<VertexId>> nb;
    for (const Edge& e : tree) {
      nb[e.u].push_back(e.v);
      nb[e.v].push_back(e.u);
    }
    for (const auto& [v, ns] : nb) {
      int high = 0;
      for (VertexId w : ns) high += r.at(w) >= r.at(v);
      CHECK(high <= 1);
    }
  }
}

TEST_CASE("classify_edges examples") {
  const std::vector<Edge> single{{0, 0, 1}};
  const auto all4 = run_barely(4, single);
  const auto c = classify_edges(single, all4.matchings());
  CHECK(c[0].covering == 4);
  CHECK_FALSE(c[0].bad);

  const auto st = star(5);
  const auto s = run_barely(4, st);
  const auto cs = classify_edges(st, s.matchings());
  CHECK(cs[4].coverage == 4);
  CHECK_FALSE(cs[4].internal);
  CHECK(cs[4].leaf);

  MultiMatchingState three(4);
  for (int i = 0; i < 3; ++i) three.apply_accept(i, single[0]);
  CHECK(classify_edges(single, three.matchings())[0].bad);
}

TEST_CASE("lemma checks on algorithm states") {
  const auto st = star(5);
  CHECK(check_lemma_internal(st, run_barely(4, st).matchings()).empty());
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    const auto tree = random_tree(rng, 1 + static_cast<int>(rng() % 14));
    CHECK(check_lemma_internal(tree, run_barely(4, tree).matchings()).empty());
  }
  const std::vector<Edge> single{{0, 0, 1}};
  CHECK(check_deg3_lemmas(single, run_barely(3, single).matchings()).empty());
}

TEST_CASE("planted forbidden configuration is reported") {
  // path p=1, q=2, r=3, two pendants at each; every one of p, q, r is
  // covered by exactly three of the four matchings, so all pendants are bad
  const std::vector<Edge> tree{{0, 1, 2}, {1, 2, 3},  {2, 1, 10}, {3, 2, 20},
                               {4, 3, 30}, {5, 1, 11}, {6, 2, 21}, {7, 3, 31}};
  MultiMatchingState s(4);
  for (int i : {2, 3, 4}) s.apply_accept(0, tree[static_cast<std::size_t>(i)]);
  for (int i : {5, 6, 7}) s.apply_accept(1, tree[static_cast<std::size_t>(i)]);
  for (int i : {0, 7}) s.apply_accept(2, tree[static_cast<std::size_t>(i)]);
  const auto cls = classify_edges(tree, s.matchings());
  for (int i : {2, 3, 4}) CHECK(cls[static_cast<std::size_t>(i)].bad);
  const auto v = check_lemma_internal(tree, s.matchings());
  bool found = false;
  for (const auto& x : v) {
    if (x.kind == "forbidden_configuration" && x.vertices == std::vector<VertexId>{1, 2, 3}) found = true;
  }
  CHECK(found);
}

TEST_CASE("planted bad edges on both ends are reported for three matchings") {
  // middle edge (1,2) with pendant leaves 10 at 1 and 20 at 2; each pendant
  // ends up covered by exactly two of three matchings
  const std::vector<Edge> tree{{0, 1, 2}, {1, 1, 10}, {2, 2, 20}};
  MultiMatchingState s(3);
  s.apply_accept(0, tree[0]);
  s.apply_accept(1, tree[1]);
  s.apply_accept(2, tree[2]);
  const auto cls = classify_edges(tree, s.matchings());
  CHECK(cls[1].bad);
  CHECK(cls[2].bad);
  const auto v = check_deg3_lemmas(tree, s.matchings());
  bool found = false;
  for (const auto& x : v) found = found || x.kind == "bad_on_both_ends";
  CHECK(found);
}

TEST_CASE("charge feasibility examples") {
  const std::vector<Edge> single{{0, 0, 1}};
  const auto r4 = charge_feasibility(single, run_barely(4, single).matchings());
  CHECK(r4.feasible);
  CHECK(r4.certificate_verified);
  CHECK(r4.y.at(0) + r4.y.at(1) == 4);

  MultiMatchingState lone(4);
  lone.apply_accept(0, single[0]);
  const auto r1 = charge_feasibility(single, lone.matchings());
  CHECK_FALSE(r1.feasible);
  CHECK(r1.certificate_verified);

  const auto st = star(5);
  const auto s = run_barely(4, st);
  const auto rs = charge_feasibility(st, s.matchings());
  CHECK(rs.feasible);
  CHECK(rs.certificate_verified);

  // the explicit witness: every matched copy sends its whole unit to the centre
  ChargeResult manual;
  manual.feasible = true;
  manual.target = 2 + ratio(1, 7);
  for (int id = 0; id < 4; ++id) manual.shares.push_back({id, 0, Rational(1), Rational(0)});
  CHECK(verify_charge_witness(st, s.matchings(), manual));
  manual.shares.pop_back();
  CHECK_FALSE(verify_charge_witness(st, s.matchings(), manual));
}

TEST_CASE("charge feasibility on random growing trees") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    const auto tree = random_tree(rng, 1 + static_cast<int>(rng() % 14));
    const auto s = run_barely(4, tree);
    const auto r = charge_feasibility(tree, s.matchings());
    CHECK(r.feasible);
    CHECK(r.certificate_verified);
  }
  std::vector<Edge> big;
  for (int i = 1; i <= 65; ++i) big.push_back(Edge{i - 1, 0, i});
  CHECK_THROWS_AS(charge_feasibility(big, run_barely(4, big).matchings()), GuardExceeded);
}

TEST_CASE("half split on a star") {
  const auto st = star(5);
  // the unmatched leaf edge sees four half charges at the centre: 2/4
  CHECK(half_split_min(st, run_barely(4, st).matchings()) == ratio(1, 2));
}

TEST_CASE("linear feasibility always returns a verifiable answer") {
  std::mt19937_64 rng(79);
  int feasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t m = 1 + rng() % 6;
    const std::size_t n = 1 + rng() % 5;
    RationalMatrix g(m, std::vector<Rational>(n));
    std::vector<Rational> h(m);
    for (auto& row : g) {
      for (auto& x : row) x = static_cast<long>(rng() % 7) - 3;
    }
    for (auto& x : h) x = static_cast<long>(rng() % 9) - 4;
    const auto r = solve_inequalities(g, h);
    if (r.feasible) {
      ++feasible;
      CHECK(verify_point(g, h, r.point));
    } else {
      CHECK(verify_farkas(g, h, r.farkas));
    }
  }
  CHECK(feasible > 0);
  CHECK(feasible < 400);
}

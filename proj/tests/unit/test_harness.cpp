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

#include <set>

#include "pmatch/harness.hpp"
#include "pmatch/oracle.hpp"
#include "pmatch/stream_io.hpp"

using namespace pmatch;

namespace {

// Plain nested count of attachment sequences under a degree cap.
std::size_t count_by_hand(int n, int cap) {
  std::size_t total = 0;
  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  std::function<void(int)> go = [&](int k) {
    if (k > n) {
      ++total;
      return;
    }
    for (int p = 0; p < k; ++p) {
      if (deg[p] >= cap) continue;
      ++deg[p];
      ++deg[k];
      go(k + 1);
      --deg[p];
      --deg[k];
    }
  };
  go(1);
  return total;
}

ExperimentConfig config_for(const std::string& alg, const std::string& source) {
  ExperimentConfig c;
  c.algorithm = parse_algorithm_spec(alg);
  c.source = source;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("growing-tree counts") {
  CHECK(count_growing_tree_streams(1) == 1);
  CHECK(count_growing_tree_streams(3) == 6);
  CHECK(count_growing_tree_streams(5) == 120);
  CHECK(count_growing_tree_streams(3, 2) == 4);
  CHECK(count_growing_tree_streams(6, 3) == count_by_hand(6, 3));
  CHECK(count_growing_tree_streams(7, 2) == count_by_hand(7, 2));
  CHECK_THROWS_AS(count_growing_tree_streams(10), GuardExceeded);
}

TEST_CASE("enumerated streams are valid and distinct") {
  std::set<std::string> seen;
  for_each_growing_tree_stream(5, 3, [&](const EdgeStream& s) {
    CHECK(validate_stream(s).ok);
    CHECK(s.declared_class.kind == StreamKind::kGrowingTreeDeg3);
    seen.insert(emit_stream_text(s));
  });
  CHECK(seen.size() == count_by_hand(5, 3));

  std::size_t orders = 0;
  for_each_path_order(3, [&](const EdgeStream& s) {
    CHECK(validate_stream(s).ok);
    ++orders;
  });
  CHECK(orders == 6);
  orders = 0;
  for_each_path_order(2, [&](const EdgeStream&) { ++orders; });
  CHECK(orders == 2);
  CHECK_THROWS_AS(for_each_path_order(9, [](const EdgeStream&) {}), GuardExceeded);
}

TEST_CASE("sources agree with the enumerators") {
  auto src = make_source("enum:growing:4:3");
  std::size_t present = 0;
  for (std::size_t i = 0; i < src->size(); ++i) {
    if (auto inst = src->get(i)) {
      ++present;
      CHECK(validate_stream(inst->stream).ok);
    }
  }
  CHECK(src->size() == 24);
  CHECK(present == count_growing_tree_streams(4, 3));
  CHECK(make_source("enum:growing-upto:4")->size() == 1 + 2 + 6 + 24);
  CHECK(make_source("enum:paths-upto:3")->size() == 1 + 2 + 6);
  CHECK_THROWS_AS(make_source("enum:paths:9"), GuardExceeded);
  CHECK_THROWS(make_source("enum:stars:3"));
}

TEST_CASE("b3 fixture shape") {
  const EdgeStream d1 = gen_fixture_b3(1);
  CHECK(d1.size() == 5);
  const EdgeStream d2 = gen_fixture_b3(2);
  CHECK(d2.size() == 21);
  CHECK(validate_stream(d2).ok);
  CHECK(is_forest(d2.events));
  std::map<VertexId, int> deg;
  for (const Edge& e : d2.events) {
    ++deg[e.u];
    ++deg[e.v];
  }
  CHECK(deg[0] == 5);
  for (VertexId v = 1; v <= 4; ++v) CHECK(deg[v] == 5);
}

TEST_CASE("mcgregor chain approaches the ratio bound") {
  const Surd one{1};
  const Surd bound = (one + one) * (Surd(2) + one);  // (1+g)(2+1/g) at g = 1
  ExperimentConfig c = config_for("mcgregor:gamma=1", "fixture:chain:20:1");
  c.target = bound;
  c.checks = {"bound", "pd"};
  const RatioReport r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  const RatioRow& row = r.rows[0];
  CHECK(row.error.empty());
  CHECK(row.events == 41);
  REQUIRE(row.ratio);
  CHECK(Surd(*row.ratio) <= bound);
  CHECK(Surd(*row.ratio * 100) >= bound * Surd(99));
  CHECK(r.all_pass());

  const EdgeStream chain = gen_mcgregor_chain(6, Surd::sqrt2() / Surd(2));
  CHECK(chain.size() == 13);
  CHECK(is_forest(chain.events));
}

TEST_CASE("barely4 meets its target on all five-edge growing trees") {
  ExperimentConfig c = config_for("barely4_trees", "enum:growing:5");
  c.target = Surd(ratio(28, 15));
  c.checks = {"bound", "prefix", "lemma_internal", "charge"};
  const RatioReport r = run_experiment(c);
  CHECK(r.rows.size() == 120);
  CHECK(r.errors == 0);
  REQUIRE(r.min_margin);
  CHECK(r.min_margin->sign() >= 0);
  for (const Check& ch : r.checks) CHECK_MESSAGE(ch.pass, format_check(ch));
}

TEST_CASE("coin-flip on short paths") {
  ExperimentConfig c = config_for("paths_coinflip", "enum:paths-upto:5");
  c.target = Surd(ratio(4, 3));
  c.checks = {"bound", "path_bounds"};
  const RatioReport r = run_experiment(c);
  CHECK(r.errors == 0);
  REQUIRE(r.max_ratio);
  CHECK(*r.max_ratio <= ratio(4, 3));
  CHECK(r.all_pass());
  CHECK(coinflip_path_bound(2) == 1);
  CHECK(coinflip_path_bound(3) == ratio(3, 2));
}

TEST_CASE("random sources are reproducible and worker-independent") {
  ExperimentConfig c = config_for("mcgregor:gamma=1", "random:general:40:10:7");
  c.checks = {"pd"};
  const std::string one = format_report(run_experiment(c));
  c.workers = 3;
  const std::string three = format_report(run_experiment(c));
  CHECK(one == three);
  CHECK(one.find("check pd pass 40/40") != std::string::npos);

  auto trees = make_source("random:tree:30:12:5");
  for (std::size_t i = 0; i < trees->size(); ++i) {
    const auto inst = trees->get(i);
    REQUIRE(inst);
    CHECK(is_forest(inst->stream.events));
    CHECK(tree_opt_dp(inst->stream.events).value == brute_force_opt(inst->stream.events).value);
  }
  auto theta = make_source("random:theta=4:20:8:1");
  for (std::size_t i = 0; i < theta->size(); ++i) CHECK(validate_stream(theta->get(i)->stream).ok);
}

TEST_CASE("monte carlo mode and errors") {
  ExperimentConfig c = config_for("barely2_paths", "enum:paths:4");
  parse_mode("mc:16:3", c);
  CHECK(c.mode == RunMode::kMonteCarlo);
  CHECK(c.trials == 16);
  const RatioReport r = run_experiment(c);
  CHECK(r.rows.size() == 24);
  CHECK(r.all_pass());
  CHECK_THROWS(parse_mode("mc:0:1", c));
  CHECK_THROWS(parse_mode("fast", c));

  ExperimentConfig bad = config_for("greedy", "enum:paths:3");
  bad.checks = {"pd"};
  const RatioReport e = run_experiment(bad);
  CHECK(e.errors == 6);
  CHECK_FALSE(e.all_pass());
}

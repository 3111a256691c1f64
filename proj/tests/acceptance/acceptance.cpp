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

// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmatch/adversaries.hpp"
#include "pmatch/certificates.hpp"
#include "pmatch/harness.hpp"
#include "pmatch/oracle.hpp"

using namespace pmatch;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string gamma_list[] = {"1", "2", "sqrt2/2"};

ExperimentConfig config(const std::string& alg, const std::string& source, std::vector<std::string> checks,
                        std::optional<Surd> target) {
  ExperimentConfig c;
  c.algorithm = parse_algorithm_spec(alg);
  c.source = source;
  c.checks = std::move(checks);
  c.target = std::move(target);
  return c;
}

std::string failed_checks(const RatioReport& r) {
  std::string out;
  for (const Check& c : r.checks) {
    if (!c.pass) out += " " + c.name + "=" + c.detail;
  }
  for (const RatioRow& row : r.rows) {
    if (!row.error.empty()) {
      out += " first_error=" + row.key + ":" + row.error;
      break;
    }
  }
  return out;
}

const std::string kGeneral = "random:general:1000:40:1";
const std::string kTheta = "random:theta=4:1000:30:2";

Outcome pd_invariants() {
  std::size_t streams = 0;
  std::string bad;
  for (const std::string& g : gamma_list) {
    for (const std::string& src : {kGeneral, kTheta}) {
      const RatioReport r = run_experiment(config("mcgregor:gamma=" + g, src, {"pd"}, std::nullopt));
      streams += r.rows.size();
      if (!r.all_pass()) bad += " gamma=" + g + " " + src + failed_checks(r);
    }
  }
  return {bad.empty(), std::to_string(streams) + " traces" + (bad.empty() ? ", zero violations" : bad)};
}

Outcome mcgregor_ratio() {
  std::ostringstream d;
  bool ok = true;
  for (const std::string& g : gamma_list) {
    const Surd gamma = parse_surd(g);
    const Surd bound = mcgregor_ratio_bound(gamma);
    Rational worst{0};
    for (const std::string& src : {kGeneral, kTheta}) {
      const RatioReport r = run_experiment(config("mcgregor:gamma=" + g, src, {"bound"}, bound));
      ok = ok && r.all_pass();
      if (r.max_ratio && *r.max_ratio > worst) worst = *r.max_ratio;
    }
    const RatioReport chain =
        run_experiment(config("mcgregor:gamma=" + g, "fixture:chain:20:" + g, {"bound"}, bound));
    const auto& row = chain.rows.at(0);
    const bool close = chain.all_pass() && row.ratio && Surd(*row.ratio * 100) >= bound * Surd(99);
    ok = ok && close;
    d << " gamma=" << g << " bound=" << format_surd(bound) << " worst_random=" << to_double(worst)
      << " chain20=" << (row.ratio ? to_double(*row.ratio) : 0.0);
  }
  return {ok, d.str().substr(1)};
}

Outcome theta_adversary() {
  const Rational theta{4};
  const Rational target = theta_final_ratio(theta, 6);
  std::ostringstream d;
  bool ok = true;
  auto run = [&](const std::string& spec, bool must_complete) {
    const AlgorithmSpec a = parse_algorithm_spec(spec);
    OnlineAlgorithm alg(a.kind, a.params);
    const AdversaryTranscript t = run_theta_adversary(6, theta, alg);
    bool this_ok = t.status != AdversaryStatus::kModelViolation;
    for (const Check& c : t.checks) this_ok = this_ok && c.pass;
    for (const ThetaTree& dt : t.discards) this_ok = this_ok && dt.alg > 0 && dt.adv / dt.alg >= 3;
    if (t.final_tree) this_ok = this_ok && t.final_tree->adv / t.final_tree->alg == target;
    if (must_complete) this_ok = this_ok && t.final_tree.has_value();
    for (const Check& c : certify_transcript(transcript_file(t))) this_ok = this_ok && c.pass;
    d << " " << spec << ":" << adversary_status_name(t.status) << ",discards=" << t.discards.size();
    if (t.final_tree) d << ",final=" << format_rational(t.final_tree->adv / t.final_tree->alg);
    ok = ok && this_ok;
  };
  run("greedy", false);
  run("mcgregor:gamma=1", false);
  run("mcgregor:gamma=sqrt2/2", true);
  d << " target=" << format_rational(target);
  return {ok, d.str().substr(1)};
}

Outcome growing_trees() {
  const RatioReport r = run_experiment(
      config("barely4_trees", "enum:growing-upto:8", {"bound", "lemma_internal", "charge"}, Surd(ratio(28, 15))));
  return {r.all_pass(), std::to_string(r.rows.size()) + " streams max_ratio=" +
                            (r.max_ratio ? format_rational(*r.max_ratio) : "none") + failed_checks(r)};
}

Outcome degree3_trees() {
  const RatioReport r =
      run_experiment(config("barely3_deg3", "enum:growing-upto:9:3", {"bound", "deg3_lemmas"}, Surd(ratio(12, 7))));
  return {r.all_pass(), std::to_string(r.rows.size()) + " streams max_ratio=" +
                            (r.max_ratio ? format_rational(*r.max_ratio) : "none") + failed_checks(r)};
}

Outcome coinflip_paths() {
  const RatioReport r =
      run_experiment(config("paths_coinflip", "enum:paths-upto:7", {"bound", "path_bounds"}, Surd(ratio(4, 3))));
  bool p3 = true;
  for_each_path_order(3, [&](const EdgeStream& s) {
    p3 = p3 && exact_expectation(AlgorithmKind::kPathsCoinflip, s).expected_size == ratio(3, 2);
  });
  return {r.all_pass() && p3, std::to_string(r.rows.size()) + " orders max_ratio=" +
                                  (r.max_ratio ? format_rational(*r.max_ratio) : "none") +
                                  " P3_expectation_3/2=" + (p3 ? "yes" : "no") + failed_checks(r)};
}

Outcome barely2_paths() {
  const RatioReport r = run_experiment(config("barely2_paths", "enum:paths-upto:8", {"bound"}, Surd(ratio(3, 2))));
  OnlineAlgorithm alg(AlgorithmKind::kBarely2Paths);
  const BarelyPathsResult adv = barely_paths_adversary(alg, 50);
  std::size_t off = 0;
  for (const BarelyPathsRound& row : adv.rounds) {
    if (!row.ratio || *row.ratio != ratio(3, 2)) ++off;
  }
  return {r.all_pass() && off == 0 && adv.rounds.size() == 50,
          std::to_string(r.rows.size()) + " orders max_ratio=" +
              (r.max_ratio ? format_rational(*r.max_ratio) : "none") + " adversary_rounds=50 off_3/2=" +
              std::to_string(off) + failed_checks(r)};
}

Outcome layered() {
  LocalLowerBoundParams p;
  p.delta = ratio(1, 50);
  p.epsilon = ratio(1, 100);
  p.m = 200;
  p.n = 4;
  const LocalPolicy policy = mcgregor_policy(Surd(1));
  const LayeredInstance inst = build_layered_instance(policy, p);
  bool probes = !inst.probes.empty();
  for (const ProbeResult& pr : inst.probes) {
    probes = probes && pr.ok;
    for (const Check& c : pr.checks) probes = probes && c.pass;
  }
  bool shape = true;
  for (const Check& c : inst.checks) shape = shape && c.pass;
  const LayeredMeasurement m = measure_layered(policy, inst, 200, 1);
  double worst_y = 0;
  double worst_x = 0;
  for (const LayerStat& s : m.y) {
    if (s.bound) worst_y = std::max(worst_y, s.mean);
  }
  for (const LayerStat& s : m.x) {
    if (s.bound) worst_x = std::max(worst_x, s.mean);
  }
  std::ostringstream d;
  d << inst.stream.size() << " events, " << inst.probes.size() << " probes ok=" << (probes ? "yes" : "no")
    << " max_bounded_Y=" << worst_y << " max_bounded_X=" << worst_x << " flagged=" << (m.any_flagged ? "yes" : "no");
  return {probes && shape && !m.any_flagged, d.str()};
}

Outcome oracle_consistency() {
  auto src = make_source("random:tree:500:16:9");
  std::size_t bad = 0;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < src->size(); ++i) {
    const auto inst = src->get(i);
    edges += inst->stream.size();
    if (tree_opt_dp(inst->stream.events).value != brute_force_opt(inst->stream.events).value) ++bad;
  }
  return {bad == 0, std::to_string(src->size()) + " trees, " + std::to_string(edges) + " edges, " +
                        std::to_string(bad) + " mismatches"};
}

Outcome b3_fixture() {
  const RatioReport r =
      run_experiment(config("barely4_trees", "fixture:b3:2", {"bound", "charge"}, Surd(ratio(28, 15))));
  const EdgeStream tree = gen_fixture_b3(2);
  OnlineAlgorithm alg(AlgorithmKind::kBarely4Trees);
  for (const Edge& e : tree.events) alg.feed(e);
  const Rational half = half_split_min(tree.events, alg.matchings());
  const ChargeResult charge = charge_feasibility(tree.events, alg.matchings());
  const bool ok = r.all_pass() && charge.feasible && charge.certificate_verified && half == ratio(1, 2) &&
                  half < ratio(15, 28);
  return {ok, "ratio=" + (r.rows.at(0).ratio ? format_rational(*r.rows[0].ratio) : std::string("none")) +
                  " charge_feasible=" + (charge.feasible ? "yes" : "no") +
                  " half_split_min=" + format_rational(half) + " target_share=15/28" + failed_checks(r)};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "mcgregor_pd_invariants", 60, pd_invariants},
      {2, "mcgregor_ratio_bound", 60, mcgregor_ratio},
      {3, "theta_adversary", 10, theta_adversary},
      {4, "barely4_growing_trees", 300, growing_trees},
      {5, "barely3_degree3_trees", 300, degree3_trees},
      {6, "coinflip_paths", 300, coinflip_paths},
      {7, "barely2_paths", 120, barely2_paths},
      {8, "layered_lower_bound", 120, layered},
      {9, "oracle_consistency", 30, oracle_consistency},
      {10, "b3_fixture", 60, b3_fixture},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << secs << "s/" << c.limit_seconds << "s";
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " time=" << t.str() << " "
              << out.detail << (in_time ? "" : " (over time limit)") << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

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

// Command-line front end for the matching library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "pmatch/adversaries.hpp"
#include "pmatch/certificates.hpp"
#include "pmatch/harness.hpp"
#include "pmatch/oracle.hpp"
#include "pmatch/stream_io.hpp"

using namespace pmatch;

namespace {

bool print_checks(const std::vector<Check>& checks) {
  bool ok = true;
  for (const Check& c : checks) {
    std::cout << format_check(c) << "\n";
    ok = ok && c.pass;
  }
  return ok;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::stringstream in(item);
    std::string part;
    while (std::getline(in, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

// "policy:<spec>" selects a local policy; anything else is an algorithm spec.
std::unique_ptr<AlgorithmHandle> make_handle(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("policy:", 0) == 0) {
    return std::make_unique<LocalPolicyAlgorithm>(parse_policy(spec.substr(7)), seed);
  }
  const AlgorithmSpec a = parse_algorithm_spec(spec);
  return std::make_unique<OnlineAlgorithm>(a.kind, a.params, seed);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string gamma_note(const Surd& g) {
  return format_surd(g) + (g.is_rational() ? " (rational)" : " (exact quadratic)");
}

int cmd_validate(const std::string& path) {
  const StreamFile file = read_stream_file(path);
  const ValidationReport r = validate_stream(file.stream);
  std::cout << "class=" << format_stream_class(file.stream.declared_class) << " events=" << file.stream.size()
            << "\n";
  return print_checks({{"valid", r.ok, r.ok ? "ok" : "event " + std::to_string(r.event_index) + ": " + r.reason}})
             ? 0
             : 1;
}

struct RunArgs {
  std::string alg = "greedy";
  std::string params;
  std::string stream;
  std::string mode = "exact";
  std::vector<std::string> checks;
  std::string target;
  bool summary = false;
  std::size_t guard = 40;
};

int cmd_run(const RunArgs& a) {
  ExperimentConfig c;
  c.algorithm = parse_algorithm_spec(a.params.empty() ? a.alg : a.alg + ":" + a.params);
  c.source = a.stream;
  parse_mode(a.mode, c);
  c.checks = split_list(a.checks);
  if (!a.target.empty()) c.target = parse_surd(a.target);
  c.oracle_edge_guard = a.guard;
  if (c.algorithm.kind == AlgorithmKind::kMcGregor) {
    std::cout << "gamma=" << gamma_note(c.algorithm.params.gamma) << "\n";
  }
  const RatioReport report = run_experiment(c);
  std::cout << format_report(report, a.summary);
  return report.all_pass() ? 0 : 1;
}

struct AdversaryArgs {
  std::string kind = "theta";
  std::string alg;
  std::string theta = "4";
  int n = 6;
  int budget = 64;
  std::string emit;
  std::uint64_t seed = 0;
  // layered
  std::string policy = "mcgregor:gamma=1";
  std::string build_policy;
  int m = 200;
  std::string beta = "2";
  std::string delta = "1/50";
  std::string epsilon = "1/100";
  std::size_t trials = 200;
  // barely-paths
  int rounds = 10;
};

int run_theta(const AdversaryArgs& a) {
  auto handle = make_handle(a.alg.empty() ? "greedy" : a.alg, a.seed);
  const AdversaryTranscript t = run_theta_adversary(a.n, parse_rational(a.theta), *handle, a.budget);
  std::cout << "algorithm=" << t.algorithm << " theta=" << format_rational(t.theta) << " n=" << t.n
            << " budget=" << t.retry_budget << " events=" << t.stream.size() << "\n";
  std::cout << "status=" << adversary_status_name(t.status) << (t.detail.empty() ? "" : " detail=" + t.detail)
            << "\n";
  for (const ThetaTree& d : t.discards) {
    std::cout << "discard level=" << d.level << " alg=" << format_rational(d.alg)
              << " adv=" << format_rational(d.adv)
              << " ratio=" << (d.alg > 0 ? format_rational(d.adv / d.alg) : std::string("inf")) << "\n";
  }
  if (t.final_tree) {
    const ThetaTree& f = *t.final_tree;
    std::cout << "final level=" << f.level << " alg=" << format_rational(f.alg) << " adv=" << format_rational(f.adv)
              << " ratio=" << (f.alg > 0 ? format_rational(f.adv / f.alg) : std::string("inf")) << "\n";
  }
  if (!a.emit.empty()) write_file(a.emit, emit_stream_text(transcript_file(t)));
  bool ok = print_checks(t.checks);
  ok = print_checks({{"model", t.status != AdversaryStatus::kModelViolation, adversary_status_name(t.status)}}) && ok;
  return ok ? 0 : 1;
}

int run_layered(const AdversaryArgs& a) {
  LocalLowerBoundParams p;
  p.beta = parse_rational(a.beta);
  p.delta = parse_rational(a.delta);
  p.epsilon = parse_rational(a.epsilon);
  p.m = a.m;
  p.n = a.n;
  const LocalPolicy policy = parse_policy(a.policy);
  const LocalPolicy builder = a.build_policy.empty() ? policy : parse_policy(a.build_policy);
  LayeredInstance inst;
  try {
    inst = build_layered_instance(builder, p);
  } catch (const PolicyModelViolation& e) {
    std::cout << "build_policy=" << builder.name << "\n";
    print_checks(e.probe().checks);
    print_checks({{"model", false, e.what()}});
    return 1;
  }
  std::cout << "policy=" << policy.name << " build_policy=" << builder.name << " m=" << p.m << " n=" << p.n
            << " gamma=" << format_surd(p.gamma()) << " events=" << inst.stream.size() << "\n";
  for (std::size_t i = 0; i < inst.y.size(); ++i) {
    std::cout << "layer i=" << i + 1 << " y=" << format_rational(inst.y[i]) << " x=" << format_rational(inst.x[i + 1])
              << "\n";
  }
  if (!a.emit.empty()) write_file(a.emit, emit_stream_text(inst.stream));
  const LayeredMeasurement meas = measure_layered(policy, inst, a.trials, a.seed);
  auto show = [](const LayerStat& s) {
    std::cout << "stat " << s.name << " mean=" << s.mean << " half_width=" << s.half_width
              << " bound=" << (s.bound ? format_rational(*s.bound) : std::string("none"))
              << " flagged=" << (s.flagged ? "yes" : "no") << "\n";
  };
  for (const LayerStat& s : meas.y) show(s);
  for (const LayerStat& s : meas.x) show(s);
  std::cout << "alg mean=" << to_double(meas.mean_alg) << " half_width=" << meas.alg_half_width
            << " opt_lower_bound=" << format_rational(meas.opt_lower_bound) << "\n";
  bool ok = true;
  for (const ProbeResult& pr : inst.probes) ok = print_checks(pr.checks) && ok;
  ok = print_checks(inst.checks) && ok;
  ok = print_checks({{"layer_bounds", !meas.any_flagged, std::to_string(meas.trials) + " trials"}}) && ok;
  return ok ? 0 : 1;
}

int run_barely_paths(const AdversaryArgs& a) {
  auto handle = make_handle(a.alg.empty() ? "barely2_paths" : a.alg, a.seed);
  const BarelyPathsResult r = barely_paths_adversary(*handle, a.rounds);
  std::size_t bad = 0;
  for (const BarelyPathsRound& row : r.rounds) {
    std::cout << "round " << row.round << " opt=" << row.opt << " alg=" << format_rational(row.alg)
              << " ratio=" << (row.ratio ? format_rational(*row.ratio) : std::string("inf")) << "\n";
    if (!row.ratio || *row.ratio != ratio(3, 2)) ++bad;
  }
  if (!a.emit.empty()) write_file(a.emit, emit_stream_text(StreamFile{r.stream, r.notes}));
  return print_checks({{"round_ratio", bad == 0, std::to_string(bad) + " rounds off 3/2"}}) ? 0 : 1;
}

int cmd_adversary(const AdversaryArgs& a) {
  if (a.kind == "theta") return run_theta(a);
  if (a.kind == "layered") return run_layered(a);
  if (a.kind == "barely-paths") return run_barely_paths(a);
  throw std::invalid_argument("unknown adversary kind '" + a.kind + "'");
}

int cmd_oracle(const std::string& path, std::size_t guard) {
  const StreamFile file = read_stream_file(path);
  const auto& events = file.stream.events;
  const OfflineResult r = offline_opt(events, OracleOptions{guard});
  std::cout << "method=" << (is_forest(events) ? "forest_dp" : "brute_force") << " opt=" << format_rational(r.value)
            << " witness=";
  for (std::size_t i = 0; i < r.witness.size(); ++i) std::cout << (i ? "," : "") << r.witness[i];
  std::cout << "\n";
  return 0;
}

int cmd_pd_trace(const std::string& path, const std::string& gamma_text, bool steps) {
  const StreamFile file = read_stream_file(path);
  const Surd gamma = parse_surd(gamma_text);
  const PdTraceReport r = pd_trace_mcgregor(file.stream, gamma);
  std::cout << "gamma=" << gamma_note(gamma) << " events=" << r.steps.size() << "\n";
  if (steps) {
    for (const PdStep& s : r.steps) {
      std::cout << "step index=" << s.index << " edge=" << s.edge << " accepted=" << (s.accepted ? 1 : 0)
                << " dprimal=" << format_rational(s.delta_primal) << " ddual=" << format_surd(s.delta_dual) << "\n";
    }
  }
  for (const PdViolation& v : r.violations) {
    std::cout << "violation step=" << v.step << " invariant=" << v.invariant << " edge=" << v.witness << "\n";
  }
  std::cout << "primal=" << format_rational(r.primal) << " dual=" << format_surd(r.dual)
            << " bound=" << format_surd(r.bound) << "\n";
  return print_checks({{"pd", r.ok(), std::to_string(r.violations.size()) + " violations"}}) ? 0 : 1;
}

int cmd_certify(const std::string& path) {
  return print_checks(certify_transcript(read_stream_file(path))) ? 0 : 1;
}

int cmd_probe(const std::string& policy_text, const std::string& w1, const AdversaryArgs& a) {
  LocalLowerBoundParams p;
  p.beta = parse_rational(a.beta);
  p.delta = parse_rational(a.delta);
  p.epsilon = parse_rational(a.epsilon);
  const ProbeResult r = probe_policy_thresholds(parse_policy(policy_text), parse_rational(w1), p);
  std::cout << "w1=" << format_rational(r.w1) << " lo=" << format_rational(r.lo) << " hi=" << format_rational(r.hi)
            << " grid=" << r.grid_points << " y=" << format_rational(r.y) << " x=" << format_rational(r.x) << "\n";
  if (!r.violation.empty()) std::cout << "violation=" << r.violation << "\n";
  const bool ok = print_checks(r.checks);
  return ok && r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online matching experiments with exact arithmetic"};
  app.require_subcommand(1);

  std::string file;
  std::size_t guard = 40;

  auto* validate = app.add_subcommand("validate", "Check a stream file against its declared class");
  validate->add_option("file", file, "Stream file")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an algorithm over a stream source and report ratios");
  run_cmd->add_option("--alg", run.alg, "Algorithm name")->required();
  run_cmd->add_option("--params", run.params, "Parameters, e.g. gamma=sqrt2/2");
  run_cmd->add_option("--stream", run.stream, "File, enum:..., fixture:... or random:...")->required();
  run_cmd->add_option("--mode", run.mode, "exact or mc:<trials>:<seed>");
  run_cmd->add_option("--check", run.checks, "Checks to run (repeat or comma separate)");
  run_cmd->add_option("--target", run.target, "Ratio target, e.g. 28/15 or 3+2*sqrt2");
  run_cmd->add_option("--guard", run.guard, "Brute-force oracle edge limit");
  run_cmd->add_flag("--summary", run.summary, "Omit per-instance rows");

  AdversaryArgs adv;
  auto* adv_cmd = app.add_subcommand("adversary", "Play an adaptive adversary");
  adv_cmd->add_option("--kind", adv.kind, "theta, layered or barely-paths");
  adv_cmd->add_option("--alg", adv.alg, "Algorithm spec or policy:<spec>");
  adv_cmd->add_option("--theta", adv.theta, "Weight base");
  adv_cmd->add_option("--n", adv.n, "Tree depth (theta) or layer count (layered)");
  adv_cmd->add_option("--budget", adv.budget, "Retries per tree node");
  adv_cmd->add_option("--emit", adv.emit, "Write the stream or transcript here");
  adv_cmd->add_option("--seed", adv.seed, "Seed for randomized algorithms and trials");
  adv_cmd->add_option("--policy", adv.policy, "Policy measured on the layered instance");
  adv_cmd->add_option("--build-policy", adv.build_policy, "Policy probed to build the instance");
  adv_cmd->add_option("--m", adv.m, "Vertices per layer side");
  adv_cmd->add_option("--beta", adv.beta, "Layered beta");
  adv_cmd->add_option("--delta", adv.delta, "Probe threshold");
  adv_cmd->add_option("--epsilon", adv.epsilon, "Probe grid step");
  adv_cmd->add_option("--trials", adv.trials, "Monte Carlo trials");
  adv_cmd->add_option("--rounds", adv.rounds, "Rounds for barely-paths");

  auto* oracle = app.add_subcommand("oracle", "Offline maximum weight matching");
  oracle->add_option("file", file, "Stream file")->required();
  oracle->add_option("--guard", guard, "Brute-force edge limit");

  std::string gamma = "1";
  bool steps = false;
  auto* pd = app.add_subcommand("pd-trace", "Primal-dual trace of McGregor's rule");
  pd->add_option("file", file, "Stream file")->required();
  pd->add_option("--gamma", gamma, "Improvement factor, e.g. sqrt2/2");
  pd->add_flag("--steps", steps, "Print every step");

  auto* certify = app.add_subcommand("certify", "Replay and check an adversary transcript");
  certify->add_option("file", file, "Transcript file")->required();

  std::string policy = "mcgregor:gamma=1";
  std::string w1 = "1";
  auto* probe = app.add_subcommand("probe", "Locate a policy's switching threshold");
  probe->add_option("--policy", policy, "Policy spec");
  probe->add_option("--w1", w1, "Weight of the held edge");
  probe->add_option("--beta", adv.beta, "Layered beta");
  probe->add_option("--delta", adv.delta, "Probe threshold");
  probe->add_option("--epsilon", adv.epsilon, "Grid step");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(file);
    if (run_cmd->parsed()) return cmd_run(run);
    if (adv_cmd->parsed()) return cmd_adversary(adv);
    if (oracle->parsed()) return cmd_oracle(file, guard);
    if (pd->parsed()) return cmd_pd_trace(file, gamma, steps);
    if (certify->parsed()) return cmd_certify(file);
    if (probe->parsed()) return cmd_probe(policy, w1, adv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

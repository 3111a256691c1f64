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

#include "pmatch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "pmatch/adversaries.hpp"
#include "pmatch/oracle.hpp"
#include "pmatch/stream_io.hpp"

namespace pmatch {
namespace {

constexpr int kMaxGrowingEdges = 9;
constexpr int kMaxPathEdges = 8;
constexpr int kMaxFixtureDepth = 4;

std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::size_t>(k);
  return f;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("bad " + what + " '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("bad " + what + " '" + text + "'");
  return v;
}

std::string padded(std::size_t i, int width = 6) {
  std::string s = std::to_string(i);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

// Attachment digits for growing trees: edge k (1-based) joins vertex k to
// parent digit[k-1] < k.
std::optional<EdgeStream> growing_from_digits(const std::vector<int>& digits, std::optional<int> cap) {
  EdgeStream s;
  s.declared_class = cap && *cap <= 3 ? StreamClass::growing_tree_deg3() : StreamClass::growing_tree();
  std::vector<int> degree(digits.size() + 1, 0);
  for (std::size_t k = 1; k <= digits.size(); ++k) {
    const int p = digits[k - 1];
    if (cap && (degree[static_cast<std::size_t>(p)] + 1 > *cap)) return std::nullopt;
    ++degree[static_cast<std::size_t>(p)];
    ++degree[k];
    s.push(p, static_cast<VertexId>(k));
  }
  return s;
}

std::vector<int> decode_digits(std::size_t index, int n) {
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    digits[static_cast<std::size_t>(k - 1)] = static_cast<int>(index % static_cast<std::size_t>(k));
    index /= static_cast<std::size_t>(k);
  }
  return digits;
}

std::string digit_key(const std::vector<int>& digits) {
  std::string s;
  for (int d : digits) s += static_cast<char>('0' + d);
  return s;
}

std::vector<int> decode_permutation(std::size_t index, int n) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  for (int k = n; k >= 1; --k) {
    const std::size_t f = factorial(k - 1);
    const std::size_t pick = index / f;
    index %= f;
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

EdgeStream path_order_stream(const std::vector<int>& order) {
  EdgeStream s;
  s.declared_class = StreamClass::paths();
  for (int i : order) s.push(i, i + 1);
  return s;
}

Rational random_weight(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(1, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return ratio(num(rng), den(rng));
}

EdgeStream random_graph(std::mt19937_64& rng, int max_edges, const std::function<Rational()>& weight) {
  EdgeStream s;
  std::uniform_int_distribution<int> edges_dist(1, max_edges);
  int m = edges_dist(rng);
  std::uniform_int_distribution<int> vert_dist(2, m + 1);
  const int v = vert_dist(rng);
  m = std::min(m, v * (v - 1) / 2);
  std::set<std::pair<int, int>> used;
  std::uniform_int_distribution<int> pick(0, v - 1);
  while (static_cast<int>(used.size()) < m) {
    const int a = pick(rng);
    const int b = pick(rng);
    if (a == b || !used.insert({std::min(a, b), std::max(a, b)}).second) continue;
    s.push(a, b, weight());
  }
  return s;
}

// ---------------------------------------------------------------------------

class FileSource final : public InstanceSource {
 public:
  explicit FileSource(std::string path) : path_(std::move(path)) {}
  std::size_t size() const override { return 1; }
  std::optional<Instance> get(std::size_t) const override {
    return Instance{path_, read_stream_file(path_).stream};
  }

 private:
  std::string path_;
};

class GrowingSource final : public InstanceSource {
 public:
  GrowingSource(int lo, int hi, std::optional<int> cap) : cap_(cap) {
    if (hi > kMaxGrowingEdges) throw GuardExceeded("growing-tree enumeration is limited to 9 edges");
    if (lo < 1) throw std::invalid_argument("need at least one edge");
    for (int n = lo; n <= hi; ++n) {
      sizes_.push_back(n);
      offsets_.push_back(total_);
      total_ += factorial(n);
    }
  }
  std::size_t size() const override { return total_; }
  std::optional<Instance> get(std::size_t index) const override {
    std::size_t b = sizes_.size() - 1;
    while (offsets_[b] > index) --b;
    const int n = sizes_[b];
    const std::vector<int> digits = decode_digits(index - offsets_[b], n);
    auto s = growing_from_digits(digits, cap_);
    if (!s) return std::nullopt;
    return Instance{"growing:n=" + std::to_string(n) + ":" + digit_key(digits), std::move(*s)};
  }

 private:
  std::optional<int> cap_;
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

class PathSource final : public InstanceSource {
 public:
  PathSource(int lo, int hi) {
    if (hi > kMaxPathEdges) throw GuardExceeded("path-order enumeration is limited to 8 edges");
    if (lo < 1) throw std::invalid_argument("need at least one edge");
    for (int n = lo; n <= hi; ++n) {
      sizes_.push_back(n);
      offsets_.push_back(total_);
      total_ += factorial(n);
    }
  }
  std::size_t size() const override { return total_; }
  std::optional<Instance> get(std::size_t index) const override {
    std::size_t b = sizes_.size() - 1;
    while (offsets_[b] > index) --b;
    const int n = sizes_[b];
    const std::vector<int> order = decode_permutation(index - offsets_[b], n);
    return Instance{"paths:n=" + std::to_string(n) + ":" + digit_key(order), path_order_stream(order)};
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

class SingleSource final : public InstanceSource {
 public:
  SingleSource(std::string key, EdgeStream s) : instance_{std::move(key), std::move(s)} {}
  std::size_t size() const override { return 1; }
  std::optional<Instance> get(std::size_t) const override { return instance_; }

 private:
  Instance instance_;
};

class RandomSource final : public InstanceSource {
 public:
  using Maker = std::function<EdgeStream(std::mt19937_64&)>;
  RandomSource(std::string prefix, std::size_t count, std::uint64_t seed, Maker maker)
      : prefix_(std::move(prefix)), count_(count), seed_(seed), maker_(std::move(maker)) {}
  std::size_t size() const override { return count_; }
  std::optional<Instance> get(std::size_t index) const override {
    std::mt19937_64 rng(trial_seed(seed_, index));
    return Instance{prefix_ + ":" + padded(index), maker_(rng)};
  }

 private:
  std::string prefix_;
  std::size_t count_;
  std::uint64_t seed_;
  Maker maker_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Enumerators and generators

std::size_t count_growing_tree_streams(int n, std::optional<int> degree_cap) {
  std::size_t count = 0;
  for_each_growing_tree_stream(n, degree_cap, [&](const EdgeStream&) { ++count; });
  return count;
}

void for_each_growing_tree_stream(int n, std::optional<int> degree_cap,
                                  const std::function<void(const EdgeStream&)>& fn) {
  if (n < 1) throw std::invalid_argument("need at least one edge");
  if (n > kMaxGrowingEdges) throw GuardExceeded("growing-tree enumeration is limited to 9 edges");
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  std::vector<int> degree(static_cast<std::size_t>(n) + 1, 0);
  // Depth-first over attachment digits; prunes on the degree cap.
  std::function<void(int)> rec = [&](int k) {
    if (k > n) {
      fn(*growing_from_digits(digits, degree_cap));
      return;
    }
    for (int p = 0; p < k; ++p) {
      if (degree_cap && degree[static_cast<std::size_t>(p)] + 1 > *degree_cap) continue;
      digits[static_cast<std::size_t>(k - 1)] = p;
      ++degree[static_cast<std::size_t>(p)];
      ++degree[static_cast<std::size_t>(k)];
      rec(k + 1);
      --degree[static_cast<std::size_t>(p)];
      --degree[static_cast<std::size_t>(k)];
    }
  };
  rec(1);
}

void for_each_path_order(int n, const std::function<void(const EdgeStream&)>& fn) {
  if (n < 1) throw std::invalid_argument("need at least one edge");
  if (n > kMaxPathEdges) throw GuardExceeded("path-order enumeration is limited to 8 edges");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  do {
    fn(path_order_stream(order));
  } while (std::next_permutation(order.begin(), order.end()));
}

EdgeStream gen_fixture_b3(int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (depth > kMaxFixtureDepth) throw GuardExceeded("fixture depth is limited to 4");
  EdgeStream s;
  s.declared_class = StreamClass::growing_tree();
  VertexId next = 1;
  std::vector<std::pair<VertexId, int>> frontier{{0, 0}};
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const auto [v, d] = frontier[head];
    if (d == depth) continue;
    const int children = v == 0 ? 4 : 3;
    for (int c = 0; c < children; ++c) {
      s.push(v, next);
      frontier.push_back({next++, d + 1});
    }
    s.push(v, next++);
  }
  return s;
}

EdgeStream gen_mcgregor_chain(int length, const Surd& gamma) {
  if (length < 1) throw std::invalid_argument("chain length must be positive");
  if (gamma.sign() <= 0) throw std::invalid_argument("gamma must be positive");
  const Integer den("1000000000000");
  const Rational step = ratio(Integer(1), den);
  const Surd factor = Surd(1) + gamma;
  EdgeStream s;
  s.declared_class = StreamClass::general();
  VertexId old_end = 0;
  VertexId new_end = 1;
  VertexId next = 2;
  Rational w{1};
  s.push(old_end, new_end, w);
  for (int i = 1; i <= length; ++i) {
    const Surd threshold = factor * Surd(w);
    s.push(old_end, next++, rational_below(threshold, den));
    if (i == length) break;
    w = rational_above(threshold, den) + step;
    s.push(new_end, next, w);
    old_end = new_end;
    new_end = next++;
  }
  s.push(new_end, next, rational_below(factor * Surd(w), den));
  return s;
}

EdgeStream random_weighted_stream(std::mt19937_64& rng, int max_edges) {
  return random_graph(rng, max_edges, [&] { return random_weight(rng, 20, 4); });
}

EdgeStream random_theta_stream(std::mt19937_64& rng, int max_edges, const Rational& theta) {
  std::uniform_int_distribution<int> expo(0, 5);
  EdgeStream s = random_graph(rng, max_edges, [&] { return pow_rational(theta, expo(rng)); });
  s.declared_class = StreamClass::theta_structured(theta);
  return s;
}

EdgeStream random_weighted_tree(std::mt19937_64& rng, int max_vertices) {
  if (max_vertices < 2) throw std::invalid_argument("a tree needs two vertices");
  std::uniform_int_distribution<int> vert_dist(2, max_vertices);
  const int v = vert_dist(rng);
  std::vector<VertexId> label(static_cast<std::size_t>(v));
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 1; i < v; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    edges.emplace_back(label[static_cast<std::size_t>(parent(rng))], label[static_cast<std::size_t>(i)]);
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  std::uniform_int_distribution<int> zero(0, 7);
  EdgeStream s;
  for (const auto& [a, b] : edges) s.push(a, b, zero(rng) == 0 ? Rational(0) : random_weight(rng, 12, 3));
  return s;
}

Rational coinflip_path_bound(int n) {
  const Rational base = ratio(3 * n, 8);
  return base + (n % 2 == 0 ? ratio(1, 4) : ratio(3, 8));
}

// ---------------------------------------------------------------------------
// Sources

std::unique_ptr<InstanceSource> make_source(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() >= 2 && parts[0] == "enum") {
    const bool upto = parts[1].size() > 5 && parts[1].substr(parts[1].size() - 5) == "-upto";
    const std::string kind = upto ? parts[1].substr(0, parts[1].size() - 5) : parts[1];
    if (parts.size() < 3) throw std::invalid_argument("missing size in '" + spec + "'");
    const int n = parse_int(parts[2], "edge count");
    if (kind == "growing" && parts.size() <= 4) {
      std::optional<int> cap;
      if (parts.size() == 4) cap = parse_int(parts[3], "degree cap");
      return std::make_unique<GrowingSource>(upto ? 1 : n, n, cap);
    }
    if (kind == "paths" && parts.size() == 3) return std::make_unique<PathSource>(upto ? 1 : n, n);
    throw std::invalid_argument("unknown enumerator '" + spec + "'");
  }
  if (parts.size() >= 2 && parts[0] == "fixture") {
    if (parts[1] == "b3" && parts.size() == 3) {
      return std::make_unique<SingleSource>(spec, gen_fixture_b3(parse_int(parts[2], "depth")));
    }
    if (parts[1] == "chain" && parts.size() == 4) {
      return std::make_unique<SingleSource>(
          spec, gen_mcgregor_chain(parse_int(parts[2], "chain length"), parse_surd(parts[3])));
    }
    throw std::invalid_argument("unknown fixture '" + spec + "'");
  }
  if (parts.size() == 5 && parts[0] == "random") {
    const auto count = static_cast<std::size_t>(parse_u64(parts[2], "count"));
    const int size = parse_int(parts[3], "size");
    const std::uint64_t seed = parse_u64(parts[4], "seed");
    const std::string prefix = "random:" + parts[1];
    if (parts[1] == "general") {
      return std::make_unique<RandomSource>(prefix, count, seed, [size](std::mt19937_64& rng) {
        return random_weighted_stream(rng, size);
      });
    }
    if (parts[1] == "tree") {
      return std::make_unique<RandomSource>(prefix, count, seed, [size](std::mt19937_64& rng) {
        return random_weighted_tree(rng, size);
      });
    }
    if (parts[1].rfind("theta=", 0) == 0) {
      const Rational theta = parse_rational(parts[1].substr(6));
      return std::make_unique<RandomSource>(prefix, count, seed, [size, theta](std::mt19937_64& rng) {
        return random_theta_stream(rng, size, theta);
      });
    }
    throw std::invalid_argument("unknown random family '" + spec + "'");
  }
  return std::make_unique<FileSource>(spec);
}

// ---------------------------------------------------------------------------
// Experiments

void parse_mode(const std::string& text, ExperimentConfig& config) {
  if (text == "exact") {
    config.mode = RunMode::kExact;
    return;
  }
  const auto parts = split(text, ':');
  if (parts.size() != 3 || parts[0] != "mc") {
    throw std::invalid_argument("mode must be 'exact' or 'mc:<trials>:<seed>'");
  }
  config.mode = RunMode::kMonteCarlo;
  config.trials = static_cast<std::size_t>(parse_u64(parts[1], "trial count"));
  config.seed = parse_u64(parts[2], "seed");
  if (config.trials == 0) throw std::invalid_argument("need at least one trial");
}

bool RatioReport::all_pass() const {
  if (errors > 0) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

bool wants(const ExperimentConfig& config, const std::string& name) {
  return std::find(config.checks.begin(), config.checks.end(), name) != config.checks.end();
}

// OPT <= target * alg, exactly. An empty input satisfies any target.
bool within(const Surd& target, const Rational& opt, const Rational& alg) {
  return Surd(opt) <= target * Surd(alg);
}

std::string mode_text(const ExperimentConfig& config) {
  if (config.mode == RunMode::kExact) return "exact";
  return "mc:" + std::to_string(config.trials) + ":" + std::to_string(config.seed);
}

}  // namespace

RatioRow evaluate_instance(const ExperimentConfig& config, const Instance& instance) {
  RatioRow row;
  row.key = instance.key;
  const EdgeStream& stream = instance.stream;
  row.events = stream.size();
  try {
    const ValidationReport vr = validate_stream(stream);
    row.checks.push_back({"valid", vr.ok, vr.ok ? "ok" : std::to_string(vr.event_index) + " " + vr.reason});
    const OracleOptions oracle{config.oracle_edge_guard};
    const AlgorithmKind kind = config.algorithm.kind;
    const AlgorithmParams& params = config.algorithm.params;
    const bool prefix = wants(config, "prefix");
    const bool path_bounds = wants(config, "path_bounds");
    std::vector<Rational> prefix_alg;

    if (config.mode == RunMode::kExact) {
      ExpectationTracker tracker(kind, params);
      for (const Edge& e : stream.events) {
        tracker.feed(e);
        if (prefix) prefix_alg.push_back(tracker.expected_weight());
      }
      row.alg = tracker.expected_weight();
      if (path_bounds) {
        if (kind != AlgorithmKind::kPathsCoinflip) throw std::invalid_argument("path_bounds needs paths_coinflip");
        std::size_t bad = 0;
        std::size_t total = 0;
        for (const auto& path : tracker.paths().maximal_paths()) {
          Rational expected{0};
          for (EdgeId id : path) expected += tracker.edge_probability(id);
          ++total;
          if (expected < coinflip_path_bound(static_cast<int>(path.size()))) ++bad;
        }
        row.checks.push_back({"path_bounds", bad == 0,
                              std::to_string(total) + " paths, " + std::to_string(bad) + " below"});
      }
    } else {
      std::vector<Rational> sums(stream.size(), Rational(0));
      Rational total{0};
      for (std::size_t t = 0; t < config.trials; ++t) {
        OnlineAlgorithm alg(kind, params, trial_seed(config.seed, t));
        for (std::size_t i = 0; i < stream.size(); ++i) {
          alg.feed(stream.events[i]);
          if (prefix) sums[i] += alg.mean_weight();
        }
        total += alg.mean_weight();
      }
      const Rational trials(static_cast<long>(config.trials));
      row.alg = total / trials;
      if (prefix) {
        for (const Rational& s : sums) prefix_alg.push_back(s / trials);
      }
      if (path_bounds) throw std::invalid_argument("path_bounds needs exact mode");
    }

    row.opt = offline_opt(stream.events, oracle).value;
    if (row.alg > 0) row.ratio = row.opt / row.alg;
    if (config.target) row.margin = *config.target * Surd(row.alg) - Surd(row.opt);

    if (wants(config, "bound")) {
      if (!config.target) throw std::invalid_argument("the bound check needs a target");
      row.checks.push_back({"bound", within(*config.target, row.opt, row.alg),
                            "opt=" + format_rational(row.opt) + " alg=" + format_rational(row.alg)});
    }
    if (prefix) {
      if (!config.target) throw std::invalid_argument("the prefix check needs a target");
      const std::vector<Rational> opts = opt_per_prefix(stream, oracle);
      std::size_t bad = 0;
      for (std::size_t i = 0; i < opts.size(); ++i) {
        if (prefix_alg[i] > 0) {
          const Rational r = opts[i] / prefix_alg[i];
          if (!row.worst_prefix || r > *row.worst_prefix) row.worst_prefix = r;
        }
        if (!within(*config.target, opts[i], prefix_alg[i])) ++bad;
      }
      row.checks.push_back({"prefix", bad == 0, std::to_string(bad) + " prefixes over target"});
    }

    const bool structural = wants(config, "lemma_internal") || wants(config, "deg3_lemmas") || wants(config, "charge");
    if (structural) {
      if (!is_barely_random(kind)) throw std::invalid_argument("structural checks need a barely-random algorithm");
      OnlineAlgorithm alg(kind, params);
      for (const Edge& e : stream.events) alg.feed(e);
      const auto ms = alg.matchings();
      if (wants(config, "lemma_internal")) {
        const auto v = check_lemma_internal(stream.events, ms);
        row.checks.push_back({"lemma_internal", v.empty(), std::to_string(v.size()) + " violations"});
      }
      if (wants(config, "deg3_lemmas")) {
        const auto v = check_deg3_lemmas(stream.events, ms);
        row.checks.push_back({"deg3_lemmas", v.empty(), std::to_string(v.size()) + " violations"});
      }
      if (wants(config, "charge")) {
        const ChargeResult c = charge_feasibility(stream.events, ms);
        row.checks.push_back({"charge", c.feasible && c.certificate_verified,
                              c.feasible ? "margin=" + format_rational(c.min_margin) : "infeasible"});
      }
    }
    if (wants(config, "pd")) {
      if (kind != AlgorithmKind::kMcGregor) throw std::invalid_argument("pd needs mcgregor");
      const PdTraceReport pd = pd_trace_mcgregor(stream, params.gamma);
      row.checks.push_back({"pd", pd.ok(), std::to_string(pd.violations.size()) + " violations"});
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("PMATCH_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

RatioReport run_experiment(const ExperimentConfig& config) {
  if (config.mode == RunMode::kMonteCarlo && config.trials == 0) {
    throw std::invalid_argument("Monte Carlo mode needs a trial count and a seed");
  }
  const std::unique_ptr<InstanceSource> source = make_source(config.source);
  const std::size_t n = source->size();
  std::vector<std::optional<RatioRow>> slots(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      std::optional<Instance> inst;
      try {
        inst = source->get(i);
      } catch (const std::exception& e) {
        RatioRow row;
        row.key = config.source + "#" + padded(i);
        row.error = e.what();
        slots[i] = std::move(row);
        continue;
      }
      if (inst) slots[i] = evaluate_instance(config, *inst);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, config.workers ? config.workers : default_workers());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  RatioReport report;
  report.algorithm = format_algorithm_spec(config.algorithm);
  report.source = config.source;
  report.mode = mode_text(config);
  for (auto& slot : slots) {
    if (slot) report.rows.push_back(std::move(*slot));
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const RatioRow& a, const RatioRow& b) { return a.key < b.key; });

  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // name -> (pass, total)
  std::vector<std::string> order{"valid"};
  for (const std::string& c : config.checks) {
    if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
  }
  for (const RatioRow& row : report.rows) {
    if (!row.error.empty()) ++report.errors;
    if (row.ratio) {
      if (!report.min_ratio || *row.ratio < *report.min_ratio) report.min_ratio = row.ratio;
      if (!report.max_ratio || *row.ratio > *report.max_ratio) report.max_ratio = row.ratio;
    }
    if (row.margin && (!report.min_margin || *row.margin < *report.min_margin)) report.min_margin = row.margin;
    for (const Check& c : row.checks) {
      auto& t = tally[c.name];
      ++t.second;
      if (c.pass) ++t.first;
    }
  }
  const std::size_t healthy = report.rows.size() - report.errors;
  for (const std::string& name : order) {
    const auto [pass, total] = tally[name];
    report.checks.push_back({name, pass == total && total == healthy,
                             std::to_string(pass) + "/" + std::to_string(report.rows.size())});
  }
  report.checks.push_back({"errors", report.errors == 0, std::to_string(report.errors)});
  return report;
}

std::string format_report(const RatioReport& report, bool summary_only) {
  auto opt_r = [](const std::optional<Rational>& r) { return r ? format_rational(*r) : std::string("none"); };
  auto opt_s = [](const std::optional<Surd>& s) { return s ? format_surd(*s) : std::string("none"); };
  std::string out = "report algorithm=" + report.algorithm + " source=" + report.source + " mode=" + report.mode +
                    " instances=" + std::to_string(report.rows.size()) + "\n";
  if (!summary_only) {
    for (const RatioRow& row : report.rows) {
      std::string checks;
      for (const Check& c : row.checks) {
        if (!checks.empty()) checks += ',';
        checks += c.name + ":" + (c.pass ? "pass" : "fail");
      }
      std::string error = row.error;
      std::replace(error.begin(), error.end(), ' ', '_');
      out += "row key=" + row.key + " events=" + std::to_string(row.events) + " opt=" + format_rational(row.opt) +
             " alg=" + format_rational(row.alg) + " ratio=" + opt_r(row.ratio) +
             " worst_prefix=" + opt_r(row.worst_prefix) + " margin=" + opt_s(row.margin) +
             " checks=" + (checks.empty() ? "none" : checks) + " error=" + (error.empty() ? "none" : error) + "\n";
    }
  }
  out += "summary instances=" + std::to_string(report.rows.size()) + " errors=" + std::to_string(report.errors) +
         " min_ratio=" + opt_r(report.min_ratio) + " max_ratio=" + opt_r(report.max_ratio) +
         " min_margin=" + opt_s(report.min_margin) + "\n";
  for (const Check& c : report.checks) out += format_check(c) + "\n";
  return out;
}

}  // namespace pmatch

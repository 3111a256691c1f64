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

#include "pmatch/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "pmatch/oracle.hpp"

namespace pmatch {
namespace {

Rational boolean(bool b) { return Rational(b ? 1 : 0); }

void require_probability(const Rational& p, const std::string& who) {
  if (p < 0 || p > 1) {
    throw std::invalid_argument(who + " returned " + format_rational(p) + ", outside [0,1]");
  }
}

struct Draw {
  enum Kind : std::uint8_t { kNever, kAlways, kThreshold };
  Kind kind = kNever;
  std::uint64_t threshold = 0;
};

Draw make_draw(const Rational& p) {
  if (p <= 0) return {Draw::kNever, 0};
  if (p >= 1) return {Draw::kAlways, 0};
  Integer scaled = p.get_num();
  scaled <<= 64;
  scaled /= p.get_den();
  return {Draw::kThreshold, static_cast<std::uint64_t>(scaled.get_ui())};
}

bool take(const Draw& d, std::mt19937_64& rng) {
  if (d.kind == Draw::kNever) return false;
  if (d.kind == Draw::kAlways) return true;
  return rng() < d.threshold;
}

std::string join_ids(const std::vector<EdgeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::vector<EdgeId> split_ids(const std::string& text) {
  std::vector<EdgeId> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(static_cast<EdgeId>(std::stol(tok)));
  }
  return out;
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

double stddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0;
  double ss = 0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

constexpr double kOneSidedZ = 1.645;

}  // namespace

// ---------------------------------------------------------------------------
// Policies

LocalPolicy mcgregor_policy(const Surd& gamma) {
  if (gamma.sign() <= 0) throw std::invalid_argument("gamma must be positive");
  const Surd factor = Surd(1) + gamma;
  LocalPolicy p;
  p.name = "mcgregor:gamma=" + format_surd(gamma);
  p.f0 = [](const Rational& w) { return boolean(w > 0); };
  p.f1 = [factor](const Rational& w1, const Rational& w) { return boolean(Surd(w) > factor * Surd(w1)); };
  p.f2 = [factor](const Rational& w1, const Rational& w2, const Rational& w) {
    return boolean(Surd(w) > factor * Surd(w1 + w2));
  };
  return p;
}

LocalPolicy parse_policy(const std::string& spec) {
  if (spec.rfind("mcgregor:gamma=", 0) == 0) return mcgregor_policy(parse_surd(spec.substr(15)));
  if (spec == "mcgregor") return mcgregor_policy(Surd(1));
  LocalPolicy p;
  p.name = spec;
  if (spec.rfind("coin:p=", 0) == 0) {
    const Rational q = parse_rational(spec.substr(7));
    require_probability(q, "coin policy");
    p.f0 = [q](const Rational&) { return q; };
    p.f1 = [q](const Rational&, const Rational&) { return q; };
    p.f2 = [q](const Rational&, const Rational&, const Rational&) { return q; };
    return p;
  }
  Rational on_free;
  Rational on_conflict;
  if (spec == "always") {
    on_free = 1;
    on_conflict = 1;
  } else if (spec == "greedy") {
    on_free = 1;
    on_conflict = 0;
  } else if (spec == "reject") {
    on_free = 0;
    on_conflict = 0;
  } else {
    throw std::invalid_argument("unknown policy '" + spec + "'");
  }
  p.f0 = [on_free](const Rational&) { return on_free; };
  p.f1 = [on_conflict](const Rational&, const Rational&) { return on_conflict; };
  p.f2 = [on_conflict](const Rational&, const Rational&, const Rational&) { return on_conflict; };
  return p;
}

bool bernoulli(const Rational& p, std::mt19937_64& rng) { return take(make_draw(p), rng); }

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32U)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[1]) << 32U) | words[0];
}

LocalPolicyAlgorithm::LocalPolicyAlgorithm(LocalPolicy policy, std::uint64_t seed)
    : policy_(std::move(policy)), rng_(seed) {}

void LocalPolicyAlgorithm::feed(const Edge& e) {
  const Matching& m = state_.matching(0);
  const std::vector<EdgeId> conflicts = m.conflicts(e);
  Rational p;
  if (conflicts.empty()) {
    p = policy_.f0(e.weight);
  } else if (conflicts.size() == 1) {
    p = policy_.f1(m.edge(conflicts[0]).weight, e.weight);
  } else {
    p = policy_.f2(m.edge(conflicts[0]).weight, m.edge(conflicts[1]).weight, e.weight);
  }
  require_probability(p, policy_.name);
  if (bernoulli(p, rng_)) state_.apply_accept(0, e, conflicts);
}

// ---------------------------------------------------------------------------
// Layered instance

Surd LocalLowerBoundParams::gamma() const {
  const Surd a = alpha();
  return Surd(beta) * (a - Surd(1)) / (a - Surd(beta));
}

void LocalLowerBoundParams::validate() const {
  if (beta < 1 || !(Surd(beta) < alpha())) throw std::invalid_argument("beta must lie in [1, alpha)");
  if (delta <= 0 || !(Surd(delta) < alpha().inverse())) {
    throw std::invalid_argument("delta must lie in (0, 1/alpha)");
  }
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be at least 1");
}

ProbeResult probe_policy_thresholds(const LocalPolicy& policy, const Rational& w1,
                                    const LocalLowerBoundParams& params) {
  params.validate();
  if (w1 <= 0) throw std::invalid_argument("w1 must be positive");
  const Surd alpha = LocalLowerBoundParams::alpha();
  const Surd gamma = params.gamma();
  const Rational& delta = params.delta;
  const Rational& eps = params.epsilon;
  auto f1 = [&](const Rational& w) {
    Rational p = policy.f1(w1, w);
    require_probability(p, policy.name);
    return p;
  };

  ProbeResult r;
  r.w1 = w1;
  const Surd lower = Surd(w1) / alpha;
  const Surd upper = gamma * Surd(w1);
  r.lo = rational_above(lower, eps.get_den());
  r.hi = rational_below(upper, eps.get_den());
  if (r.lo > r.hi) {
    r.violation = "grid is empty";
    return r;
  }

  Rational prev = r.lo;
  Rational p_prev = f1(prev);
  r.grid_points = 1;
  bool found = false;
  if (p_prev > delta) {
    r.violation = "f1 exceeds delta at the lower end of the window";
  } else if (p_prev == delta) {
    r.x = r.y = prev;
    found = true;
  } else {
    while (prev < r.hi) {
      Rational cur = prev + eps;
      if (cur > r.hi) cur = r.hi;
      ++r.grid_points;
      if (f1(cur) >= delta) {
        r.x = cur;
        r.y = prev;
        found = true;
        break;
      }
      prev = cur;
    }
    if (!found) r.violation = "f1 stays below delta up to gamma*w1";
  }
  if (!found) return r;

  const Rational fx = f1(r.x);
  const Rational fy = f1(r.y);
  r.checks.push_back({"probe_x", fx >= delta, "f1(w1,x)=" + format_rational(fx)});
  r.checks.push_back({"probe_y", fy <= delta, "f1(w1,y)=" + format_rational(fy)});
  r.checks.push_back({"probe_gap", r.x - r.y <= eps, "x-y=" + format_rational(r.x - r.y)});
  const bool window = lower <= Surd(r.y) && r.y <= r.x && Surd(r.x) <= upper;
  r.checks.push_back({"probe_window", window, "y=" + format_rational(r.y) + " x=" + format_rational(r.x)});
  const Rational f_low = f1(r.lo);
  r.checks.push_back({"f1_zero_at_lower_end", f_low == 0, "f1(w1,lo)=" + format_rational(f_low)});
  const Surd inv_alpha = alpha.inverse();
  bool f0_ok = true;
  for (const Rational* w : {&w1, static_cast<const Rational*>(&r.y), static_cast<const Rational*>(&r.x)}) {
    Rational p = policy.f0(*w);
    require_probability(p, policy.name);
    if (!(Surd(p) > inv_alpha)) f0_ok = false;
  }
  r.checks.push_back({"f0_above_inverse_alpha", f0_ok, "at w1, y, x"});
  r.ok = true;
  for (const Check& c : r.checks) {
    if (!c.pass) {
      r.ok = false;
      if (r.violation.empty()) r.violation = c.name + " failed";
    }
  }
  return r;
}

VertexId LayeredInstance::a(int i, int j) const { return (i - 1) * params.m + (j - 1); }

VertexId LayeredInstance::b(int i, int j) const {
  return (params.n + 2) * params.m + (i - 1) * params.m + (j - 1);
}

const Rational& LayeredInstance::j_weight(int i) const {
  return x.at(static_cast<std::size_t>(std::min(i, params.n) - 1));
}

const Rational& LayeredInstance::m_weight(int i) const {
  return y.at(static_cast<std::size_t>(std::min(i, params.n) - 1));
}

std::size_t layered_event_count(int m, int n) {
  const auto mm = static_cast<std::size_t>(m);
  return static_cast<std::size_t>(n + 1) * (mm * mm + mm);
}

LayeredInstance build_layered_instance(const LocalPolicy& policy, const LocalLowerBoundParams& params) {
  params.validate();
  if (static_cast<long>(2 * params.n + 3) * params.m > kMaxVertexId) {
    throw GuardExceeded("layered instance has too many vertices");
  }
  LayeredInstance inst;
  inst.params = params;
  inst.x.push_back(Rational(1));
  for (int i = 1; i <= params.n; ++i) {
    ProbeResult pr = probe_policy_thresholds(policy, inst.x.back(), params);
    if (!pr.ok) throw PolicyModelViolation(std::move(pr));
    inst.y.push_back(pr.y);
    inst.x.push_back(pr.x);
    inst.probes.push_back(std::move(pr));
  }

  const Surd alpha = LocalLowerBoundParams::alpha();
  const Surd gamma = params.gamma();
  bool sandwich = true;
  bool gap = true;
  for (int i = 1; i <= params.n; ++i) {
    const Surd yi(inst.y[static_cast<std::size_t>(i - 1)]);
    const Surd xi1(inst.x[static_cast<std::size_t>(i)]);
    const auto ui = static_cast<unsigned>(i);
    if (!(pow_surd(alpha, ui).inverse() <= yi && yi <= xi1 && xi1 <= pow_surd(gamma, ui))) sandwich = false;
    if (xi1 - yi > Surd(params.epsilon)) gap = false;
  }
  inst.checks.push_back({"layered_sandwich", sandwich, "1/alpha^i <= y_i <= x_{i+1} <= gamma^i"});
  inst.checks.push_back({"layered_gap", gap, "x_{i+1} - y_i <= epsilon"});

  const int m = params.m;
  const int n = params.n;
  inst.stream.declared_class = StreamClass::general();
  inst.stream.events.reserve(layered_event_count(m, n));
  for (int i = 1; i <= n + 1; ++i) {
    for (int j = 1; j <= m; ++j) {
      for (int jj = 1; jj <= m; ++jj) {
        inst.stream.push(inst.a(i, j), inst.a(i + 1, jj), inst.j_weight(i));
        inst.layer.push_back(i);
        inst.role.push_back(LayerRole::kComplete);
      }
      inst.stream.push(inst.a(i, j), inst.b(i, j), inst.m_weight(i));
      inst.layer.push_back(i);
      inst.role.push_back(LayerRole::kMatching);
    }
  }

  Rational sum_y{0};
  for (const Rational& v : inst.y) sum_y += v;
  inst.opt_lower_bound = Rational(m) * (sum_y + inst.y.back());

  // Each sub-phase is m block edges at a(i,j) followed by (a(i,j), b(i,j)).
  bool order = inst.stream.size() == layered_event_count(m, n);
  const auto block = static_cast<std::size_t>(m) + 1;
  for (std::size_t t = 0; order && t < inst.stream.size(); ++t) {
    const Edge& e = inst.stream.events[t];
    const auto sub = static_cast<int>(t / block);
    const auto pos = static_cast<int>(t % block);
    const int i = sub / m + 1;
    const int j = sub % m + 1;
    if (e.u != inst.a(i, j)) order = false;
    if (pos < m && (e.v != inst.a(i + 1, pos + 1) || inst.role[t] != LayerRole::kComplete)) order = false;
    if (pos == m && (e.v != inst.b(i, j) || inst.role[t] != LayerRole::kMatching)) order = false;
  }
  inst.checks.push_back({"layered_order", order, std::to_string(inst.stream.size()) + " events"});
  return inst;
}

LayeredMeasurement measure_layered(const LocalPolicy& policy, const LayeredInstance& inst,
                                   std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const int m = inst.params.m;
  const int n = inst.params.n;
  const std::vector<Edge>& events = inst.stream.events;

  // Weight classes; the policy is evaluated once per class combination.
  std::vector<Rational> classes;
  std::vector<std::int32_t> cls(events.size());
  for (std::size_t t = 0; t < events.size(); ++t) {
    auto it = std::find(classes.begin(), classes.end(), events[t].weight);
    if (it == classes.end()) it = classes.insert(classes.end(), events[t].weight);
    cls[t] = static_cast<std::int32_t>(it - classes.begin());
  }
  const std::size_t k = classes.size();
  std::vector<Draw> d0(k);
  std::vector<Draw> d1(k * k);
  std::vector<Draw> d2(k * k * k);
  for (std::size_t c = 0; c < k; ++c) {
    Rational p = policy.f0(classes[c]);
    require_probability(p, policy.name);
    d0[c] = make_draw(p);
    for (std::size_t c1 = 0; c1 < k; ++c1) {
      p = policy.f1(classes[c1], classes[c]);
      require_probability(p, policy.name);
      d1[c1 * k + c] = make_draw(p);
      for (std::size_t c2 = 0; c2 < k; ++c2) {
        p = policy.f2(classes[c1], classes[c2], classes[c]);
        require_probability(p, policy.name);
        d2[(c1 * k + c2) * k + c] = make_draw(p);
      }
    }
  }

  const std::size_t vertices = static_cast<std::size_t>(2 * n + 3) * static_cast<std::size_t>(m);
  const auto layers = static_cast<std::size_t>(n + 1);
  // counts[trial][2 * (i-1) + (matching ? 1 : 0)]
  std::vector<std::vector<double>> y_counts(layers, std::vector<double>(trials));
  std::vector<std::vector<double>> x_counts(layers, std::vector<double>(trials));
  std::vector<double> alg_values(trials);
  Rational alg_total{0};
  std::vector<std::int32_t> cover(vertices);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(trial_seed(seed, trial));
    std::fill(cover.begin(), cover.end(), -1);
    for (std::size_t t = 0; t < events.size(); ++t) {
      const Edge& e = events[t];
      const std::int32_t cu = cover[static_cast<std::size_t>(e.u)];
      const std::int32_t cv = cover[static_cast<std::size_t>(e.v)];
      const auto c = static_cast<std::size_t>(cls[t]);
      const Draw* d;
      if (cu < 0 && cv < 0) {
        d = &d0[c];
      } else if (cu < 0 || cv < 0) {
        const auto other = static_cast<std::size_t>(cls[static_cast<std::size_t>(cu < 0 ? cv : cu)]);
        d = &d1[other * k + c];
      } else {
        const auto c1 = static_cast<std::size_t>(cls[static_cast<std::size_t>(cu)]);
        const auto c2 = static_cast<std::size_t>(cls[static_cast<std::size_t>(cv)]);
        d = &d2[(c1 * k + c2) * k + c];
      }
      if (!take(*d, rng)) continue;
      for (std::int32_t old : {cu, cv}) {
        if (old < 0) continue;
        const Edge& o = events[static_cast<std::size_t>(old)];
        cover[static_cast<std::size_t>(o.u)] = -1;
        cover[static_cast<std::size_t>(o.v)] = -1;
      }
      cover[static_cast<std::size_t>(e.u)] = static_cast<std::int32_t>(t);
      cover[static_cast<std::size_t>(e.v)] = static_cast<std::int32_t>(t);
    }
    // Every edge of phase i has its first endpoint in A_i.
    Rational alg{0};
    for (int i = 1; i <= n + 1; ++i) {
      long xs = 0;
      long ys = 0;
      for (int j = 1; j <= m; ++j) {
        const VertexId av = inst.a(i, j);
        const std::int32_t held = cover[static_cast<std::size_t>(av)];
        if (held < 0 || events[static_cast<std::size_t>(held)].u != av) continue;
        if (inst.role[static_cast<std::size_t>(held)] == LayerRole::kMatching) {
          ++ys;
        } else {
          ++xs;
        }
      }
      const auto li = static_cast<std::size_t>(i - 1);
      y_counts[li][trial] = static_cast<double>(ys);
      x_counts[li][trial] = static_cast<double>(xs);
      alg += Rational(ys) * inst.m_weight(i) + Rational(xs) * inst.j_weight(i);
    }
    alg_values[trial] = to_double(alg);
    alg_total += alg;
  }

  LayeredMeasurement out;
  out.trials = trials;
  out.seed = seed;
  const Rational& delta = inst.params.delta;
  const Rational tail = (1 - delta) / delta;
  const Rational y_bound = delta * m + tail;
  auto stat = [&](const std::string& name, const std::vector<double>& xs, std::optional<Rational> bound) {
    LayerStat s;
    s.name = name;
    double sum = 0;
    for (double v : xs) sum += v;
    s.mean = sum / static_cast<double>(xs.size());
    s.half_width = kOneSidedZ * stddev(xs, s.mean) / std::sqrt(static_cast<double>(xs.size()));
    s.bound = std::move(bound);
    s.flagged = s.bound && s.mean - s.half_width > to_double(*s.bound);
    return s;
  };
  for (int i = 1; i <= n + 1; ++i) {
    const auto li = static_cast<std::size_t>(i - 1);
    out.y.push_back(stat("Y" + std::to_string(i), y_counts[li], y_bound));
    out.x.push_back(stat("X" + std::to_string(i), x_counts[li],
                         i <= n - 1 ? std::optional<Rational>(tail) : std::nullopt));
  }
  out.mean_alg = alg_total / Rational(static_cast<long>(trials));
  out.alg_half_width =
      kOneSidedZ * stddev(alg_values, to_double(out.mean_alg)) / std::sqrt(static_cast<double>(trials));
  out.opt_lower_bound = inst.opt_lower_bound;
  for (const auto* group : {&out.y, &out.x}) {
    for (const LayerStat& s : *group) out.any_flagged = out.any_flagged || s.flagged;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theta adversary

std::string adversary_status_name(AdversaryStatus status) {
  switch (status) {
    case AdversaryStatus::kCompleted: return "completed";
    case AdversaryStatus::kBudgetExhausted: return "budget_exhausted";
    case AdversaryStatus::kModelViolation: return "model_violation";
  }
  return "completed";
}

Rational theta_tree_weight(const Rational& theta, int n) {
  return (pow_rational(theta, n + 1) - pow_rational(Rational(2), n + 1)) / (theta - 2);
}

Rational theta_final_ratio(const Rational& theta, int n) {
  return 2 + 2 * (1 - pow_rational(2 / theta, n)) / (theta - 2);
}

Rational theta_discard_bound(const Rational& theta) { return 2 + 2 / (theta - 2); }

namespace {

class ThetaGame {
 public:
  struct Abort {};

  ThetaGame(const Rational& theta, AlgorithmHandle& handle, int budget, int n, const std::string& mode)
      : handle_(handle), budget_(budget) {
    if (theta < 4) throw std::invalid_argument("theta must be at least 4");
    if (budget < 1) throw std::invalid_argument("retry budget must be positive");
    if (handle.matchings().size() != 1) throw std::invalid_argument("the theta adversary needs a single matching");
    t_.algorithm = handle.describe();
    t_.theta = theta;
    t_.n = n;
    t_.retry_budget = budget;
    t_.stream.declared_class = StreamClass::theta_structured(theta);
    note("theta mode=" + mode + " algorithm=" + t_.algorithm + " theta=" + format_rational(theta) +
         " n=" + std::to_string(n) + " budget=" + std::to_string(budget));
  }

  ThetaTree make(int n) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == budget_) abort(AdversaryStatus::kBudgetExhausted, n);
      if (n == 0) {
        const VertexId v = fresh();
        const VertexId v1 = fresh();
        const VertexId v2 = fresh();
        const EdgeId e12 = give(v1, v2, Rational(1));
        const EdgeId ev1 = give(v, v1, Rational(1));
        ThetaTree tree{0, {e12, ev1}, {}, -1, {}, {}, 0};
        if (holds(e12)) {
          tree.adversary = {ev1};
          tree.pending = v2;
          return close(std::move(tree), "keep");
        }
        if (holds(ev1)) {
          tree.adversary = {e12};
          tree.pending = v;
          return close(std::move(tree), "replace");
        }
        tree.adversary = {e12};
        discard(std::move(tree));
        continue;
      }
      const ThetaTree t1 = make(n - 1);
      const ThetaTree t2 = make(n - 1);
      const Rational w = pow_rational(t_.theta, n);
      const EdgeId e12 = give(t1.pending, t2.pending, w);
      ThetaTree tree = merge(n, t1, t2, e12);
      if (!holds(e12)) {
        tree.adversary.push_back(e12);
        discard(std::move(tree));
        continue;
      }
      note("branch level=" + std::to_string(n) + " pick");
      const VertexId v = fresh();
      const EdgeId ev1 = give(v, t1.pending, w);
      tree.edges.push_back(ev1);
      if (holds(ev1)) {
        tree.adversary.push_back(e12);
        tree.pending = v;
        return close(std::move(tree), "replace");
      }
      if (holds(e12)) {
        tree.adversary.push_back(ev1);
        tree.pending = t2.pending;
        return close(std::move(tree), "keep");
      }
      abort(AdversaryStatus::kModelViolation, n);
    }
  }

  void adv(int n) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == budget_) abort(AdversaryStatus::kBudgetExhausted, n);
      const ThetaTree t1 = make(n - 1);
      const ThetaTree t2 = make(n - 1);
      const Rational w = pow_rational(t_.theta, n);
      const EdgeId e12 = give(t1.pending, t2.pending, w);
      ThetaTree tree = merge(n, t1, t2, e12);
      if (!holds(e12)) {
        tree.adversary.push_back(e12);
        discard(std::move(tree));
        continue;
      }
      note("branch level=" + std::to_string(n) + " pick");
      const VertexId v = fresh();
      const EdgeId ev1 = give(v, t1.pending, w);
      tree.edges.push_back(ev1);
      if (holds(ev1)) {
        note("branch level=" + std::to_string(n) + " replace");
        const EdgeId last = give(v, fresh(), w);
        tree.edges.push_back(last);
        tree.adversary.push_back(e12);
        tree.adversary.push_back(last);
      } else if (holds(e12)) {
        note("branch level=" + std::to_string(n) + " keep");
        const EdgeId last = give(t2.pending, fresh(), w);
        tree.edges.push_back(last);
        tree.adversary.push_back(ev1);
        tree.adversary.push_back(last);
      } else {
        abort(AdversaryStatus::kModelViolation, n);
      }
      std::sort(tree.edges.begin(), tree.edges.end());
      std::sort(tree.adversary.begin(), tree.adversary.end());
      tree.alg = held_weight(tree.edges);
      tree.adv = weight(tree.adversary);
      tree.closed_at = t_.stream.size();
      t_.final_tree = std::move(tree);
      return;
    }
  }

  AdversaryTranscript finish(const std::optional<ThetaTree>& result) {
    std::string bits;
    for (bool b : t_.replies) bits += b ? '1' : '0';
    std::string final_line = "final status=" + adversary_status_name(t_.status);
    const ThetaTree* tree = t_.final_tree ? &*t_.final_tree : (result ? &*result : nullptr);
    if (tree) final_line += " " + describe(*tree);
    note(final_line);
    note("replies " + bits);

    bool discard_ok = true;
    const Rational bound = theta_discard_bound(t_.theta);
    for (const ThetaTree& d : t_.discards) {
      if (d.alg > 0 && d.adv / d.alg < bound) discard_ok = false;
      if (d.alg == 0 && d.adv <= 0) discard_ok = false;
    }
    t_.checks.push_back({"discard_ratio", discard_ok,
                         std::to_string(t_.discards.size()) + " discards, bound " + format_rational(bound)});
    t_.checks.push_back({"tree_adversary_matching", adv_shape_failures_ == 0,
                         std::to_string(closed_) + " trees, " + std::to_string(adv_shape_failures_) + " failures"});
    t_.checks.push_back({"tree_alg_single_edge", alg_shape_failures_ == 0,
                         std::to_string(closed_) + " trees, " + std::to_string(alg_shape_failures_) + " failures"});
    if (t_.final_tree) {
      const ThetaTree& f = *t_.final_tree;
      const Rational target = theta_final_ratio(t_.theta, t_.n);
      const bool exact = f.alg > 0 && f.adv / f.alg == target;
      t_.checks.push_back({"final_ratio", exact,
                           (f.alg > 0 ? format_rational(f.adv / f.alg) : std::string("inf")) + " target " +
                               format_rational(target)});
      std::vector<Edge> am;
      for (EdgeId id : f.adversary) am.push_back(t_.stream.events[static_cast<std::size_t>(id)]);
      t_.checks.push_back({"adversary_matching", is_matching(am), std::to_string(am.size()) + " edges"});
    }
    return std::move(t_);
  }

  AdversaryTranscript& transcript() { return t_; }

  [[noreturn]] void abort(AdversaryStatus status, int level) {
    t_.status = status;
    t_.detail = status == AdversaryStatus::kBudgetExhausted
                    ? "retry budget exhausted at level " + std::to_string(level)
                    : "algorithm kept neither offered edge at level " + std::to_string(level);
    throw Abort{};
  }

 private:
  VertexId fresh() { return next_vertex_++; }

  EdgeId give(VertexId u, VertexId v, const Rational& w) {
    const Edge e = t_.stream.push(u, v, w);
    handle_.feed(e);
    t_.replies.push_back(holds(e.id));
    return e.id;
  }

  bool holds(EdgeId id) const { return handle_.matchings()[0].contains(id); }

  Rational weight(const std::vector<EdgeId>& ids) const {
    Rational total{0};
    for (EdgeId id : ids) total += t_.stream.events[static_cast<std::size_t>(id)].weight;
    return total;
  }

  Rational held_weight(const std::vector<EdgeId>& ids) const {
    Rational total{0};
    for (EdgeId id : ids) {
      if (holds(id)) total += t_.stream.events[static_cast<std::size_t>(id)].weight;
    }
    return total;
  }

  static ThetaTree merge(int level, const ThetaTree& a, const ThetaTree& b, EdgeId joining) {
    ThetaTree tree;
    tree.level = level;
    tree.edges = a.edges;
    tree.edges.insert(tree.edges.end(), b.edges.begin(), b.edges.end());
    tree.edges.push_back(joining);
    tree.adversary = a.adversary;
    tree.adversary.insert(tree.adversary.end(), b.adversary.begin(), b.adversary.end());
    return tree;
  }

  std::string describe(const ThetaTree& tree) const {
    return "level=" + std::to_string(tree.level) + " alg=" + format_rational(tree.alg) +
           " adv=" + format_rational(tree.adv) + " tree=" + join_ids(tree.edges) +
           " adversary=" + join_ids(tree.adversary);
  }

  void note(const std::string& text) { t_.notes.push_back({t_.stream.size(), "adv " + text}); }

  void discard(ThetaTree tree) {
    std::sort(tree.edges.begin(), tree.edges.end());
    std::sort(tree.adversary.begin(), tree.adversary.end());
    tree.alg = held_weight(tree.edges);
    tree.adv = weight(tree.adversary);
    tree.closed_at = t_.stream.size();
    note("discard " + describe(tree));
    t_.discards.push_back(std::move(tree));
  }

  ThetaTree close(ThetaTree tree, const std::string& branch) {
    std::sort(tree.edges.begin(), tree.edges.end());
    std::sort(tree.adversary.begin(), tree.adversary.end());
    tree.alg = held_weight(tree.edges);
    tree.adv = weight(tree.adversary);
    tree.closed_at = t_.stream.size();
    note("branch level=" + std::to_string(tree.level) + " " + branch + " pending=" + std::to_string(tree.pending));
    ++closed_;

    std::vector<Edge> am;
    bool covers_pending = false;
    for (EdgeId id : tree.adversary) {
      am.push_back(t_.stream.events[static_cast<std::size_t>(id)]);
      covers_pending = covers_pending || am.back().touches(tree.pending);
    }
    if (!is_matching(am) || covers_pending || tree.adv != theta_tree_weight(t_.theta, tree.level)) {
      ++adv_shape_failures_;
    }
    int held = 0;
    bool incident = false;
    for (EdgeId id : tree.edges) {
      if (!holds(id)) continue;
      ++held;
      incident = t_.stream.events[static_cast<std::size_t>(id)].touches(tree.pending);
    }
    if (held != 1 || !incident || tree.alg != pow_rational(t_.theta, tree.level)) ++alg_shape_failures_;
    return tree;
  }

  AlgorithmHandle& handle_;
  int budget_;
  VertexId next_vertex_ = 0;
  AdversaryTranscript t_;
  std::size_t closed_ = 0;
  std::size_t adv_shape_failures_ = 0;
  std::size_t alg_shape_failures_ = 0;
};

}  // namespace

MakeTreeOutcome make_tree(int n, const Rational& theta, AlgorithmHandle& handle, int retry_budget) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  ThetaGame game(theta, handle, retry_budget, n, "make_tree");
  MakeTreeOutcome out;
  try {
    out.tree = game.make(n);
  } catch (const ThetaGame::Abort&) {
  }
  out.transcript = game.finish(out.tree);
  return out;
}

AdversaryTranscript run_theta_adversary(int n, const Rational& theta, AlgorithmHandle& handle, int retry_budget) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  ThetaGame game(theta, handle, retry_budget, n, "adv");
  try {
    game.adv(n);
  } catch (const ThetaGame::Abort&) {
  }
  return game.finish(std::nullopt);
}

StreamFile transcript_file(const AdversaryTranscript& transcript) {
  return StreamFile{transcript.stream, transcript.notes};
}

std::vector<Check> certify_transcript(const StreamFile& file) {
  std::vector<Check> checks;
  const Annotation* header = nullptr;
  for (const Annotation& a : file.annotations) {
    if (a.text.rfind("adv theta ", 0) == 0) {
      header = &a;
      break;
    }
  }
  if (!header) {
    checks.push_back({"transcript_header", false, "no 'adv theta' line"});
    return checks;
  }
  const auto head = key_values(header->text);
  Rational theta;
  int n = 0;
  std::string mode;
  std::optional<OnlineAlgorithm> alg;
  try {
    theta = parse_rational(head.at("theta"));
    n = std::stoi(head.at("n"));
    mode = head.at("mode");
    const AlgorithmSpec spec = parse_algorithm_spec(head.at("algorithm"));
    alg.emplace(spec.kind, spec.params);
  } catch (const std::exception& e) {
    checks.push_back({"transcript_header", false, e.what()});
    return checks;
  }
  if (alg->matchings().size() != 1) {
    checks.push_back({"transcript_header", false, "algorithm keeps more than one matching"});
    return checks;
  }
  checks.push_back({"transcript_header", true, head.at("algorithm")});

  const EdgeStream& stream = file.stream;
  const ValidationReport vr = validate_stream(stream);
  const bool class_ok = vr.ok && stream.declared_class == StreamClass::theta_structured(theta);
  checks.push_back({"stream_class", class_ok, vr.ok ? format_stream_class(stream.declared_class) : vr.reason});

  const Rational bound = theta_discard_bound(theta);
  std::size_t discards = 0;
  std::size_t bad_accounting = 0;
  std::size_t bad_ratio = 0;
  std::optional<Check> final_check;
  std::optional<Check> final_ratio;
  std::string replies;
  std::string recorded_replies;
  bool seen_replies = false;

  auto audit = [&](const std::map<std::string, std::string>& kv, Rational& alg_w, Rational& adv_w) {
    const std::vector<EdgeId> tree = split_ids(kv.at("tree"));
    const std::vector<EdgeId> adversary = split_ids(kv.at("adversary"));
    std::vector<Edge> am;
    alg_w = 0;
    adv_w = 0;
    for (EdgeId id : tree) {
      if (id < 0 || static_cast<std::size_t>(id) >= stream.size()) return false;
      if (alg->matchings()[0].contains(id)) alg_w += stream.events[static_cast<std::size_t>(id)].weight;
    }
    for (EdgeId id : adversary) {
      if (!std::binary_search(tree.begin(), tree.end(), id)) return false;
      am.push_back(stream.events[static_cast<std::size_t>(id)]);
      adv_w += am.back().weight;
    }
    return is_matching(am) && alg_w == parse_rational(kv.at("alg")) && adv_w == parse_rational(kv.at("adv"));
  };

  std::size_t next = 0;
  for (std::size_t t = 0; t <= stream.size(); ++t) {
    while (next < file.annotations.size() && file.annotations[next].position <= t) {
      const std::string& text = file.annotations[next++].text;
      try {
        if (text.rfind("adv discard ", 0) == 0) {
          ++discards;
          Rational a;
          Rational d;
          if (!audit(key_values(text), a, d)) {
            ++bad_accounting;
          } else if ((a > 0 && d / a < bound) || (a == 0 && d <= 0)) {
            ++bad_ratio;
          }
        } else if (text.rfind("adv final ", 0) == 0) {
          const auto kv = key_values(text);
          const std::string status = kv.at("status");
          if (!kv.contains("tree")) {
            final_check = Check{"final_accounting", status != "completed", "status=" + status};
            continue;
          }
          Rational a;
          Rational d;
          const bool ok = audit(kv, a, d);
          final_check = Check{"final_accounting", ok, "status=" + status};
          if (ok && status == "completed" && mode == "adv") {
            const Rational target = theta_final_ratio(theta, n);
            final_ratio = Check{"final_ratio", a > 0 && d / a == target,
                                (a > 0 ? format_rational(d / a) : std::string("inf")) + " target " +
                                    format_rational(target)};
          }
        } else if (text.rfind("adv replies", 0) == 0) {
          seen_replies = true;
          recorded_replies = text.size() > 12 ? text.substr(12) : "";
        }
      } catch (const std::exception&) {
        ++bad_accounting;
      }
    }
    if (t < stream.size()) {
      alg->feed(stream.events[t]);
      replies += alg->matchings()[0].contains(stream.events[t].id) ? '1' : '0';
    }
  }
  checks.push_back({"replay_replies", seen_replies && replies == recorded_replies,
                    std::to_string(stream.size()) + " events"});
  checks.push_back({"discard_accounting", bad_accounting == 0,
                    std::to_string(discards) + " discards, " + std::to_string(bad_accounting) + " mismatches"});
  checks.push_back({"discard_ratio", bad_ratio == 0,
                    std::to_string(bad_ratio) + " below " + format_rational(bound)});
  checks.push_back(final_check.value_or(Check{"final_accounting", false, "no final line"}));
  if (final_ratio) checks.push_back(*final_ratio);
  return checks;
}

// ---------------------------------------------------------------------------
// Barely-random paths adversary

BarelyPathsResult barely_paths_adversary(AlgorithmHandle& handle, int rounds) {
  if (handle.matchings().size() < 2) throw std::invalid_argument("need an algorithm with at least two matchings");
  if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
  BarelyPathsResult out;
  out.stream.declared_class = StreamClass::paths();
  VertexId next = 0;
  auto give = [&](VertexId u, VertexId v) {
    const Edge e = out.stream.push(u, v, Rational(1));
    handle.feed(e);
    return e;
  };
  auto membership = [&](EdgeId id) {
    std::vector<bool> in;
    for (const Matching& m : handle.matchings()) in.push_back(m.contains(id));
    return in;
  };
  // Two fresh edges sharing a vertex; returns {x, y} with x the edge the
  // caller prefers and each paired with its unshared endpoint.
  struct Gadget {
    Edge x, y;
    VertexId x_end, y_end;
  };
  auto gadget = [&](const std::vector<bool>* like) {
    const VertexId p = next++;
    const VertexId q = next++;
    const VertexId s = next++;
    const Edge a = give(p, q);
    const Edge b = give(q, s);
    bool swap = false;
    if (like) {
      swap = membership(b.id) == *like && membership(a.id) != *like;
    } else {
      swap = handle.matchings()[0].contains(b.id) && !handle.matchings()[0].contains(a.id);
    }
    return swap ? Gadget{b, a, s, p} : Gadget{a, b, p, s};
  };

  for (int r = 1; r <= rounds; ++r) {
    const Gadget g1 = gadget(nullptr);
    const std::vector<bool> s = membership(g1.x.id);
    const Gadget g2 = gadget(&s);
    const Edge link = give(g1.x_end, g2.y_end);
    out.notes.push_back({out.stream.size(), "adv round " + std::to_string(r) + " x1=" + std::to_string(g1.x.id) +
                                                " y1=" + std::to_string(g1.y.id) + " x2=" + std::to_string(g2.x.id) +
                                                " y2=" + std::to_string(g2.y.id) +
                                                " link=" + std::to_string(link.id)});
    BarelyPathsRound row;
    row.round = r;
    row.opt = path_collection_cardinality(out.stream.events);
    long total = 0;
    for (const Matching& m : handle.matchings()) total += static_cast<long>(m.size());
    row.alg = ratio(total, static_cast<long>(handle.matchings().size()));
    if (row.alg > 0) row.ratio = Rational(row.opt) / row.alg;
    out.rounds.push_back(std::move(row));
  }
  return out;
}

}  // namespace pmatch

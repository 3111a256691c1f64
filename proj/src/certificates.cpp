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

#include "pmatch/certificates.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "pmatch/lp.hpp"
#include "pmatch/online.hpp"

namespace pmatch {

std::string format_check(const Check& check) {
  std::string out = "check " + check.name + (check.pass ? " pass" : " fail");
  if (!check.detail.empty()) out += " " + check.detail;
  return out;
}

bool exceeds_ratio(const Rational& a, const Rational& b, const Surd& target) {
  if (b <= 0) throw std::invalid_argument("ratio denominator must be positive");
  return Surd(a) > target * Surd(b);
}

Surd mcgregor_ratio_bound(const Surd& gamma) {
  return (Surd(1) + gamma) * (Surd(2) + gamma.inverse());
}

PdTraceReport pd_trace_mcgregor(const EdgeStream& stream, const Surd& gamma) {
  if (gamma.sign() <= 0) throw std::invalid_argument("gamma must be positive");
  PdTraceReport report;
  report.bound = mcgregor_ratio_bound(gamma);
  const Surd scale = Surd(1) + gamma;
  Matching m;
  auto y_of = [&](VertexId x) {
    auto it = report.y.find(x);
    return it == report.y.end() ? Surd(0) : it->second;
  };
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const Edge& e = stream.events[t];
    PdStep step;
    step.index = t + 1;
    step.edge = e.id;
    report.y.try_emplace(e.u, Surd(0));
    report.y.try_emplace(e.v, Surd(0));
    const Rational before = m.weight();
    const StepRecord r = mcgregor_process(m, e, gamma);
    step.accepted = r.accepted;
    step.delta_primal = m.weight() - before;
    if (r.accepted) {
      const Surd target = scale * Surd(e.weight);
      for (VertexId x : {e.u, e.v}) {
        const Surd old = y_of(x);
        if (target > old) {
          step.delta_dual = step.delta_dual + (target - old);
          report.y[x] = target;
        }
        if (y_of(x) < old) step.monotone_ok = false;
      }
    }
    for (std::size_t s = 0; s <= t; ++s) {
      const Edge& f = stream.events[s];
      if (y_of(f.u) + y_of(f.v) < Surd(f.weight)) {
        step.dual_feasible = false;
        report.violations.push_back({step.index, "dual_feasible", f.id});
        break;
      }
    }
    for (const Edge& f : m.members()) {
      const Surd need = scale * Surd(f.weight);
      if (y_of(f.u) < need || y_of(f.v) < need) {
        step.matched_bound_ok = false;
        report.violations.push_back({step.index, "matched_edge_bound", f.id});
        break;
      }
    }
    if (step.delta_dual > report.bound * Surd(step.delta_primal)) {
      step.step_ratio_ok = false;
      report.violations.push_back({step.index, "step_ratio", e.id});
    }
    if (!step.monotone_ok) report.violations.push_back({step.index, "monotone", e.id});
    report.dual = report.dual + step.delta_dual;
    report.steps.push_back(std::move(step));
  }
  report.primal = m.weight();
  return report;
}

namespace {

struct Adjacency {
  std::map<VertexId, std::vector<std::size_t>> at;  // vertex -> indices into tree
};

Adjacency adjacency(std::span<const Edge> tree) {
  Adjacency adj;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    adj.at[tree[i].u].push_back(i);
    adj.at[tree[i].v].push_back(i);
  }
  return adj;
}

std::unordered_map<EdgeId, int> multiplicities(std::span<const Matching> matchings) {
  std::unordered_map<EdgeId, int> mult;
  for (const Matching& m : matchings) {
    for (const Edge& e : m.members()) ++mult[e.id];
  }
  return mult;
}

}  // namespace

RankMap compute_ranks(std::span<const Edge> tree) {
  if (tree.empty()) throw std::invalid_argument("ranks need at least one edge");
  const Adjacency adj = adjacency(tree);
  if (adj.at.size() != tree.size() + 1) throw std::invalid_argument("input is not a tree");
  // connectivity check
  {
    std::set<VertexId> seen{tree.front().u};
    std::deque<VertexId> queue{tree.front().u};
    while (!queue.empty()) {
      const VertexId x = queue.front();
      queue.pop_front();
      for (std::size_t i : adj.at.at(x)) {
        const VertexId y = tree[i].other(x);
        if (seen.insert(y).second) queue.push_back(y);
      }
    }
    if (seen.size() != adj.at.size()) throw std::invalid_argument("input is not connected");
  }
  auto is_leaf = [&](VertexId x) { return adj.at.at(x).size() == 1; };
  RankMap ranks;
  for (const auto& [v, incident] : adj.at) {
    int rank = -1;
    for (std::size_t skip : incident) {
      // farthest original leaf from v without edge `skip`
      std::map<VertexId, int> dist{{v, 0}};
      std::deque<VertexId> queue{v};
      int far = -1;
      while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        if (is_leaf(x)) far = std::max(far, dist[x]);
        for (std::size_t i : adj.at.at(x)) {
          if (i == skip) continue;
          const VertexId y = tree[i].other(x);
          if (dist.emplace(y, dist[x] + 1).second) queue.push_back(y);
        }
      }
      if (rank < 0 || far < rank) rank = far;
    }
    ranks[v] = rank;
  }
  return ranks;
}

std::vector<VertexId> rank_recurrence_mismatches(std::span<const Edge> tree, const RankMap& ranks) {
  const Adjacency adj = adjacency(tree);
  std::vector<VertexId> out;
  for (const auto& [v, incident] : adj.at) {
    int expected = 0;
    if (incident.size() > 1) {
      std::vector<int> nr;
      for (std::size_t i : incident) nr.push_back(ranks.at(tree[i].other(v)));
      std::sort(nr.rbegin(), nr.rend());
      expected = 1 + nr[1];
    }
    if (ranks.at(v) != expected) out.push_back(v);
  }
  return out;
}

std::vector<EdgeClass> classify_edges(std::span<const Edge> tree, std::span<const Matching> matchings) {
  const Adjacency adj = adjacency(tree);
  const auto mult = multiplicities(matchings);
  auto mult_of = [&](EdgeId id) {
    auto it = mult.find(id);
    return it == mult.end() ? 0 : it->second;
  };
  const int k = static_cast<int>(matchings.size());
  std::vector<EdgeClass> out;
  for (const Edge& e : tree) {
    EdgeClass c;
    c.id = e.id;
    c.multiplicity = mult_of(e.id);
    c.coverage = c.multiplicity;
    std::set<EdgeId> around;
    for (VertexId x : {e.u, e.v}) {
      for (std::size_t i : adj.at.at(x)) {
        if (tree[i].id != e.id) around.insert(tree[i].id);
      }
    }
    for (EdgeId f : around) c.coverage += mult_of(f);
    for (const Matching& m : matchings) {
      if (m.covers(e.u) || m.covers(e.v)) ++c.covering;
    }
    const std::size_t du = adj.at.at(e.u).size();
    const std::size_t dv = adj.at.at(e.v).size();
    c.internal = du > 1 && dv > 1;
    c.leaf = du == 1 || dv == 1;
    c.bad = c.covering == k - 1;
    out.push_back(c);
  }
  return out;
}

namespace {

std::map<VertexId, std::vector<EdgeId>> bad_edges_at(std::span<const Edge> tree,
                                                     const std::vector<EdgeClass>& classes) {
  std::map<VertexId, std::vector<EdgeId>> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!classes[i].bad) continue;
    out[tree[i].u].push_back(tree[i].id);
    out[tree[i].v].push_back(tree[i].id);
  }
  return out;
}

}  // namespace

std::vector<LemmaViolation> check_lemma_internal(std::span<const Edge> tree, std::span<const Matching> matchings) {
  std::vector<LemmaViolation> out;
  if (tree.empty()) return out;
  const auto classes = classify_edges(tree, matchings);
  for (const EdgeClass& c : classes) {
    if (c.internal && c.coverage < 4) {
      out.push_back({"internal_coverage", {c.id}, {}, "coverage=" + std::to_string(c.coverage)});
    }
  }
  const auto bad = bad_edges_at(tree, classes);
  const Adjacency adj = adjacency(tree);
  auto bads = [&](VertexId x) {
    auto it = bad.find(x);
    return it == bad.end() ? std::vector<EdgeId>{} : it->second;
  };
  for (const auto& [q, incident] : adj.at) {
    const auto bq = bads(q);
    if (bq.empty()) continue;
    for (std::size_t a = 0; a < incident.size(); ++a) {
      for (std::size_t b = a + 1; b < incident.size(); ++b) {
        const VertexId p = tree[incident[a]].other(q);
        const VertexId r = tree[incident[b]].other(q);
        const auto bp = bads(p);
        const auto br = bads(r);
        bool found = false;
        for (EdgeId x : bp) {
          for (EdgeId y : bq) {
            for (EdgeId z : br) {
              if (!found && x != y && y != z && x != z) {
                out.push_back({"forbidden_configuration", {x, y, z}, {p, q, r}, ""});
                found = true;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<LemmaViolation> check_deg3_lemmas(std::span<const Edge> tree, std::span<const Matching> matchings) {
  std::vector<LemmaViolation> out;
  if (tree.empty()) return out;
  const auto classes = classify_edges(tree, matchings);
  const auto bad = bad_edges_at(tree, classes);
  const Adjacency adj = adjacency(tree);
  auto bads = [&](VertexId x) {
    auto it = bad.find(x);
    return it == bad.end() ? std::vector<EdgeId>{} : it->second;
  };
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Edge& e = tree[i];
    if (classes[i].multiplicity == 0) out.push_back({"unmatched_edge", {e.id}, {}, ""});
    for (EdgeId bu : bads(e.u)) {
      for (EdgeId bv : bads(e.v)) {
        if (bu != e.id && bv != e.id && bu != bv) {
          out.push_back({"bad_on_both_ends", {e.id, bu, bv}, {e.u, e.v}, ""});
        }
      }
    }
  }
  for (const auto& [x, incident] : adj.at) {
    if (incident.size() != 3) continue;
    std::vector<EdgeId> with_bad;
    for (std::size_t i : incident) {
      const Edge& f = tree[i];
      bool has = false;
      for (VertexId end : {f.u, f.v}) {
        for (EdgeId b : bads(end)) has = has || b != f.id;
      }
      if (has) with_bad.push_back(f.id);
    }
    if (with_bad.size() > 1) out.push_back({"degree3_bad_neighbours", with_bad, {x}, ""});
  }
  return out;
}

std::vector<std::size_t> internal_coverage_failing_prefixes(const EdgeStream& stream) {
  std::vector<std::size_t> out;
  MultiMatchingState state(4);
  for (std::size_t t = 0; t < stream.size(); ++t) {
    barely_process(state, stream.events[t]);
    const std::span<const Edge> prefix(stream.events.data(), t + 1);
    for (const LemmaViolation& v : check_lemma_internal(prefix, state.matchings())) {
      if (v.kind == "internal_coverage") {
        out.push_back(t + 1);
        break;
      }
    }
  }
  return out;
}

namespace {

struct ChargeModel {
  std::vector<std::size_t> matched;        // tree indices of matched edges (one variable each)
  std::vector<int> copies;                 // multiplicity per variable
  RationalMatrix g;
  std::vector<Rational> h;
};

// Variable s_j is the share of matched edge j given to its u endpoint
// (summed over copies); its v endpoint receives copies_j - s_j.
ChargeModel build_charge_model(std::span<const Edge> tree, std::span<const Matching> matchings,
                               const Rational& target) {
  ChargeModel model;
  const auto mult = multiplicities(matchings);
  std::unordered_map<EdgeId, std::size_t> var;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    auto it = mult.find(tree[i].id);
    if (it == mult.end() || it->second == 0) continue;
    var[tree[i].id] = model.matched.size();
    model.matched.push_back(i);
    model.copies.push_back(it->second);
  }
  const std::size_t n = model.matched.size();
  const Adjacency adj = adjacency(tree);
  for (const Edge& e : tree) {
    std::vector<Rational> row(n);
    Rational constant{0};
    if (auto it = var.find(e.id); it != var.end()) constant += model.copies[it->second];
    for (VertexId x : {e.u, e.v}) {
      for (std::size_t i : adj.at.at(x)) {
        const Edge& f = tree[i];
        if (f.id == e.id) continue;
        auto it = var.find(f.id);
        if (it == var.end()) continue;
        if (f.u == x) {
          row[it->second] += 1;
        } else {
          constant += model.copies[it->second];
          row[it->second] -= 1;
        }
      }
    }
    // constant + row.s >= target  <=>  -row.s <= constant - target
    for (auto& c : row) c = -c;
    model.g.push_back(std::move(row));
    model.h.push_back(constant - target);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(n);
    row[j] = 1;
    model.g.push_back(std::move(row));
    model.h.push_back(Rational(model.copies[j]));
  }
  return model;
}

std::map<VertexId, Rational> duals_from_shares(std::span<const Edge> tree, const std::vector<ChargeShare>& shares) {
  std::unordered_map<EdgeId, const Edge*> by_id;
  for (const Edge& e : tree) by_id[e.id] = &e;
  std::map<VertexId, Rational> y;
  for (const Edge& e : tree) {
    y.try_emplace(e.u, 0);
    y.try_emplace(e.v, 0);
  }
  for (const ChargeShare& s : shares) {
    const Edge& e = *by_id.at(s.edge);
    y[e.u] += s.to_u;
    y[e.v] += s.to_v;
  }
  return y;
}

}  // namespace

ChargeResult charge_feasibility(std::span<const Edge> tree, std::span<const Matching> matchings,
                                const Rational& epsilon) {
  if (tree.size() > kChargeEdgeGuard) {
    throw GuardExceeded("charge feasibility limited to " + std::to_string(kChargeEdgeGuard) + " edges");
  }
  ChargeResult out;
  out.target = 2 + epsilon;
  const ChargeModel model = build_charge_model(tree, matchings, out.target);
  const FeasibilityResult r = solve_inequalities(model.g, model.h);
  if (!r.feasible) {
    out.farkas = r.farkas;
    out.certificate_verified = verify_farkas(model.g, model.h, r.farkas);
    return out;
  }
  out.feasible = true;
  for (std::size_t j = 0; j < model.matched.size(); ++j) {
    const Rational per_copy = r.point[j] / model.copies[j];
    for (int c = 0; c < model.copies[j]; ++c) {
      out.shares.push_back({tree[model.matched[j]].id, c, per_copy, Rational(1 - per_copy)});
    }
  }
  out.y = duals_from_shares(tree, out.shares);
  bool first = true;
  for (const Edge& e : tree) {
    const Rational margin = out.y[e.u] + out.y[e.v] - out.target;
    if (first || margin < out.min_margin) out.min_margin = margin;
    first = false;
  }
  out.certificate_verified = verify_point(model.g, model.h, r.point) && verify_charge_witness(tree, matchings, out);
  return out;
}

bool verify_charge_witness(std::span<const Edge> tree, std::span<const Matching> matchings,
                           const ChargeResult& result) {
  if (!result.feasible) return false;
  const auto mult = multiplicities(matchings);
  std::unordered_map<EdgeId, int> seen;
  for (const ChargeShare& s : result.shares) {
    if (s.to_u < 0 || s.to_v < 0 || s.to_u + s.to_v != 1) return false;
    ++seen[s.edge];
  }
  for (const auto& [id, count] : mult) {
    if (count > 0 && seen[id] != count) return false;
  }
  for (const auto& [id, count] : seen) {
    auto it = mult.find(id);
    if (it == mult.end() || it->second != count) return false;
  }
  const auto y = duals_from_shares(tree, result.shares);
  for (const Edge& e : tree) {
    if (y.at(e.u) + y.at(e.v) < result.target) return false;
  }
  return true;
}

Rational half_split_min(std::span<const Edge> tree, std::span<const Matching> matchings) {
  std::vector<ChargeShare> shares;
  const auto mult = multiplicities(matchings);
  for (const Edge& e : tree) {
    auto it = mult.find(e.id);
    if (it == mult.end()) continue;
    for (int c = 0; c < it->second; ++c) shares.push_back({e.id, c, ratio(1, 2), ratio(1, 2)});
  }
  const auto y = duals_from_shares(tree, shares);
  Rational best;
  bool first = true;
  for (const Edge& e : tree) {
    const Rational v = (y.at(e.u) + y.at(e.v)) / static_cast<long>(matchings.size());
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

}  // namespace pmatch

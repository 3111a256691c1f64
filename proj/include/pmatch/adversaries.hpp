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

#ifndef PMATCH_ADVERSARIES_HPP
#define PMATCH_ADVERSARIES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pmatch/certificates.hpp"
#include "pmatch/graph.hpp"
#include "pmatch/numbers.hpp"
#include "pmatch/online.hpp"
#include "pmatch/stream_io.hpp"

namespace pmatch {

// ---------------------------------------------------------------------------
// Local policies

/// A randomized local algorithm: the probability of switching to a new edge
/// of weight w given the weights of the 0, 1 or 2 matched edges it touches.
struct LocalPolicy {
  std::string name;
  std::function<Rational(const Rational& w)> f0;
  std::function<Rational(const Rational& w1, const Rational& w)> f1;
  std::function<Rational(const Rational& w1, const Rational& w2, const Rational& w)> f2;
};

/// McGregor's rule as a policy: switch iff w > (1 + gamma) * (sum of conflicts).
LocalPolicy mcgregor_policy(const Surd& gamma);

/// "mcgregor:gamma=<surd>", "coin:p=<rational>" (switch w.p. p whatever the
/// weights), "always" (always switch), "greedy" (take free edges only) and
/// "reject" (never take anything).
LocalPolicy parse_policy(const std::string& spec);

/// One Bernoulli draw. Consumes a generator value only when 0 < p < 1 and
/// accepts iff the value is below floor(p * 2^64).
bool bernoulli(const Rational& p, std::mt19937_64& rng);

/// Generator seed for trial t of a run seeded with seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

class LocalPolicyAlgorithm final : public AlgorithmHandle {
 public:
  LocalPolicyAlgorithm(LocalPolicy policy, std::uint64_t seed);

  void feed(const Edge& e) override;
  std::span<const Matching> matchings() const override { return state_.matchings(); }
  std::string describe() const override { return "policy:" + policy_.name; }

 private:
  LocalPolicy policy_;
  MultiMatchingState state_{1};
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Layered lower-bound instance

struct LocalLowerBoundParams {
  Rational beta{2};
  Rational delta = ratio(1, 50);
  Rational epsilon = ratio(1, 100);
  int m = 1;
  int n = 1;

  static Surd alpha() { return alpha_surd(); }
  /// beta * (alpha - 1) / (alpha - beta).
  Surd gamma() const;
  /// Throws std::invalid_argument unless 1 <= beta < alpha,
  /// 0 < delta < 1/alpha, epsilon > 0 and m, n >= 1.
  void validate() const;
};

struct ProbeResult {
  bool ok = false;
  Rational w1;
  Rational x;
  Rational y;
  Rational lo;  // first grid point, just above w1/alpha
  Rational hi;  // last grid point, just below gamma*w1
  std::size_t grid_points = 0;
  std::string violation;  // set when the policy breaks the model
  std::vector<Check> checks;
};

/// Scans lo, lo+eps, ..., hi for the first point x with f1(w1,x) >= delta and
/// takes y as the point before it. Both grid ends are rational and lie
/// inside [w1/alpha, gamma*w1].
ProbeResult probe_policy_thresholds(const LocalPolicy& policy, const Rational& w1,
                                    const LocalLowerBoundParams& params);

class PolicyModelViolation : public std::runtime_error {
 public:
  explicit PolicyModelViolation(ProbeResult probe)
      : std::runtime_error("policy outside the local model at w1=" + format_rational(probe.w1) + ": " +
                           probe.violation),
        probe_(std::move(probe)) {}
  const ProbeResult& probe() const { return probe_; }

 private:
  ProbeResult probe_;
};

enum class LayerRole : std::uint8_t { kComplete, kMatching };

struct LayeredInstance {
  LocalLowerBoundParams params;
  std::vector<Rational> x;  // x_1 .. x_{n+1}
  std::vector<Rational> y;  // y_1 .. y_n
  std::vector<ProbeResult> probes;
  EdgeStream stream;
  std::vector<int> layer;       // per edge, 1 .. n+1
  std::vector<LayerRole> role;  // per edge
  Rational opt_lower_bound;     // m * (y_1 + ... + y_n + y_n)
  std::vector<Check> checks;

  VertexId a(int i, int j) const;  // 1-based layer and position
  VertexId b(int i, int j) const;
  /// Weight of the complete block J_i and of the matching M_i (i <= n+1).
  const Rational& j_weight(int i) const;
  const Rational& m_weight(int i) const;
};

/// Throws PolicyModelViolation when a probe fails.
LayeredInstance build_layered_instance(const LocalPolicy& policy, const LocalLowerBoundParams& params);

/// (n+1) * (m^2 + m).
std::size_t layered_event_count(int m, int n);

struct LayerStat {
  std::string name;  // "Y1", "X2", ...
  double mean = 0;
  double half_width = 0;          // one-sided 95% (1.645 standard errors)
  std::optional<Rational> bound;  // expected-count bound, when one applies
  bool flagged = false;           // mean - half_width > bound
};

struct LayeredMeasurement {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<LayerStat> y;  // Y_1 .. Y_{n+1}
  std::vector<LayerStat> x;  // X_1 .. X_{n+1}
  Rational mean_alg;
  double alg_half_width = 0;
  Rational opt_lower_bound;
  bool any_flagged = false;
};

/// Monte Carlo over independent trials of the policy on the instance.
/// Trial t draws from std::mt19937_64(trial_seed(seed, t)), exactly as a
/// LocalPolicyAlgorithm with that seed would.
LayeredMeasurement measure_layered(const LocalPolicy& policy, const LayeredInstance& instance,
                                   std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Theta-structured tree adversary

/// A tree built by the recursion, closed either as a result or a discard.
struct ThetaTree {
  int level = 0;
  std::vector<EdgeId> edges;
  std::vector<EdgeId> adversary;
  VertexId pending = -1;
  Rational alg{0};  // weight the algorithm holds inside the tree
  Rational adv{0};
  std::size_t closed_at = 0;  // events revealed when closed
};

enum class AdversaryStatus { kCompleted, kBudgetExhausted, kModelViolation };
std::string adversary_status_name(AdversaryStatus status);

struct AdversaryTranscript {
  std::string algorithm;
  Rational theta;
  int n = 0;
  int retry_budget = 64;
  EdgeStream stream;
  std::vector<bool> replies;  // edge held right after it was fed
  std::vector<ThetaTree> discards;
  std::optional<ThetaTree> final_tree;
  AdversaryStatus status = AdversaryStatus::kCompleted;
  std::string detail;
  std::vector<Annotation> notes;  // "adv ..." lines
  std::vector<Check> checks;
};

/// (theta^{n+1} - 2^{n+1}) / (theta - 2).
Rational theta_tree_weight(const Rational& theta, int n);
/// 2 + 2 (1 - (2/theta)^n) / (theta - 2).
Rational theta_final_ratio(const Rational& theta, int n);
/// 2 + 2 / (theta - 2).
Rational theta_discard_bound(const Rational& theta);

struct MakeTreeOutcome {
  std::optional<ThetaTree> tree;
  AdversaryTranscript transcript;
};

/// The handle must keep a single matching. Throws std::invalid_argument
/// for theta < 4 or n < 0.
MakeTreeOutcome make_tree(int n, const Rational& theta, AlgorithmHandle& handle, int retry_budget = 64);

/// Top-level game for n >= 1: two subtrees, the joining edge, then one more
/// edge of weight theta^n chosen after the algorithm's reply.
AdversaryTranscript run_theta_adversary(int n, const Rational& theta, AlgorithmHandle& handle,
                                        int retry_budget = 64);

/// Stream plus "# adv" lines.
StreamFile transcript_file(const AdversaryTranscript& transcript);

/// Replays a serialized transcript against the algorithm named in its
/// header and re-derives every recorded number.
std::vector<Check> certify_transcript(const StreamFile& file);

// ---------------------------------------------------------------------------
// Adaptive adversary for two-matching path algorithms

struct BarelyPathsRound {
  int round = 0;
  long opt = 0;        // OPT of the whole stream so far
  Rational alg{0};     // (1/k) sum |M_i| so far
  std::optional<Rational> ratio;
};

struct BarelyPathsResult {
  EdgeStream stream;
  std::vector<BarelyPathsRound> rounds;
  std::vector<Annotation> notes;
};

/// Each round reveals two fresh two-edge paths, reads which matchings took
/// which edge, and joins them by a fifth edge. Requires a handle with at
/// least two matchings.
BarelyPathsResult barely_paths_adversary(AlgorithmHandle& handle, int rounds);

}  // namespace pmatch

#endif  // PMATCH_ADVERSARIES_HPP

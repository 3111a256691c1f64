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

// Python module _pmatch. Rationals cross the boundary as "p/q" strings and
// quadratic surds as "a+b*sqrt2" strings; the pure-Python wrapper turns the
// former into fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pmatch/adversaries.hpp"
#include "pmatch/certificates.hpp"
#include "pmatch/harness.hpp"
#include "pmatch/oracle.hpp"
#include "pmatch/stream_io.hpp"

namespace py = pybind11;
using namespace pmatch;

namespace {

py::list checks_to_list(const std::vector<Check>& checks) {
  py::list out;
  for (const Check& c : checks) out.append(py::make_tuple(c.name, c.pass, c.detail));
  return out;
}

py::object opt_rational(const std::optional<Rational>& r) {
  return r ? py::cast(format_rational(*r)) : py::none();
}

std::unique_ptr<AlgorithmHandle> make_handle(const std::string& spec, std::uint64_t seed) {
  if (spec.rfind("policy:", 0) == 0) {
    return std::make_unique<LocalPolicyAlgorithm>(parse_policy(spec.substr(7)), seed);
  }
  const AlgorithmSpec a = parse_algorithm_spec(spec);
  return std::make_unique<OnlineAlgorithm>(a.kind, a.params, seed);
}

py::list matchings_to_list(std::span<const Matching> ms) {
  py::list out;
  for (const Matching& m : ms) out.append(py::cast(m.edge_ids()));
  return out;
}

py::dict tree_to_dict(const ThetaTree& t) {
  py::dict d;
  d["level"] = t.level;
  d["alg"] = format_rational(t.alg);
  d["adv"] = format_rational(t.adv);
  d["edges"] = t.edges;
  d["adversary"] = t.adversary;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pmatch, m) {
  m.doc() = "Online weighted matching: algorithms, oracles and certificates";

  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<EdgeStream>(m, "Stream")
      .def(py::init<>())
      .def_static("from_text", [](const std::string& text) { return parse_stream_text(text).stream; })
      .def_static("read", [](const std::string& path) { return read_stream_file(path).stream; })
      .def("to_text", [](const EdgeStream& s) { return emit_stream_text(s); })
      .def(
          "push",
          [](EdgeStream& s, VertexId u, VertexId v, const std::string& w) { return s.push(u, v, parse_rational(w)).id; },
          py::arg("u"), py::arg("v"), py::arg("weight") = "1")
      .def_property(
          "declared_class", [](const EdgeStream& s) { return format_stream_class(s.declared_class); },
          [](EdgeStream& s, const std::string& text) {
            // Same syntax as the stream header: "<kind>" or "theta_structured theta=<r>".
            s.declared_class = parse_stream_text("stream " + text + "\n").stream.declared_class;
          })
      .def_property_readonly("edges",
                             [](const EdgeStream& s) {
                               py::list out;
                               for (const Edge& e : s.events) {
                                 out.append(py::make_tuple(e.id, e.u, e.v, format_rational(e.weight)));
                               }
                               return out;
                             })
      .def("__len__", &EdgeStream::size)
      .def("validate", [](const EdgeStream& s) {
        const ValidationReport r = validate_stream(s);
        return py::make_tuple(r.ok, r.event_index, r.reason);
      });

  m.def(
      "offline_opt",
      [](const EdgeStream& s, std::size_t guard) {
        const OfflineResult r = offline_opt(s.events, OracleOptions{guard});
        return py::make_tuple(format_rational(r.value), r.witness);
      },
      py::arg("stream"), py::arg("guard") = 30, "Maximum weight matching: (value, sorted edge ids).");

  m.def(
      "run_algorithm",
      [](const std::string& spec, const EdgeStream& s, std::uint64_t seed) {
        auto h = make_handle(spec, seed);
        for (const Edge& e : s.events) h->feed(e);
        return matchings_to_list(h->matchings());
      },
      py::arg("algorithm"), py::arg("stream"), py::arg("seed") = 0,
      "Feeds the stream and returns the final matchings as edge id lists.");

  m.def(
      "exact_expectation",
      [](const std::string& spec, const EdgeStream& s) {
        const AlgorithmSpec a = parse_algorithm_spec(spec);
        const ExpectationResult r = exact_expectation(a.kind, s, a.params);
        py::list dist;
        for (const WeightedOutcome& o : r.distribution) {
          dist.append(py::make_tuple(o.edges, format_rational(o.mass), format_rational(o.weight)));
        }
        return py::make_tuple(format_rational(r.expected_size), format_rational(r.expected_weight), dist);
      },
      py::arg("algorithm"), py::arg("stream"));

  m.def(
      "pd_trace",
      [](const EdgeStream& s, const std::string& gamma) {
        const PdTraceReport r = pd_trace_mcgregor(s, parse_surd(gamma));
        py::dict d;
        d["ok"] = r.ok();
        py::list v;
        for (const PdViolation& x : r.violations) v.append(py::make_tuple(x.step, x.invariant, x.witness));
        d["violations"] = v;
        d["primal"] = format_rational(r.primal);
        d["dual"] = format_surd(r.dual);
        d["bound"] = format_surd(r.bound);
        return d;
      },
      py::arg("stream"), py::arg("gamma") = "1");

  m.def(
      "run_experiment",
      [](const std::string& algorithm, const std::string& source, const std::string& mode,
         const std::vector<std::string>& checks, const std::optional<std::string>& target, std::size_t workers) {
        ExperimentConfig c;
        c.algorithm = parse_algorithm_spec(algorithm);
        c.source = source;
        parse_mode(mode, c);
        c.checks = checks;
        if (target) c.target = parse_surd(*target);
        c.workers = workers;
        RatioReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c);
        }
        py::list rows;
        for (const RatioRow& row : r.rows) {
          py::dict d;
          d["key"] = row.key;
          d["events"] = row.events;
          d["opt"] = format_rational(row.opt);
          d["alg"] = format_rational(row.alg);
          d["ratio"] = opt_rational(row.ratio);
          d["worst_prefix"] = opt_rational(row.worst_prefix);
          d["checks"] = checks_to_list(row.checks);
          d["error"] = row.error;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["min_ratio"] = opt_rational(r.min_ratio);
        out["max_ratio"] = opt_rational(r.max_ratio);
        out["checks"] = checks_to_list(r.checks);
        out["all_pass"] = r.all_pass();
        out["text"] = format_report(r);
        return out;
      },
      py::arg("algorithm"), py::arg("source"), py::arg("mode") = "exact",
      py::arg("checks") = std::vector<std::string>{}, py::arg("target") = py::none(), py::arg("workers") = 1);

  m.def("count_growing_tree_streams", &count_growing_tree_streams, py::arg("n"),
        py::arg("degree_cap") = py::none());
  m.def("gen_fixture_b3", &gen_fixture_b3, py::arg("depth"));
  m.def(
      "gen_mcgregor_chain", [](int length, const std::string& gamma) { return gen_mcgregor_chain(length, parse_surd(gamma)); },
      py::arg("length"), py::arg("gamma") = "1");

  m.def(
      "theta_adversary",
      [](const std::string& algorithm, const std::string& theta, int n, int budget) {
        auto h = make_handle(algorithm, 0);
        const AdversaryTranscript t = run_theta_adversary(n, parse_rational(theta), *h, budget);
        py::dict d;
        d["algorithm"] = t.algorithm;
        d["status"] = adversary_status_name(t.status);
        d["detail"] = t.detail;
        py::list discards;
        for (const ThetaTree& x : t.discards) discards.append(tree_to_dict(x));
        d["discards"] = discards;
        d["final"] = t.final_tree ? py::object(tree_to_dict(*t.final_tree)) : py::none();
        d["checks"] = checks_to_list(t.checks);
        d["transcript"] = emit_stream_text(transcript_file(t));
        return d;
      },
      py::arg("algorithm"), py::arg("theta") = "4", py::arg("n") = 6, py::arg("budget") = 64);

  m.def(
      "certify_transcript", [](const std::string& text) { return checks_to_list(certify_transcript(parse_stream_text(text))); },
      py::arg("text"));

  m.def(
      "barely_paths_adversary",
      [](const std::string& algorithm, int rounds) {
        auto h = make_handle(algorithm, 0);
        const BarelyPathsResult r = barely_paths_adversary(*h, rounds);
        py::list out;
        for (const BarelyPathsRound& row : r.rounds) {
          out.append(py::make_tuple(row.round, row.opt, format_rational(row.alg), opt_rational(row.ratio)));
        }
        return out;
      },
      py::arg("algorithm") = "barely2_paths", py::arg("rounds") = 10);

  m.def(
      "probe",
      [](const std::string& policy, const std::string& w1, const std::string& delta, const std::string& epsilon) {
        LocalLowerBoundParams p;
        p.delta = parse_rational(delta);
        p.epsilon = parse_rational(epsilon);
        const ProbeResult r = probe_policy_thresholds(parse_policy(policy), parse_rational(w1), p);
        py::dict d;
        d["ok"] = r.ok;
        d["x"] = format_rational(r.x);
        d["y"] = format_rational(r.y);
        d["violation"] = r.violation;
        d["checks"] = checks_to_list(r.checks);
        return d;
      },
      py::arg("policy"), py::arg("w1") = "1", py::arg("delta") = "1/50", py::arg("epsilon") = "1/100");
}

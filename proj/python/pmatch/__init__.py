# Copyright 2026 The pmatch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Online weighted matching: algorithms, offline oracles, certificates and
adversaries, backed by an exact-arithmetic C++ core.

Weights and ratios come back as fractions.Fraction. Quantities in Q(sqrt 2)
stay strings of the form "a+b*sqrt2".
"""

from fractions import Fraction

from . import _pmatch
from ._pmatch import (
    ContractViolation,
    GuardExceeded,
    ParseError,
    Stream,
    certify_transcript,
    count_growing_tree_streams,
    gen_fixture_b3,
    gen_mcgregor_chain,
    pd_trace,
    run_algorithm,
)

__all__ = [
    "ContractViolation",
    "GuardExceeded",
    "ParseError",
    "Stream",
    "barely_paths_adversary",
    "certify_transcript",
    "count_growing_tree_streams",
    "edges",
    "exact_expectation",
    "gen_fixture_b3",
    "gen_mcgregor_chain",
    "offline_opt",
    "pd_trace",
    "probe",
    "run_algorithm",
    "run_experiment",
    "theta_adversary",
]


def _frac(text):
    return None if text is None else Fraction(text)


def edges(stream):
    """(id, u, v, weight) tuples with Fraction weights."""
    return [(i, u, v, Fraction(w)) for i, u, v, w in stream.edges]


def offline_opt(stream, guard=30):
    value, witness = _pmatch.offline_opt(stream, guard)
    return Fraction(value), witness


def exact_expectation(algorithm, stream):
    size, weight, dist = _pmatch.exact_expectation(algorithm, stream)
    return {
        "expected_size": Fraction(size),
        "expected_weight": Fraction(weight),
        "distribution": [(ids, Fraction(p), Fraction(w)) for ids, p, w in dist],
    }


def run_experiment(algorithm, source, mode="exact", checks=(), target=None, workers=1):
    report = _pmatch.run_experiment(algorithm, source, mode, list(checks),
                                    None if target is None else str(target), workers)
    for row in report["rows"]:
        for key in ("opt", "alg", "ratio", "worst_prefix"):
            row[key] = _frac(row[key])
    report["min_ratio"] = _frac(report["min_ratio"])
    report["max_ratio"] = _frac(report["max_ratio"])
    return report


def theta_adversary(algorithm, theta="4", n=6, budget=64):
    out = _pmatch.theta_adversary(algorithm, str(theta), n, budget)
    for tree in out["discards"] + ([out["final"]] if out["final"] else []):
        tree["alg"] = Fraction(tree["alg"])
        tree["adv"] = Fraction(tree["adv"])
    return out


def barely_paths_adversary(algorithm="barely2_paths", rounds=10):
    return [(r, opt, Fraction(alg), _frac(ratio))
            for r, opt, alg, ratio in _pmatch.barely_paths_adversary(algorithm, rounds)]


def probe(policy, w1="1", delta="1/50", epsilon="1/100"):
    out = _pmatch.probe(policy, str(w1), str(delta), str(epsilon))
    out["x"] = Fraction(out["x"])
    out["y"] = Fraction(out["y"])
    return out

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

from fractions import Fraction

import pytest

import pmatch


def small_path():
    s = pmatch.Stream()
    s.declared_class = "path_collection"
    s.push(1, 2)
    s.push(0, 1)
    s.push(2, 3)
    return s


def test_stream_round_trip():
    s = small_path()
    assert len(s) == 3
    assert s.validate()[0]
    again = pmatch.Stream.from_text(s.to_text())
    assert again.edges == s.edges
    assert pmatch.edges(s)[0] == (0, 1, 2, Fraction(1))


def test_oracle_and_algorithms():
    s = small_path()
    value, witness = pmatch.offline_opt(s)
    assert value == 2
    assert witness == [1, 2]
    assert pmatch.run_algorithm("greedy", s) == [[0]]
    exp = pmatch.exact_expectation("paths_coinflip", s)
    assert exp["expected_size"] == Fraction(3, 2)
    assert sum(p for _, p, _ in exp["distribution"]) == 1


def test_weighted_mcgregor_and_pd():
    s = pmatch.Stream()
    s.push(0, 1, "1")
    s.push(1, 2, "5/2")
    assert pmatch.run_algorithm("mcgregor:gamma=1", s) == [[1]]
    pd = pmatch.pd_trace(s, "sqrt2/2")
    assert pd["ok"]
    assert pd["violations"] == []


def test_experiment_report():
    r = pmatch.run_experiment("paths_coinflip", "enum:paths:3", checks=["bound", "path_bounds"],
                              target="4/3")
    assert len(r["rows"]) == 6
    assert r["all_pass"]
    assert r["max_ratio"] <= Fraction(4, 3)
    assert r["text"].startswith("report algorithm=paths_coinflip")


def test_theta_adversary_and_certify():
    out = pmatch.theta_adversary("mcgregor:gamma=sqrt2/2", 4, 3)
    assert out["status"] == "completed"
    final = out["final"]
    assert final["adv"] / final["alg"] == 2 + (1 - Fraction(1, 8))
    assert all(ok for _, ok, _ in pmatch.certify_transcript(out["transcript"]))


def test_other_adversaries_and_probe():
    rounds = pmatch.barely_paths_adversary(rounds=3)
    assert [r[3] for r in rounds] == [Fraction(3, 2)] * 3
    p = pmatch.probe("mcgregor:gamma=1")
    assert p["ok"]
    assert p["y"] == 2


def test_errors():
    assert pmatch.count_growing_tree_streams(4) == 24
    with pytest.raises(pmatch.GuardExceeded):
        pmatch.count_growing_tree_streams(10)
    with pytest.raises(ValueError):
        pmatch.Stream.from_text("stream nonsense\n")

"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS line per
criterion; any failure is reported by pytest as usual.
"""

import json
import math
import sys
import time

import numpy as np
import pytest

import signalkg as sk
from signalkg.cli import cli_main
from signalkg.compiler import NodeId, compile_bn, export_bn, import_bn
from signalkg.inference import SamplerConfig, exact_enumeration, likelihood_weighting
from signalkg.inference import evidence_from_observations
from signalkg.kgmodel import AttenuationLaw, Barrier, SensorSpec, parse_kb, serialize_kb
from signalkg.observations import export_observations, parse_observations
from signalkg.propagation import Point2D, detection_prob, received_level
from signalkg.simulator import sample_assignments, simulate

from randnets import random_case

# Calibrated once against the enumeration oracle, then frozen with the bundled
# knowledge base; see the fixture header comment.
FROZEN_ATTACKER_POSTERIOR = 0.970527562291729

ATTACKER = NodeId("entity", ("attacker",))
DETECTED_GLASS = NodeId("detected", ("mic-1", "glass"))


def _ok(name: str) -> None:
    print(f"\nACCEPTANCE PASS: {name}")


def test_paper_scenario_reproduction(building_kb, building_bn):
    assert building_kb.entities["attacker"].prior_presence == 0.5
    start = time.perf_counter()
    posterior = exact_enumeration(building_bn, {DETECTED_GLASS: True})
    elapsed = time.perf_counter() - start
    p = posterior.p_true[ATTACKER]
    assert abs(p - 0.97) <= 0.01
    assert p == FROZEN_ATTACKER_POSTERIOR
    assert elapsed < 1.0
    _ok(f"paper-scenario reproduction (P(attacker|glass) = {p:.6f}, {elapsed * 1e3:.0f} ms)")


def test_sampler_vs_oracle(building_bn):
    exact = exact_enumeration(building_bn, {DETECTED_GLASS: True})
    start = time.perf_counter()
    approx = likelihood_weighting(
        building_bn, {DETECTED_GLASS: True}, SamplerConfig(n_samples=20000, seed=42)
    )
    elapsed = time.perf_counter() - start
    worst = max(abs(exact.p_true[n] - approx.p_true[n]) for n in exact.p_true)
    assert worst <= 0.02
    assert elapsed < 2.0
    _ok(f"sampler vs oracle at 20000 samples (max error {worst:.4f}, {elapsed * 1e3:.0f} ms)")


def test_randomized_oracle_suite():
    start = time.perf_counter()
    worst = 0.0
    for index in range(50):
        _, bn, evidence = random_case(index)
        assert len(bn.nodes) <= 12
        exact = exact_enumeration(bn, evidence)
        approx = likelihood_weighting(bn, evidence, SamplerConfig(n_samples=50000, seed=index))
        worst = max(
            worst, max(abs(exact.p_true[n] - approx.p_true[n]) for n in exact.p_true)
        )
    elapsed = time.perf_counter() - start
    assert worst <= 0.03
    assert elapsed < 60.0
    _ok(f"randomized oracle suite, 50 KBs (max error {worst:.4f}, {elapsed:.1f} s)")


def test_forward_model_equivalence(building_bn):
    marginals = exact_enumeration(building_bn, {}).p_true
    vals = sample_assignments(building_bn, np.arange(100000, dtype=np.uint64))
    detected = [nid for nid in building_bn.node_ids() if nid.kind == "detected"]
    assert detected
    worst = 0.0
    for nid in detected:
        freq = float(vals[:, building_bn.index_of(nid)].mean())
        worst = max(worst, abs(freq - marginals[nid]))
    assert worst <= 0.01
    _ok(f"forward-model equivalence over 100000 seeds (max gap {worst:.4f})")


def test_propagation_math():
    law = AttenuationLaw("inv", "inverse-square", 1.0)
    wall = Barrier("w", (Point2D(0, 0), Point2D(0, 1)), 10.0)
    assert received_level(80.0, law, 10.0, [wall]) == 50.0
    drop = received_level(80.0, law, 6.0) - received_level(80.0, law, 12.0)
    assert abs(drop - 20.0 * math.log10(2.0)) <= 1e-9
    sensor = SensorSpec("s", "s", Point2D(0, 0), "c", 47.5, 3.25)
    assert abs(detection_prob(47.5, sensor) - 0.5) <= 1e-12
    _ok("propagation math (inverse-square, wall loss, logistic midpoint)")


def test_determinism_across_runs_and_worker_counts(tmp_path, capsys):
    kb = str(sk.demo_kb_path("building"))
    evidence = tmp_path / "glass.json"
    evidence.write_text(
        json.dumps({"observations": [{"sensor": "mic-1", "class": "glass", "result": True}]})
    )
    compiles = []
    for run in range(2):
        out = tmp_path / f"bn-{run}.json"
        assert cli_main(["compile", kb, "--out", str(out)]) == 0
        compiles.append(out.read_bytes())
    assert compiles[0] == compiles[1]

    infers = []
    for workers in ("1", "4", "1", "4"):
        assert (
            cli_main(
                ["infer", kb, "--evidence", str(evidence), "--seed", "3", "--workers", workers]
            )
            == 0
        )
        infers.append(capsys.readouterr().out.encode())
    assert len(set(infers)) == 1
    with capsys.disabled():
        _ok("byte-identical compile and seeded infer across runs and workers {1, 4}")


def test_round_trips(building_text, building_bn, building_kb):
    kb1 = parse_kb(building_text)
    doc = serialize_kb(kb1)
    kb2 = parse_kb(doc)
    assert kb2 == kb1
    assert serialize_kb(kb2) == doc  # fixpoint after one cycle

    exported = export_bn(building_bn)
    assert export_bn(import_bn(exported)) == exported

    _, records = simulate(building_bn, building_kb, 17)
    direct = evidence_from_observations(records, building_bn, building_kb)
    reparsed = parse_observations(export_observations(records))
    assert evidence_from_observations(reparsed, building_bn, building_kb) == direct
    _ok("round trips: KB Turtle fixpoint, BN JSON byte-stable, JSON-LD evidence identity")


def test_primary_runs_without_secondary_component():
    assert not any(m.startswith("frontend") for m in sys.modules)
    _ok("primary acceptance suite runs with no secondary component built")

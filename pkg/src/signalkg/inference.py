"""Posterior inference over compiled networks.

Likelihood weighting is the production engine; exact enumeration is the
small-network oracle. Both return a Posterior mapping every node to its
probability of being true given the evidence.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .compiler import BayesianNetwork, NodeId
from .errors import (
    ConflictingEvidence,
    NetworkTooLarge,
    RecompilationNeeded,
    UnknownEvidence,
    UnknownNode,
    ZeroProbabilityEvidence,
    ZeroWeightEvidence,
)
from .kgmodel import KnowledgeBase
from .rng import uniform_block

#: Evidence is an assignment of observed truth values, detected nodes by convention.
Evidence = dict[NodeId, bool]

#: Node count above which exact enumeration refuses to run.
ENUMERATION_GUARD = 25

#: Effective sample size below which a degeneracy warning is emitted.
ESS_WARN_THRESHOLD = 200.0

# Samples are processed in fixed-size chunks and partial sums merged in chunk
# order, so results do not depend on the worker count.
_CHUNK = 8192


class LowEffectiveSampleSize(UserWarning):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    n_samples: int = 20000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class Posterior:
    p_true: dict[NodeId, float]
    n_samples: int
    effective_sample_size: float
    seed: int = 0

    def by_label(self) -> dict[str, float]:
        from .compiler import node_label

        return {node_label(nid): p for nid, p in self.p_true.items()}


def _tables(bn: BayesianNetwork) -> list[tuple[list[int], np.ndarray]]:
    out = []
    for _, cpt in bn.nodes:
        out.append(([bn.index_of(p) for p in cpt.parent_ids], np.asarray(cpt.rows)))
    return out


def _evidence_array(bn: BayesianNetwork, evidence: Evidence, exc=UnknownNode) -> np.ndarray:
    ev = np.full(len(bn.nodes), -1, dtype=np.int8)
    for nid, value in evidence.items():
        if nid not in bn:
            raise exc(f"evidence node {nid.render()} is not in the network")
        ev[bn.index_of(nid)] = int(bool(value))
    return ev


def _row_indices(vals: np.ndarray, parents: list[int]) -> np.ndarray:
    idx = np.zeros(len(vals), dtype=np.intp)
    for p in parents:
        idx = (idx << 1) | vals[:, p]
    return idx


def _lw_chunk(tables, ev, seed: int, start: int, stop: int):
    n_nodes = len(tables)
    u = uniform_block(seed, start, stop, n_nodes)
    m = stop - start
    vals = np.zeros((m, n_nodes), dtype=np.intp)
    w = np.ones(m)
    for j, (parents, rows) in enumerate(tables):
        p = rows[_row_indices(vals, parents)] if parents else np.full(m, rows[0])
        e = ev[j]
        if e < 0:
            vals[:, j] = u[:, j] < p
        else:
            w *= p if e else (1.0 - p)
            vals[:, j] = e
    return w.sum(), (w * w).sum(), w @ vals.astype(np.float64)


def likelihood_weighting(
    bn: BayesianNetwork, evidence: Evidence, config: SamplerConfig = SamplerConfig()
) -> Posterior:
    """Estimate P(node=true | evidence) for every node by likelihood weighting.

    Non-evidence nodes are sampled from their CPTs in topological order;
    evidence nodes are clamped and each sample is weighted by the probability
    of the observed value given its sampled parents. Results are bit-identical
    for a fixed (seed, n_samples) whatever the worker count.

    Raises ZeroWeightEvidence when every sample gets weight zero.
    """
    tables = _tables(bn)
    ev = _evidence_array(bn, evidence)
    spans = [(a, min(a + _CHUNK, config.n_samples)) for a in range(0, config.n_samples, _CHUNK)]

    def run(span):
        return _lw_chunk(tables, ev, config.seed, *span)

    if config.workers == 1 or len(spans) == 1:
        parts = [run(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(run, spans))

    w_sum = 0.0
    w2_sum = 0.0
    wx_sum = np.zeros(len(bn.nodes))
    for ws, w2s, wxs in parts:  # fixed merge order: chunk index
        w_sum += ws
        w2_sum += w2s
        wx_sum += wxs

    if w_sum == 0.0:
        raise ZeroWeightEvidence(
            "all sample weights are zero: evidence is impossible under the model"
        )
    ess = (w_sum * w_sum) / w2_sum
    if ess < ESS_WARN_THRESHOLD:
        warnings.warn(
            f"effective sample size {ess:.1f} below {ESS_WARN_THRESHOLD:.0f}; "
            "estimates may be unreliable, consider more samples",
            LowEffectiveSampleSize,
            stacklevel=2,
        )

    p = np.clip(wx_sum / w_sum, 0.0, 1.0)
    p_true: dict[NodeId, float] = {}
    for i, nid in enumerate(bn.node_ids()):
        p_true[nid] = float(ev[i]) if ev[i] >= 0 else float(p[i])
    return Posterior(p_true, config.n_samples, float(ess), config.seed)


def exact_enumeration(bn: BayesianNetwork, evidence: Evidence) -> Posterior:
    """Exact posteriors by summing the joint over all evidence-consistent assignments.

    Only for small networks (guarded at 25 nodes); n_samples is reported as 0
    and the effective sample size as +inf.
    """
    n = len(bn.nodes)
    if n > ENUMERATION_GUARD:
        raise NetworkTooLarge(f"{n} nodes exceeds the enumeration guard of {ENUMERATION_GUARD}")
    tables = _tables(bn)
    ev = _evidence_array(bn, evidence)
    hidden = [j for j in range(n) if ev[j] < 0]
    h = len(hidden)

    total = 0.0
    acc = np.zeros(n)
    block = 1 << min(h, 16)
    for b0 in range(0, 1 << h, block):
        idx = np.arange(b0, b0 + block, dtype=np.int64)
        vals = np.zeros((block, n), dtype=np.intp)
        for t, j in enumerate(hidden):
            vals[:, j] = (idx >> (h - 1 - t)) & 1
        for j in range(n):
            if ev[j] >= 0:
                vals[:, j] = ev[j]
        p = np.ones(block)
        for j, (parents, rows) in enumerate(tables):
            pt = rows[_row_indices(vals, parents)] if parents else np.full(block, rows[0])
            p *= np.where(vals[:, j] == 1, pt, 1.0 - pt)
        total += p.sum()
        acc += p @ vals.astype(np.float64)

    if total == 0.0:
        raise ZeroProbabilityEvidence("evidence has probability zero under the model")
    post = acc / total
    p_true: dict[NodeId, float] = {}
    for i, nid in enumerate(bn.node_ids()):
        p_true[nid] = float(ev[i]) if ev[i] >= 0 else float(min(max(post[i], 0.0), 1.0))
    return Posterior(p_true, 0, math.inf, 0)


def evidence_from_observations(records, bn: BayesianNetwork, kb: KnowledgeBase) -> Evidence:
    """Map observation records onto detected-node evidence.

    Duplicate records for one (sensor, class) must agree. A class that the
    compiled network has no detected node for raises RecompilationNeeded: the
    caller should recompile passing the (sensor, class) pairs as
    evidence_classes.
    """
    evidence: Evidence = {}
    for rec in records:
        if rec.sensor not in kb.sensors:
            raise UnknownEvidence(f"unknown sensor '{rec.sensor}'")
        if rec.observed_class not in kb.signal_classes:
            raise UnknownEvidence(f"unknown signal class '{rec.observed_class}'")
        classifier = kb.classifiers.get(kb.sensors[rec.sensor].classifier)
        if classifier is not None and rec.observed_class not in classifier.detects_classes:
            raise UnknownEvidence(
                f"sensor '{rec.sensor}' cannot report class '{rec.observed_class}'"
            )
        nid = NodeId("detected", (rec.sensor, rec.observed_class))
        if nid not in bn:
            raise RecompilationNeeded(
                f"no detected node for ({rec.sensor}, {rec.observed_class}); "
                "recompile with this pair in evidence_classes"
            )
        if nid in evidence and evidence[nid] != bool(rec.result):
            raise ConflictingEvidence(
                f"conflicting results for ({rec.sensor}, {rec.observed_class})"
            )
        evidence[nid] = bool(rec.result)
    return evidence

"""Forward simulation of the generative model.

Draws ground-truth scenarios by ancestral sampling and emits one observation
record per detected node, including negative results: absence of a detection
is informative evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compiler import BayesianNetwork, NodeId
from .errors import UnknownNode
from .inference import _row_indices, _tables
from .kgmodel import KnowledgeBase
from .observations import ObservationRecord, synthetic_time
from .rng import uniform_rows_for_seeds


@dataclass(frozen=True)
class Scenario:
    assignment: dict[NodeId, bool]
    seed: int


def sample_assignments(
    bn: BayesianNetwork,
    seeds: np.ndarray,
    forced: dict[NodeId, bool] | None = None,
) -> np.ndarray:
    """Ancestral samples, one row per seed, columns in network node order.

    Forced nodes are clamped (an intervention): their descendants follow, their
    ancestors keep their own samples. Clamping consumes the same random stream
    layout as free sampling, so forcing a node never shifts another node's draw.
    """
    tables = _tables(bn)
    force_idx: dict[int, bool] = {}
    for nid, value in (forced or {}).items():
        if nid not in bn:
            raise UnknownNode(f"forced node {nid.render()} is not in the network")
        force_idx[bn.index_of(nid)] = bool(value)

    n_nodes = len(bn.nodes)
    u = uniform_rows_for_seeds(np.asarray(seeds, dtype=np.uint64), n_nodes)
    vals = np.zeros((len(u), n_nodes), dtype=np.intp)
    for j, (parents, rows) in enumerate(tables):
        if j in force_idx:
            vals[:, j] = force_idx[j]
            continue
        p = rows[_row_indices(vals, parents)] if parents else np.full(len(u), rows[0])
        vals[:, j] = u[:, j] < p
    return vals.astype(bool)


def _records_for(bn: BayesianNetwork, row: np.ndarray) -> list[ObservationRecord]:
    records = []
    k = 0
    for j, (nid, _) in enumerate(bn.nodes):
        if nid.kind != "detected":
            continue
        sensor_id, class_id = nid.key
        records.append(ObservationRecord(sensor_id, class_id, bool(row[j]), synthetic_time(k)))
        k += 1
    return records


def forced_scenario(
    bn: BayesianNetwork,
    kb: KnowledgeBase,
    forced: dict[NodeId, bool],
    seed: int,
) -> tuple[Scenario, list[ObservationRecord]]:
    """One scenario with the given nodes clamped; deterministic per seed."""
    row = sample_assignments(bn, np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64), forced)[0]
    assignment = {nid: bool(row[j]) for j, nid in enumerate(bn.node_ids())}
    return Scenario(assignment, seed), _records_for(bn, row)


def simulate(
    bn: BayesianNetwork, kb: KnowledgeBase, seed: int
) -> tuple[Scenario, list[ObservationRecord]]:
    """Unforced forward sample of the whole network."""
    return forced_scenario(bn, kb, {}, seed)

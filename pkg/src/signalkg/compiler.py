"""Compile a validated knowledge base into a Boolean Bayesian network.

Node layers, in rank order: entity -> action-at-room -> emitted signal ->
received signal -> detected signal. Edges only go from lower to higher rank,
so the network is acyclic by construction and the rank-then-key node order is
already topological.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvalidKnowledgeBase
from .kgmodel import KnowledgeBase, class_matches, eligible_rooms, validate
from .propagation import crossings, detection_prob, distance, received_level

KIND_RANK = {"entity": 0, "action": 1, "emitted": 2, "received": 3, "detected": 4}


@dataclass(frozen=True)
class NodeId:
    kind: str
    key: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in KIND_RANK:
            raise ValueError(f"unknown node kind: {self.kind!r}")

    @property
    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (KIND_RANK[self.kind], self.key)

    def render(self) -> str:
        return f"{self.kind}({','.join(self.key)})"

    @classmethod
    def parse(cls, text: str) -> "NodeId":
        kind, _, rest = text.partition("(")
        if not rest.endswith(")"):
            raise ValueError(f"malformed node id: {text!r}")
        parts = tuple(p.strip() for p in rest[:-1].split(","))
        return cls(kind, parts)


def node_label(node_id: NodeId, kb: KnowledgeBase | None = None) -> str:
    """Human-readable node name, e.g. ``action(attacker, break-window, lobby)``."""
    if kb is not None:
        known = set()
        for records in kb.record_maps().values():
            known.update(records)
        for part in node_id.key:
            if part not in known:
                raise KeyError(f"node id part {part!r} not in knowledge base")
    return f"{node_id.kind}({', '.join(node_id.key)})"


@dataclass(frozen=True)
class Cpt:
    """P(node=true) for every assignment of the ordered parents.

    Row r corresponds to the parent assignment whose bits spell r with the
    first parent as the most significant bit (row 0 = all parents false).
    """

    parent_ids: tuple[NodeId, ...]
    rows: tuple[float, ...]

    def __post_init__(self):
        if len(self.rows) != 1 << len(self.parent_ids):
            raise ValueError("CPT must have exactly 2^|parents| rows")
        for p in self.rows:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"CPT entry {p!r} outside [0, 1]")

    @staticmethod
    def row_index(assignment: Iterable[bool]) -> int:
        idx = 0
        for v in assignment:
            idx = (idx << 1) | int(bool(v))
        return idx

    def p_true(self, assignment: Iterable[bool]) -> float:
        return self.rows[self.row_index(assignment)]

    def assignments(self) -> list[tuple[bool, ...]]:
        k = len(self.parent_ids)
        return [tuple(bool((r >> (k - 1 - b)) & 1) for b in range(k)) for r in range(len(self.rows))]


@dataclass(frozen=True)
class BayesianNetwork:
    nodes: tuple[tuple[NodeId, Cpt], ...]
    topological_order: tuple[int, ...] = ()
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.topological_order:
            object.__setattr__(self, "topological_order", tuple(range(len(self.nodes))))
        self._index.update({nid: i for i, (nid, _) in enumerate(self.nodes)})

    def __contains__(self, node_id: NodeId) -> bool:
        return node_id in self._index

    def index_of(self, node_id: NodeId) -> int:
        return self._index[node_id]

    def node_ids(self) -> list[NodeId]:
        return [nid for nid, _ in self.nodes]


def _or_cpt(parents: tuple[NodeId, ...]) -> Cpt:
    rows = tuple(0.0 if r == 0 else 1.0 for r in range(1 << len(parents)))
    return Cpt(parents, rows)


def _saturating_cpt(parents: tuple[NodeId, ...], tpr: float, fpr: float) -> Cpt:
    rows = tuple(fpr if r == 0 else tpr for r in range(1 << len(parents)))
    return Cpt(parents, rows)


def compile_bn(
    kb: KnowledgeBase,
    evidence_classes: Iterable[tuple[str, str]] = (),
) -> BayesianNetwork:
    """Build the Bayesian network for a knowledge base.

    evidence_classes lists extra (sensor id, class id) pairs that must have a
    detected node even when no modeled signal can cause them; their posterior
    then reduces to the classifier false-positive rate. Each class must be one
    the sensor's classifier reports.

    Raises InvalidKnowledgeBase if validation yields any error diagnostic.
    """
    errors = [d for d in validate(kb) if d.severity == "error"]
    if errors:
        raise InvalidKnowledgeBase(
            "knowledge base has error diagnostics: "
            + "; ".join(f"{d.code} {d.subject}" for d in errors[:5])
        )

    nodes: list[tuple[NodeId, Cpt]] = []

    entity_nodes: dict[str, NodeId] = {}
    for eid in sorted(kb.entities):
        nid = NodeId("entity", (eid,))
        entity_nodes[eid] = nid
        nodes.append((nid, Cpt((), (kb.entities[eid].prior_presence,))))

    # (signal id, room id) -> creating action nodes
    emitters: dict[tuple[str, str], list[NodeId]] = {}
    for aid in sorted(kb.actions):
        action = kb.actions[aid]
        rooms = eligible_rooms(aid, kb)
        if not rooms:
            continue
        weights = dict(action.room_weights)
        total = sum(weights.get(r, 1.0) for r in rooms)
        for room_id in rooms:
            share = action.prob_given_present * weights.get(room_id, 1.0) / total
            nid = NodeId("action", (action.performed_by, aid, room_id))
            nodes.append((nid, Cpt((entity_nodes[action.performed_by],), (0.0, share))))
            emitters.setdefault((action.creates_signal, room_id), []).append(nid)

    emitted_nodes: dict[tuple[str, str], NodeId] = {}
    for (signal_id, room_id), creators in sorted(emitters.items()):
        nid = NodeId("emitted", (signal_id, room_id))
        emitted_nodes[(signal_id, room_id)] = nid
        nodes.append((nid, _or_cpt(tuple(sorted(creators, key=lambda n: n.sort_key)))))

    barriers = [kb.barriers[bid] for bid in sorted(kb.barriers)]
    # sensor id -> class id -> received nodes feeding it
    feeds: dict[str, dict[str, list[NodeId]]] = {sid: {} for sid in kb.sensors}
    for (signal_id, room_id), emitted in sorted(emitted_nodes.items()):
        signal = kb.signals[signal_id]
        law = kb.attenuation_laws[signal.attenuation]
        room = kb.rooms[room_id]
        for sensor_id in sorted(kb.sensors):
            sensor = kb.sensors[sensor_id]
            classifier = kb.classifiers[sensor.classifier]
            matched = [
                c for c in classifier.detects_classes
                if class_matches(signal.signal_class, c, kb)
            ]
            if not matched:
                continue
            d = distance(room.centroid, sensor.position)
            _, crossed_ids = crossings(room.centroid, sensor.position, barriers)
            level = received_level(
                signal.source_level, law, d, [kb.barriers[b] for b in crossed_ids]
            )
            p_hit = detection_prob(level, sensor)
            nid = NodeId("received", (signal_id, room_id, sensor_id))
            nodes.append((nid, Cpt((emitted,), (0.0, p_hit))))
            for c in matched:
                feeds[sensor_id].setdefault(c, []).append(nid)

    wanted: dict[str, set[str]] = {sid: set(feeds[sid]) for sid in kb.sensors}
    for sensor_id, class_id in evidence_classes:
        sensor = kb.sensors[sensor_id]
        classifier = kb.classifiers[sensor.classifier]
        if class_id not in classifier.detects_classes:
            raise InvalidKnowledgeBase(
                f"classifier '{classifier.id}' of sensor '{sensor_id}' does not report class '{class_id}'"
            )
        wanted[sensor_id].add(class_id)

    for sensor_id in sorted(kb.sensors):
        classifier = kb.classifiers[kb.sensors[sensor_id].classifier]
        for class_id in sorted(wanted[sensor_id]):
            parents = tuple(sorted(feeds[sensor_id].get(class_id, []), key=lambda n: n.sort_key))
            nid = NodeId("detected", (sensor_id, class_id))
            nodes.append(
                (nid, _saturating_cpt(parents, classifier.true_positive_rate, classifier.false_positive_rate))
            )

    nodes.sort(key=lambda item: item[0].sort_key)
    return BayesianNetwork(tuple(nodes))


# --- JSON interchange ---------------------------------------------------------

def _dump(value) -> str:
    """Canonical JSON: sorted keys, floats at 12 significant digits."""
    if isinstance(value, dict):
        items = (f"{json.dumps(k)}: {_dump(value[k])}" for k in sorted(value))
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return json.dumps(value)


def export_bn(bn: BayesianNetwork) -> str:
    """Serialize to the interchange JSON; byte-stable across calls."""
    nodes = []
    for nid, cpt in bn.nodes:
        nodes.append(
            {
                "id": nid.render(),
                "kind": nid.kind,
                "parents": [p.render() for p in cpt.parent_ids],
                "cpt": [
                    {"assignment": list(a), "p_true": p}
                    for a, p in zip(cpt.assignments(), cpt.rows)
                ],
            }
        )
    return _dump({"nodes": nodes})


def import_bn(text: str) -> BayesianNetwork:
    """Rebuild a network from interchange JSON (inverse of export_bn)."""
    doc = json.loads(text)
    nodes: list[tuple[NodeId, Cpt]] = []
    for entry in doc["nodes"]:
        nid = NodeId.parse(entry["id"])
        if nid.kind != entry["kind"]:
            raise ValueError(f"kind mismatch for node {entry['id']!r}")
        parents = tuple(NodeId.parse(p) for p in entry["parents"])
        rows = [0.0] * (1 << len(parents))
        seen = set()
        for row in entry["cpt"]:
            idx = Cpt.row_index(row["assignment"])
            if len(row["assignment"]) != len(parents) or idx in seen:
                raise ValueError(f"bad CPT rows for node {entry['id']!r}")
            seen.add(idx)
            rows[idx] = float(row["p_true"])
        if len(seen) != len(rows):
            raise ValueError(f"CPT for node {entry['id']!r} does not cover all assignments")
        nodes.append((nid, Cpt(parents, tuple(rows))))
    return BayesianNetwork(tuple(nodes))

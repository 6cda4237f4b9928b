import dataclasses
import json
from pathlib import Path

import pytest

import signalkg as sk
from signalkg.compiler import Cpt, NodeId, compile_bn, export_bn, import_bn, node_label
from signalkg.errors import InvalidKnowledgeBase
from signalkg.kgmodel import (
    ActionSpec,
    AssetType,
    AttenuationLaw,
    ClassifierSpec,
    EntityKind,
    KnowledgeBase,
    Room,
    SensorSpec,
    SignalClass,
    SignalSpec,
)
from signalkg.propagation import Point2D

GOLDEN = Path(__file__).parent / "golden"


def multi_room_kb(room_weights=()):
    rooms = {
        f"room-{i}": Room(f"room-{i}", f"Room {i}", Point2D(float(i * 4), 0.0), ("door",))
        for i in range(3)
    }
    return KnowledgeBase(
        entities={"guard": EntityKind("guard", "Guard", 0.4)},
        asset_types={"door": AssetType("door", "Door")},
        rooms=rooms,
        signal_classes={"thud": SignalClass("thud", "Thud")},
        attenuation_laws={"inv": AttenuationLaw("inv", "inverse-square", 1.0)},
        signals={"bang": SignalSpec("bang", "Bang", "thud", 70.0, "inv")},
        actions={
            "slam": ActionSpec("slam", "Slam", "guard", "door", 0.6, "bang", room_weights)
        },
        classifiers={
            "net": ClassifierSpec("net", "Net", ("thud",), 0.9, 0.05)
        },
        sensors={
            "mic": SensorSpec("mic", "Mic", Point2D(4.0, 3.0), "net", 50.0, 5.0)
        },
    )


# --- structure ------------------------------------------------------------------

def test_chain_kb_compiles_to_five_node_chain(chain_bn):
    kinds = [nid.kind for nid in chain_bn.node_ids()]
    assert kinds == ["entity", "action", "emitted", "received", "detected"]
    parent_counts = [len(cpt.parent_ids) for _, cpt in chain_bn.nodes]
    assert parent_counts == [0, 1, 1, 1, 1]
    # each node's parent is exactly the previous node
    for i in range(1, 5):
        assert chain_bn.nodes[i][1].parent_ids == (chain_bn.nodes[i - 1][0],)


def test_zero_sensors_drops_received_and_detected(building_kb):
    kb = dataclasses.replace(building_kb, sensors={})
    bn = compile_bn(kb)
    kinds = {nid.kind for nid in bn.node_ids()}
    assert kinds == {"entity", "action", "emitted"}


def test_invalid_kb_rejected(building_kb):
    bad = dataclasses.replace(
        building_kb,
        entities={"e": EntityKind("e", "e", 1.5)},
    )
    with pytest.raises(InvalidKnowledgeBase):
        compile_bn(bad)


def test_action_mass_splits_uniformly_across_rooms():
    bn = compile_bn(multi_room_kb())
    shares = [cpt.rows[1] for nid, cpt in bn.nodes if nid.kind == "action"]
    assert len(shares) == 3
    assert all(s == pytest.approx(0.6 / 3) for s in shares)
    assert sum(shares) == pytest.approx(0.6)


def test_room_weights_override_uniform_split():
    bn = compile_bn(multi_room_kb(room_weights=(("room-0", 2.0), ("room-2", 1.0))))
    shares = {
        nid.key[2]: cpt.rows[1] for nid, cpt in bn.nodes if nid.kind == "action"
    }
    # weights: room-0 -> 2, room-1 -> default 1, room-2 -> 1 (total 4)
    assert shares["room-0"] == pytest.approx(0.6 * 2 / 4)
    assert shares["room-1"] == pytest.approx(0.6 * 1 / 4)
    assert shares["room-2"] == pytest.approx(0.6 * 1 / 4)
    assert sum(shares.values()) == pytest.approx(0.6)


def test_same_signal_same_room_merges_into_one_emitted_node():
    kb = multi_room_kb()
    actions = dict(kb.actions)
    actions["kick"] = ActionSpec("kick", "Kick", "guard", "door", 0.2, "bang")
    kb = dataclasses.replace(kb, actions=actions)
    bn = compile_bn(kb)
    emitted = [(nid, cpt) for nid, cpt in bn.nodes if nid.kind == "emitted"]
    assert len(emitted) == 3  # one per room, not per action
    for nid, cpt in emitted:
        assert len(cpt.parent_ids) == 2  # OR over both creating actions
        assert cpt.rows == (0.0, 1.0, 1.0, 1.0)


def test_no_spontaneous_signals(building_bn):
    for nid, cpt in building_bn.nodes:
        if nid.kind in ("action", "received"):
            assert cpt.rows[0] == 0.0  # parent false -> never true


def test_detected_cpt_saturates(building_bn):
    (cpt,) = [cpt for nid, cpt in building_bn.nodes if nid.kind == "detected"]
    assert cpt.rows[0] == 0.01
    assert all(r == 0.95 for r in cpt.rows[1:])


def test_cpt_row_counts_and_ranges(building_bn, chain_bn):
    for bn in (building_bn, chain_bn):
        for _, cpt in bn.nodes:
            assert len(cpt.rows) == 2 ** len(cpt.parent_ids)
            assert all(0.0 <= p <= 1.0 for p in cpt.rows)


def test_acyclic_by_independent_kahn_check(building_bn):
    ids = building_bn.node_ids()
    index = {nid: i for i, nid in enumerate(ids)}
    indeg = [len(cpt.parent_ids) for _, cpt in building_bn.nodes]
    children = {i: [] for i in range(len(ids))}
    for i, (_, cpt) in enumerate(building_bn.nodes):
        for p in cpt.parent_ids:
            children[index[p]].append(i)
    frontier = [i for i, d in enumerate(indeg) if d == 0]
    seen = 0
    while frontier:
        i = frontier.pop()
        seen += 1
        for c in children[i]:
            indeg[c] -= 1
            if indeg[c] == 0:
                frontier.append(c)
    assert seen == len(ids)


def test_topological_order_puts_parents_first(building_bn):
    order = building_bn.topological_order
    position = {building_bn.nodes[j][0]: rank for rank, j in enumerate(order)}
    for nid, cpt in building_bn.nodes:
        for p in cpt.parent_ids:
            assert position[p] < position[nid]


def test_evidence_classes_add_parentless_detected_node(building_kb):
    # drop both signals' link to the mic by removing all actions
    kb = dataclasses.replace(building_kb, actions={})
    bn = compile_bn(kb, evidence_classes=[("mic-1", "glass")])
    nid = NodeId("detected", ("mic-1", "glass"))
    assert nid in bn
    idx = bn.index_of(nid)
    cpt = bn.nodes[idx][1]
    assert cpt.parent_ids == ()
    assert cpt.rows == (0.01,)  # false-positive rate only


def test_evidence_class_must_be_reported_by_classifier(building_kb):
    with pytest.raises(InvalidKnowledgeBase):
        compile_bn(building_kb, evidence_classes=[("mic-1", "breaking-glass-sound")])


# --- labels and ids -----------------------------------------------------------------

def test_node_id_render_parse_round_trip(building_bn):
    for nid in building_bn.node_ids():
        assert NodeId.parse(nid.render()) == nid


def test_node_label_formats():
    assert node_label(NodeId("entity", ("attacker",))) == "entity(attacker)"
    assert (
        node_label(NodeId("received", ("breaking-glass", "lobby", "mic-1")))
        == "received(breaking-glass, lobby, mic-1)"
    )


def test_labels_unique_on_bundled_kb(building_bn, building_kb):
    labels = [node_label(nid, building_kb) for nid in building_bn.node_ids()]
    assert len(set(labels)) == len(labels)


def test_cpt_rejects_bad_shapes():
    with pytest.raises(ValueError):
        Cpt((NodeId("entity", ("e",)),), (0.5,))
    with pytest.raises(ValueError):
        Cpt((), (1.5,))


# --- interchange JSON -----------------------------------------------------------------

def test_empty_network_export():
    assert export_bn(sk.BayesianNetwork(())) == '{"nodes": []}'


def test_compile_deterministic(building_kb):
    a = export_bn(compile_bn(building_kb))
    b = export_bn(compile_bn(building_kb))
    assert a == b


def test_export_import_export_byte_stable(building_bn, chain_bn):
    for bn in (building_bn, chain_bn):
        once = export_bn(bn)
        twice = export_bn(import_bn(once))
        assert once == twice


def test_export_matches_golden(building_bn, chain_bn):
    assert export_bn(chain_bn) == (GOLDEN / "chain_bn.json").read_text()
    assert export_bn(building_bn) == (GOLDEN / "building_bn.json").read_text()


def test_export_is_valid_json_with_schema(building_bn):
    doc = json.loads(export_bn(building_bn))
    assert set(doc) == {"nodes"}
    for node in doc["nodes"]:
        assert set(node) == {"id", "kind", "parents", "cpt"}
        assert len(node["cpt"]) == 2 ** len(node["parents"])
        for row in node["cpt"]:
            assert set(row) == {"assignment", "p_true"}
            assert len(row["assignment"]) == len(node["parents"])


def test_import_rejects_missing_rows(building_bn):
    doc = json.loads(export_bn(building_bn))
    doc["nodes"][2]["cpt"].pop()
    with pytest.raises(ValueError):
        import_bn(json.dumps(doc))

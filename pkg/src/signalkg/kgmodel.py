"""Knowledge-base model: record types, Turtle ingestion, validation, queries.

A knowledge base relates entities to the actions they perform, the signals
those actions emit, the sensors/classifiers that can pick the signals up, and
the rooms, assets and barriers of a single-floor building. Instances are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from . import turtle
from .errors import ParseError
from .propagation import Point2D
from .turtle import RDF_TYPE, REC, SKG, SKOS, SOSA, Iri, Literal, Term, Triple

__all__ = [
    "EntityKind", "ActionSpec", "SignalSpec", "SignalClass", "AttenuationLaw",
    "ClassifierSpec", "SensorSpec", "Room", "AssetType", "Barrier",
    "Diagnostic", "KnowledgeBase", "parse_kb", "serialize_kb", "validate",
    "class_matches", "eligible_rooms", "format_diagnostic",
]


@dataclass(frozen=True)
class EntityKind:
    id: str
    label: str
    prior_presence: float


@dataclass(frozen=True)
class ActionSpec:
    id: str
    label: str
    performed_by: str
    acts_on: str
    prob_given_present: float
    creates_signal: str
    #: optional (room id, weight) pairs overriding the uniform room split
    room_weights: tuple[tuple[str, float], ...] = ()


@dataclass(frozen=True)
class SignalSpec:
    id: str
    label: str
    signal_class: str
    source_level: float
    attenuation: str


@dataclass(frozen=True)
class SignalClass:
    id: str
    label: str
    broader: str | None = None


@dataclass(frozen=True)
class AttenuationLaw:
    id: str
    kind: str  # "inverse-square" | "none"
    reference_distance: float = 1.0


@dataclass(frozen=True)
class ClassifierSpec:
    id: str
    label: str
    detects_classes: tuple[str, ...]
    true_positive_rate: float
    false_positive_rate: float


@dataclass(frozen=True)
class SensorSpec:
    id: str
    label: str
    position: Point2D
    classifier: str
    detection_threshold: float
    detection_slope: float


@dataclass(frozen=True)
class Room:
    id: str
    label: str
    centroid: Point2D
    contains_assets: tuple[str, ...] = ()


@dataclass(frozen=True)
class AssetType:
    id: str
    label: str


@dataclass(frozen=True)
class Barrier:
    id: str
    segment: tuple[Point2D, Point2D]
    attenuation: float


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    subject: str
    message: str


def format_diagnostic(d: Diagnostic) -> str:
    return f"{d.severity.upper()} {d.code} {d.subject}: {d.message}"


@dataclass(frozen=True)
class KnowledgeBase:
    entities: dict[str, EntityKind] = field(default_factory=dict)
    actions: dict[str, ActionSpec] = field(default_factory=dict)
    signals: dict[str, SignalSpec] = field(default_factory=dict)
    signal_classes: dict[str, SignalClass] = field(default_factory=dict)
    attenuation_laws: dict[str, AttenuationLaw] = field(default_factory=dict)
    classifiers: dict[str, ClassifierSpec] = field(default_factory=dict)
    sensors: dict[str, SensorSpec] = field(default_factory=dict)
    rooms: dict[str, Room] = field(default_factory=dict)
    asset_types: dict[str, AssetType] = field(default_factory=dict)
    barriers: dict[str, Barrier] = field(default_factory=dict)
    #: unrecognized triples, preserved for round-tripping
    extras: tuple[Triple, ...] = ()
    #: diagnostics that can only be produced while parsing
    parse_diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @property
    def is_valid(self) -> bool:
        return not any(d.severity == "error" for d in validate(self))

    def record_maps(self) -> dict[str, dict]:
        return {
            "entities": self.entities,
            "actions": self.actions,
            "signals": self.signals,
            "signal_classes": self.signal_classes,
            "attenuation_laws": self.attenuation_laws,
            "classifiers": self.classifiers,
            "sensors": self.sensors,
            "rooms": self.rooms,
            "asset_types": self.asset_types,
            "barriers": self.barriers,
        }


# --- parsing ----------------------------------------------------------------

# rdf:type IRI -> knowledge-base map name
_TYPE_MAP = {
    SKG + "Entity": "entities",
    SKG + "Action": "actions",
    SKG + "Signal": "signals",
    SKG + "SignalClass": "signal_classes",
    SKG + "AttenuationLaw": "attenuation_laws",
    SKG + "Classifier": "classifiers",
    SOSA + "Sensor": "sensors",
    REC + "Room": "rooms",
    REC + "Asset": "asset_types",
    SKG + "Barrier": "barriers",
}

# predicate IRI -> (record field, value converter kind) per map
_LABEL = (SKOS + "prefLabel", "label", "str")
_FIELD_MAP: dict[str, list[tuple[str, str, str]]] = {
    "entities": [_LABEL, (SKG + "priorPresence", "prior_presence", "float")],
    "actions": [
        _LABEL,
        (SKG + "performedBy", "performed_by", "ref"),
        (SKG + "actsOn", "acts_on", "ref"),
        (SKG + "probGivenPresent", "prob_given_present", "float"),
        (SKG + "createsSignal", "creates_signal", "ref"),
        (SKG + "roomWeight", "room_weights", "room_weights"),
    ],
    "signals": [
        _LABEL,
        (SKG + "signalClass", "signal_class", "ref"),
        (SKG + "sourceLevel", "source_level", "float"),
        (SKG + "attenuation", "attenuation", "ref"),
    ],
    "signal_classes": [_LABEL, (SKOS + "broader", "broader", "ref")],
    "attenuation_laws": [
        (SKG + "lawKind", "kind", "str"),
        (SKG + "referenceDistance", "reference_distance", "float"),
    ],
    "classifiers": [
        _LABEL,
        (SKG + "detectsClass", "detects_classes", "refs"),
        (SKG + "truePositiveRate", "true_positive_rate", "float"),
        (SKG + "falsePositiveRate", "false_positive_rate", "float"),
    ],
    "sensors": [
        _LABEL,
        (SKG + "position", "position", "point"),
        (SKG + "classifier", "classifier", "ref"),
        (SKG + "detectionThreshold", "detection_threshold", "float"),
        (SKG + "detectionSlope", "detection_slope", "float"),
    ],
    "rooms": [
        _LABEL,
        (SKG + "centroid", "centroid", "point"),
        (SKG + "containsAsset", "contains_assets", "refs"),
    ],
    "asset_types": [_LABEL],
    "barriers": [
        (SKG + "segment", "segment", "segment"),
        (SKG + "attenuationDb", "attenuation", "float"),
    ],
}

_RECORD_TYPES = {
    "entities": EntityKind,
    "actions": ActionSpec,
    "signals": SignalSpec,
    "signal_classes": SignalClass,
    "attenuation_laws": AttenuationLaw,
    "classifiers": ClassifierSpec,
    "sensors": SensorSpec,
    "rooms": Room,
    "asset_types": AssetType,
    "barriers": Barrier,
}

# record fields that may be absent (everything else is required)
_OPTIONAL_FIELDS = {
    ("signal_classes", "broader"),
    ("actions", "room_weights"),
    ("rooms", "contains_assets"),
    ("attenuation_laws", "reference_distance"),
}


class _BadValue(Exception):
    pass


def _numbers(term: Term, n: int) -> list[float]:
    if not isinstance(term, tuple) or len(term) != n:
        raise _BadValue(f"expected a collection of {n} numbers")
    out = []
    for item in term:
        if not isinstance(item, Literal) or not isinstance(item.value, float):
            raise _BadValue(f"expected a collection of {n} numbers")
        out.append(item.value)
    return out


def _convert(term: Term, kind: str) -> object:
    if kind == "str":
        if isinstance(term, Literal) and isinstance(term.value, str):
            return term.value
        raise _BadValue("expected a string literal")
    if kind == "float":
        if isinstance(term, Literal) and isinstance(term.value, float):
            return term.value
        raise _BadValue("expected a numeric literal")
    if kind in ("ref", "refs"):
        if isinstance(term, Iri):
            return turtle.local_name(term.value)
        raise _BadValue("expected an IRI")
    if kind == "point":
        x, y = _numbers(term, 2)
        return Point2D(x, y)
    if kind == "segment":
        x1, y1, x2, y2 = _numbers(term, 4)
        return (Point2D(x1, y1), Point2D(x2, y2))
    if kind == "room_weights":
        if (
            isinstance(term, tuple)
            and len(term) == 2
            and isinstance(term[0], Iri)
            and isinstance(term[1], Literal)
            and isinstance(term[1].value, float)
        ):
            return (turtle.local_name(term[0].value), term[1].value)
        raise _BadValue("expected a (room weight) collection")
    raise AssertionError(kind)


def parse_kb(document: str) -> KnowledgeBase:
    """Parse a dialect Turtle document into a KnowledgeBase.

    Syntax errors raise ParseError. Semantic problems (unknown predicates,
    missing fields, unresolved references, out-of-range values) become
    diagnostics: the KB is still returned, flagged invalid when any are
    error-level. Unknown predicates and subjects of unknown type are kept in
    `extras` so serialization round-trips them.
    """
    triples = turtle.parse_turtle(document)

    by_subject: dict[str, list[Triple]] = {}
    for t in triples:
        by_subject.setdefault(t.subject, []).append(t)

    diags: list[Diagnostic] = []
    extras: list[Triple] = []
    maps: dict[str, dict] = {name: {} for name in _TYPE_MAP.values()}
    seen_ids: dict[str, str] = {}

    for subject, subject_triples in by_subject.items():
        subject_id = turtle.local_name(subject)
        type_iris = [
            t.obj.value
            for t in subject_triples
            if t.predicate == RDF_TYPE and isinstance(t.obj, Iri)
        ]
        known = [ti for ti in type_iris if ti in _TYPE_MAP]
        if not known:
            extras.extend(subject_triples)
            diags.append(
                Diagnostic(
                    "warning",
                    "unknown-type",
                    subject_id,
                    "subject has no recognized type; triples preserved as extras",
                )
            )
            continue
        if len(known) > 1:
            diags.append(
                Diagnostic(
                    "error",
                    "multi-type",
                    subject_id,
                    f"subject has {len(known)} recognized types; using the first",
                )
            )
        map_name = _TYPE_MAP[known[0]]

        if subject_id in seen_ids:
            diags.append(
                Diagnostic(
                    "error",
                    "dup-id",
                    subject_id,
                    f"identifier already declared by <{seen_ids[subject_id]}>",
                )
            )
            extras.extend(t for t in subject_triples if t.predicate != RDF_TYPE)
            continue
        seen_ids[subject_id] = subject

        field_specs = {p: (f, k) for p, f, k in _FIELD_MAP[map_name]}
        values: dict[str, object] = {"id": subject_id}
        multi: dict[str, list] = {}
        for t in subject_triples:
            if t.predicate == RDF_TYPE:
                if isinstance(t.obj, Iri) and t.obj.value in _TYPE_MAP:
                    continue
                extras.append(t)  # extra, unrecognized type assertions
                continue
            spec = field_specs.get(t.predicate)
            if spec is None:
                extras.append(t)
                diags.append(
                    Diagnostic(
                        "warning",
                        "unknown-predicate",
                        subject_id,
                        f"unknown predicate {turtle.compact_iri(t.predicate)} (line {t.line}); preserved",
                    )
                )
                continue
            fname, kind = spec
            try:
                value = _convert(t.obj, kind)
            except _BadValue as exc:
                diags.append(
                    Diagnostic("error", "bad-value", subject_id, f"{turtle.compact_iri(t.predicate)}: {exc} (line {t.line})")
                )
                continue
            if kind in ("refs", "room_weights"):
                multi.setdefault(fname, []).append(value)
            elif fname in values and values[fname] != value:
                diags.append(
                    Diagnostic(
                        "error",
                        "dup-value",
                        subject_id,
                        f"conflicting values for {turtle.compact_iri(t.predicate)} (line {t.line})",
                    )
                )
            else:
                values[fname] = value
        for fname, items in multi.items():
            if fname == "room_weights":
                values[fname] = tuple(items)
            else:
                values[fname] = tuple(sorted(set(items)))

        record_type = _RECORD_TYPES[map_name]
        field_names = [f.name for f in fields(record_type)]
        if "label" in field_names:
            values.setdefault("label", subject_id)
        missing = [
            f.name
            for f in fields(record_type)
            if f.name not in values and (map_name, f.name) not in _OPTIONAL_FIELDS
        ]
        if missing:
            diags.append(
                Diagnostic(
                    "error",
                    "missing-field",
                    subject_id,
                    "missing required properties: " + ", ".join(sorted(missing)),
                )
            )
            continue
        maps[map_name][subject_id] = record_type(**values)

    return KnowledgeBase(**maps, extras=tuple(extras), parse_diagnostics=tuple(diags))


# --- validation ---------------------------------------------------------------

def _prob_in_range(p: float) -> bool:
    return math.isfinite(p) and 0.0 <= p <= 1.0


def validate(kb: KnowledgeBase) -> list[Diagnostic]:
    """Full diagnostic sweep; empty result means the KB is ready to compile.

    Includes parse-time diagnostics, referential closure, probability ranges,
    classifier rate ordering, geometry sanity, broader-link acyclicity, and a
    warning for actions with no eligible room.
    """
    diags = list(kb.parse_diagnostics)

    def err(code: str, subject: str, message: str) -> None:
        diags.append(Diagnostic("error", code, subject, message))

    def warn(code: str, subject: str, message: str) -> None:
        diags.append(Diagnostic("warning", code, subject, message))

    # cross-map id uniqueness (intra-map duplicates are caught while parsing)
    owner: dict[str, str] = {}
    for map_name, records in kb.record_maps().items():
        for rid in records:
            if rid in owner:
                err("dup-id", rid, f"identifier used by both {owner[rid]} and {map_name}")
            else:
                owner[rid] = map_name

    def check_ref(subject: str, target: str, pool: dict, what: str) -> None:
        if target not in pool:
            err("unresolved-ref", subject, f"{what} '{target}' does not resolve")

    for e in sorted(kb.entities.values(), key=lambda r: r.id):
        if not _prob_in_range(e.prior_presence):
            err("prob-range", e.id, f"priorPresence {e.prior_presence!r} outside [0, 1]")

    for a in sorted(kb.actions.values(), key=lambda r: r.id):
        check_ref(a.id, a.performed_by, kb.entities, "performedBy entity")
        check_ref(a.id, a.acts_on, kb.asset_types, "actsOn asset type")
        check_ref(a.id, a.creates_signal, kb.signals, "createsSignal signal")
        if not _prob_in_range(a.prob_given_present):
            err("prob-range", a.id, f"probGivenPresent {a.prob_given_present!r} outside [0, 1]")
        for room_id, weight in a.room_weights:
            check_ref(a.id, room_id, kb.rooms, "roomWeight room")
            if not (math.isfinite(weight) and weight > 0):
                err("bad-weight", a.id, f"roomWeight for '{room_id}' must be positive, got {weight!r}")
        if a.acts_on in kb.asset_types and not eligible_rooms(a.id, kb):
            warn("no-eligible-room", a.id, f"no room contains asset type '{a.acts_on}'")

    for s in sorted(kb.signals.values(), key=lambda r: r.id):
        check_ref(s.id, s.signal_class, kb.signal_classes, "signalClass")
        check_ref(s.id, s.attenuation, kb.attenuation_laws, "attenuation law")
        if not math.isfinite(s.source_level):
            err("nonfinite", s.id, f"sourceLevel {s.source_level!r} is not finite")

    for c in sorted(kb.signal_classes.values(), key=lambda r: r.id):
        if c.broader is not None:
            check_ref(c.id, c.broader, kb.signal_classes, "broader class")

    # broader links must form a forest
    for start in sorted(kb.signal_classes):
        seen = [start]
        cur = kb.signal_classes[start].broader
        while cur is not None and cur in kb.signal_classes:
            if cur in seen:
                if cur == start:  # report each cycle once, at its smallest member
                    err("class-cycle", start, "broader cycle: " + " -> ".join(seen + [cur]))
                break
            seen.append(cur)
            cur = kb.signal_classes[cur].broader

    for law in sorted(kb.attenuation_laws.values(), key=lambda r: r.id):
        if law.kind not in ("inverse-square", "none"):
            err("bad-value", law.id, f"lawKind {law.kind!r} not one of inverse-square, none")
        if not (math.isfinite(law.reference_distance) and law.reference_distance > 0):
            err("nonpositive", law.id, f"referenceDistance must be > 0, got {law.reference_distance!r}")

    for cl in sorted(kb.classifiers.values(), key=lambda r: r.id):
        for cid in cl.detects_classes:
            check_ref(cl.id, cid, kb.signal_classes, "detectsClass")
        tpr, fpr = cl.true_positive_rate, cl.false_positive_rate
        if not _prob_in_range(tpr):
            err("prob-range", cl.id, f"truePositiveRate {tpr!r} outside [0, 1]")
        if not _prob_in_range(fpr):
            err("prob-range", cl.id, f"falsePositiveRate {fpr!r} outside [0, 1]")
        if _prob_in_range(tpr) and _prob_in_range(fpr) and not fpr < tpr:
            err("rate-order", cl.id, f"falsePositiveRate {fpr!r} must be strictly below truePositiveRate {tpr!r}")

    for sensor in sorted(kb.sensors.values(), key=lambda r: r.id):
        check_ref(sensor.id, sensor.classifier, kb.classifiers, "classifier")
        if not (math.isfinite(sensor.detection_slope) and sensor.detection_slope > 0):
            err("nonpositive", sensor.id, f"detectionSlope must be > 0, got {sensor.detection_slope!r}")
        if not (math.isfinite(sensor.position.x) and math.isfinite(sensor.position.y)):
            err("nonfinite", sensor.id, "position coordinates must be finite")
        if not math.isfinite(sensor.detection_threshold):
            err("nonfinite", sensor.id, "detectionThreshold must be finite")

    for room in sorted(kb.rooms.values(), key=lambda r: r.id):
        for aid in room.contains_assets:
            check_ref(room.id, aid, kb.asset_types, "containsAsset")
        if not (math.isfinite(room.centroid.x) and math.isfinite(room.centroid.y)):
            err("nonfinite", room.id, "centroid coordinates must be finite")

    for barrier in sorted(kb.barriers.values(), key=lambda r: r.id):
        a, b = barrier.segment
        coords = (a.x, a.y, b.x, b.y)
        if not all(math.isfinite(v) for v in coords):
            err("nonfinite", barrier.id, "segment coordinates must be finite")
        elif a == b:
            err("bad-segment", barrier.id, "segment endpoints must be distinct")
        if not (math.isfinite(barrier.attenuation) and barrier.attenuation >= 0):
            err("neg-attenuation", barrier.id, f"attenuationDb must be >= 0, got {barrier.attenuation!r}")

    return diags


# --- queries ------------------------------------------------------------------

def class_matches(signal_class: str, classifier_class: str, kb: KnowledgeBase) -> bool:
    """True iff classifier_class equals signal_class or is an ancestor of it.

    Matching walks `broader` links upward only: a classifier for a broad
    category recognizes its narrower members, never the reverse.
    """
    if signal_class not in kb.signal_classes or classifier_class not in kb.signal_classes:
        raise KeyError(f"unknown signal class: {signal_class!r} or {classifier_class!r}")
    cur: str | None = signal_class
    seen = set()
    while cur is not None and cur not in seen:
        if cur == classifier_class:
            return True
        seen.add(cur)
        nxt = kb.signal_classes.get(cur)
        cur = nxt.broader if nxt else None
    return False


def eligible_rooms(action: str, kb: KnowledgeBase) -> list[str]:
    """Sorted ids of rooms containing the action's target asset type."""
    spec = kb.actions.get(action)
    if spec is None:
        raise KeyError(f"unknown action: {action!r}")
    return sorted(r.id for r in kb.rooms.values() if spec.acts_on in r.contains_assets)


# --- serialization --------------------------------------------------------------

def _iri(local_id: str) -> Iri:
    return Iri(SKG + local_id)


def _lit(value: float | str | bool) -> Literal:
    return Literal(value)


def _record_statements(map_name: str, record) -> list[tuple[str, Term]]:
    """(predicate IRI, object) pairs for one record, in declaration order."""
    type_iri = next(k for k, v in _TYPE_MAP.items() if v == map_name)
    out: list[tuple[str, Term]] = [(RDF_TYPE, Iri(type_iri))]
    for predicate, fname, kind in _FIELD_MAP[map_name]:
        value = getattr(record, fname)
        if fname == "label" and value == record.id:
            continue  # labels defaulting to the id are not re-asserted
        if kind in ("str", "float"):
            out.append((predicate, _lit(value)))
        elif kind == "ref":
            if value is not None:
                out.append((predicate, _iri(value)))
        elif kind == "refs":
            for v in value:
                out.append((predicate, _iri(v)))
        elif kind == "point":
            out.append((predicate, (_lit(value.x), _lit(value.y))))
        elif kind == "segment":
            a, b = value
            out.append((predicate, (_lit(a.x), _lit(a.y), _lit(b.x), _lit(b.y))))
        elif kind == "room_weights":
            for room_id, weight in value:
                out.append((predicate, (_iri(room_id), _lit(weight))))
    return out


def _predicate_sort_key(predicate: str) -> tuple[int, str]:
    return (0 if predicate == RDF_TYPE else 1, turtle.compact_iri(predicate))


def serialize_kb(kb: KnowledgeBase) -> str:
    """Canonical Turtle for a knowledge base.

    Deterministic: canonical prefix block, subjects sorted by id, rdf:type
    first then predicates sorted by prefixed name, multi-valued objects sorted
    by their rendering. Subjects are normalized into the skg: namespace.
    Output re-parses to a structurally equal KnowledgeBase.
    """
    blocks: dict[str, list[tuple[str, Term]]] = {}
    for map_name, records in kb.record_maps().items():
        for rid, record in records.items():
            blocks[SKG + rid] = _record_statements(map_name, record)
    for t in kb.extras:
        blocks.setdefault(t.subject, []).append((t.predicate, t.obj))

    lines = [turtle.prefix_block()]
    for subject in sorted(blocks, key=turtle.local_name):
        pairs = blocks[subject]
        by_predicate: dict[str, list[Term]] = {}
        for predicate, obj in pairs:
            by_predicate.setdefault(predicate, []).append(obj)
        parts = []
        for predicate in sorted(by_predicate, key=_predicate_sort_key):
            rendered = sorted(turtle.format_term(o) for o in by_predicate[predicate])
            name = "a" if predicate == RDF_TYPE else turtle.compact_iri(predicate)
            parts.append(f"{name} {', '.join(rendered)}")
        subj = turtle.compact_iri(subject)
        body = " ;\n    ".join(parts)
        lines.append(f"{subj} {body} .\n")
    return "\n".join(lines)

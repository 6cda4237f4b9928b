"""Observation records and their two wire forms.

Records serialize either as SSN/SOSA-style JSON-LD (one sosa:Observation per
record) or as the plain evidence JSON accepted by the inference endpoints:
``{"observations": [{"sensor": ..., "class": ..., "result": ..., "time": ...}]}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from .turtle import SKG, SOSA, XSD, local_name

#: Synthetic clock origin for simulated observations (1 s per record).
EPOCH = datetime(2000, 1, 1, tzinfo=timezone.utc)


@dataclass(frozen=True)
class ObservationRecord:
    sensor: str
    observed_class: str
    result: bool
    time: str  # RFC 3339; carried through but ignored by inference


def synthetic_time(index: int) -> str:
    t = EPOCH + timedelta(seconds=index)
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def export_observations(records) -> str:
    """JSON-LD document with one sosa:Observation per record, in input order."""
    graph = []
    for i, rec in enumerate(records):
        graph.append(
            {
                "@id": f"urn:obs:{i}",
                "@type": "sosa:Observation",
                "sosa:madeBySensor": {"@id": f"skg:{rec.sensor}"},
                "sosa:observedProperty": {"@id": f"skg:{rec.observed_class}"},
                "sosa:hasSimpleResult": bool(rec.result),
                "sosa:resultTime": {"@type": "xsd:dateTime", "@value": rec.time},
            }
        )
    doc = {
        "@context": {"skg": SKG, "sosa": SOSA, "xsd": XSD},
        "@graph": graph,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def observations_to_plain_json(records) -> str:
    doc = {
        "observations": [
            {
                "sensor": r.sensor,
                "class": r.observed_class,
                "result": r.result,
                "time": r.time,
            }
            for r in records
        ]
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def _strip_curie(value: str) -> str:
    if value.startswith("skg:"):
        return value[len("skg:"):]
    return local_name(value)


def parse_observations(text: str) -> list[ObservationRecord]:
    """Read observation records from JSON-LD or plain evidence JSON."""
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("observation document must be a JSON object")
    if "@graph" in doc:
        return _parse_jsonld(doc)
    if "observations" in doc:
        return parse_observation_items(doc["observations"])
    raise ValueError("observation document needs an '@graph' or 'observations' key")


def parse_observation_items(items) -> list[ObservationRecord]:
    if not isinstance(items, list):
        raise ValueError("'observations' must be a list")
    records = []
    for item in items:
        try:
            records.append(
                ObservationRecord(
                    sensor=str(item["sensor"]),
                    observed_class=str(item["class"]),
                    result=bool(item["result"]),
                    time=str(item.get("time", synthetic_time(0))),
                )
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed observation entry: {item!r}") from exc
    return records


def _parse_jsonld(doc: dict) -> list[ObservationRecord]:
    records = []
    for node in doc["@graph"]:
        if node.get("@type") != "sosa:Observation":
            continue
        try:
            sensor = _strip_curie(node["sosa:madeBySensor"]["@id"])
            observed = _strip_curie(node["sosa:observedProperty"]["@id"])
            result = bool(node["sosa:hasSimpleResult"])
            time = node.get("sosa:resultTime", {}).get("@value", synthetic_time(0))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed sosa:Observation: {node.get('@id', '?')}") from exc
        records.append(ObservationRecord(sensor, observed, result, str(time)))
    return records

"""Signal propagation: geometry, level attenuation, and detection probability.

Levels are decibels on a relative scale; a signal's source level is the level
measured at its attenuation law's reference distance. All functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:  # pragma: no cover
    from .kgmodel import AttenuationLaw, Barrier, SensorSpec

#: Geometric tolerance, in meters, for the inclusive intersection rule.
EPSILON = 1e-9

#: Level sentinel for a fully blocked path.
BLOCKED = float("-inf")


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float


def distance(a: Point2D, b: Point2D) -> float:
    """Euclidean distance in meters."""
    return math.hypot(b.x - a.x, b.y - a.y)


def _cross(ox: float, oy: float, ax: float, ay: float, bx: float, by: float) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _on_segment(ax, ay, bx, by, px, py, eps: float) -> bool:
    # distance from p to line(a,b) under eps, and p within the bounding box
    seg = math.hypot(bx - ax, by - ay)
    if seg <= eps:
        return math.hypot(px - ax, py - ay) <= eps
    if abs(_cross(ax, ay, bx, by, px, py)) > eps * seg:
        return False
    return (
        min(ax, bx) - eps <= px <= max(ax, bx) + eps
        and min(ay, by) - eps <= py <= max(ay, by) + eps
    )


def segments_intersect(
    p1: Point2D, p2: Point2D, q1: Point2D, q2: Point2D, eps: float = EPSILON
) -> bool:
    """Inclusive segment intersection: touching endpoints and collinear overlap count."""
    d1 = _cross(q1.x, q1.y, q2.x, q2.y, p1.x, p1.y)
    d2 = _cross(q1.x, q1.y, q2.x, q2.y, p2.x, p2.y)
    d3 = _cross(p1.x, p1.y, p2.x, p2.y, q1.x, q1.y)
    d4 = _cross(p1.x, p1.y, p2.x, p2.y, q2.x, q2.y)
    lq = math.hypot(q2.x - q1.x, q2.y - q1.y)
    lp = math.hypot(p2.x - p1.x, p2.y - p1.y)
    tq = eps * lq
    tp = eps * lp
    if ((d1 > tq and d2 < -tq) or (d1 < -tq and d2 > tq)) and (
        (d3 > tp and d4 < -tp) or (d3 < -tp and d4 > tp)
    ):
        return True
    if _on_segment(q1.x, q1.y, q2.x, q2.y, p1.x, p1.y, eps):
        return True
    if _on_segment(q1.x, q1.y, q2.x, q2.y, p2.x, p2.y, eps):
        return True
    if _on_segment(p1.x, p1.y, p2.x, p2.y, q1.x, q1.y, eps):
        return True
    if _on_segment(p1.x, p1.y, p2.x, p2.y, q2.x, q2.y, eps):
        return True
    return False


def crossings(
    src: Point2D, dst: Point2D, barriers: Sequence["Barrier"]
) -> tuple[int, list[str]]:
    """Count barriers whose segment intersects src->dst, each at most once.

    Returns (count, crossed barrier ids in input order). A zero-length path
    crosses nothing.
    """
    if distance(src, dst) <= EPSILON:
        return 0, []
    crossed: list[str] = []
    for barrier in barriers:
        a, b = barrier.segment
        if segments_intersect(src, dst, a, b):
            crossed.append(barrier.id)
    return len(crossed), crossed


def received_level(
    source_level: float,
    law: "AttenuationLaw",
    d: float,
    crossed: Iterable["Barrier"] = (),
) -> float:
    """Level at distance d after geometric spreading and barrier attenuation.

    Inverse-square spreading is 20*log10(d/d_ref) in decibel form; distances
    below the reference distance are clamped to it.
    """
    wall_loss = sum(b.attenuation for b in crossed)
    if law.kind == "none":
        return source_level - wall_loss
    d_eff = max(d, law.reference_distance)
    return source_level - 20.0 * math.log10(d_eff / law.reference_distance) - wall_loss


def logistic(x: float) -> float:
    """Numerically stable logistic sigmoid."""
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def detection_prob(level: float, sensor: "SensorSpec") -> float:
    """Probability that `sensor` registers a signal arriving at `level` dB.

    Logistic in (level - threshold) / slope; a zero slope degrades to an
    exact-comparison hard threshold, and a fully blocked level maps to 0.
    """
    if level == BLOCKED:
        return 0.0
    slope = sensor.detection_slope
    if slope == 0.0:
        if level > sensor.detection_threshold:
            return 1.0
        if level == sensor.detection_threshold:
            return 0.5
        return 0.0
    return logistic((level - sensor.detection_threshold) / slope)

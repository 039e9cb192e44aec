"""Planar geometry primitives shared by the scene and corridor modules.

All lengths are millimetres. Points are plain ``(x, y)`` tuples so they
serialize naturally and stay hashable.
"""
from __future__ import annotations

import math

Point = tuple[float, float]


def dist(a: Point, b: Point) -> float:
    """Euclidean distance between two points."""
    return math.hypot(b[0] - a[0], b[1] - a[1])


def segment_point_distance(a: Point, b: Point, p: Point) -> float:
    """Shortest distance from point ``p`` to the closed segment ``a``-``b``.

    Degenerate segments (a == b) reduce to point distance.
    """
    ax, ay = a
    bx, by = b
    px, py = p
    dx = bx - ax
    dy = by - ay
    dd = dx * dx + dy * dy
    if dd == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / dd
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def is_finite_point(p: Point) -> bool:
    return math.isfinite(p[0]) and math.isfinite(p[1])

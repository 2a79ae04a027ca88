"""Brute-force references. Linear scans only, no indexing."""

from __future__ import annotations

from typing import Iterable, Sequence, Set

from .model import CanonicalBox, ColoredPoint, QueryRect


def oracle_distinct_count(points: Iterable[ColoredPoint], q: QueryRect) -> int:
    return len({p.color for p in points if q.a <= p.x <= q.b and q.c <= p.y <= q.d})


def oracle_stab(boxes: Sequence[CanonicalBox], p: Sequence[int]) -> Set[int]:
    x, y, z = p[0], p[1], p[2]
    return {
        i for i, b in enumerate(boxes)
        if b.x1 <= x and b.y1 <= y < b.y2 and b.z1 <= z < b.z2
    }


def oracle_dominance_count(points3d: Iterable[Sequence[int]], p: Sequence[int]) -> int:
    return sum(1 for s in points3d if s[0] <= p[0] and s[1] <= p[1] and s[2] <= p[2])


def oracle_dominance_2d(points2d: Iterable[Sequence[int]], qx: int, qy: int) -> int:
    return sum(1 for s in points2d if s[0] <= qx and s[1] <= qy)


def oracle_emptiness(points: Iterable[ColoredPoint], color: int, q: QueryRect) -> bool:
    """True when some point of `color` lies in q (despite the name, this is the nonempty test)."""
    return any(p.color == color and q.contains(p.x, p.y) for p in points)

"""Per-color orthogonal range emptiness in rank space.

Each color class keeps its x-sorted and y-sorted coordinates plus a
RankTree over its own points; a query maps the rectangle into the class's
local ranks with two binary searches per axis and then runs a wavelet-style
range count that stops at the first hit.  Storage is O(1) words per point
plus the packed bit vectors.  Classes of at most SMALL_CLASS points skip
the tree and are scanned directly.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

from .model import ColoredPoint, QueryRect
from .ranktree import RankTree


SMALL_CLASS = 8


class _ColorClass:
    __slots__ = ("xs", "ys", "tree", "pts")

    def __init__(self, pts: List[Tuple[int, int]]):
        if len(pts) <= SMALL_CLASS:
            self.pts = pts
            self.xs = self.ys = self.tree = None
            return
        self.pts = None
        self.xs = sorted(p[0] for p in pts)
        self.ys = sorted(p[1] for p in pts)
        # no point_at needed: sample only the root level
        self.tree = RankTree(pts, stride=64)

    def words(self) -> float:
        if self.tree is None:
            return 2 * len(self.pts)
        return len(self.xs) + len(self.ys) + self.tree.words()


class EmptinessIndex:
    def __init__(self, points: Sequence[ColoredPoint]):
        groups: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
        for p in points:
            groups[p.color].append((p.x, p.y))
        self._classes = {c: _ColorClass(pts) for c, pts in groups.items()}
        self.n = len(points)

    def colors(self):
        return self._classes.keys()

    def is_nonempty(self, color: int, q: QueryRect) -> bool:
        cls = self._classes.get(color)
        if cls is None:
            return False
        if cls.tree is None:
            a, b, c, d = q
            return any(a <= x <= b and c <= y <= d for x, y in cls.pts)
        xs, ys = cls.xs, cls.ys
        xlo = bisect_left(xs, q.a) + 1
        xhi = bisect_right(xs, q.b)
        if xlo > xhi:
            return False
        ylo = bisect_left(ys, q.c) + 1
        yhi = bisect_right(ys, q.d)
        if ylo > yhi:
            return False
        return cls.tree.range_nonempty(xlo, xhi, ylo, yhi)

    def words(self) -> float:
        return sum(c.words() for c in self._classes.values())


def build_emptiness(points: Sequence[ColoredPoint]) -> EmptinessIndex:
    return EmptinessIndex(points)


def is_nonempty(idx: EmptinessIndex, color: int, q: QueryRect) -> bool:
    return idx.is_nonempty(color, q)

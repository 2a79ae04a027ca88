"""Reduction of 3-sided colored counting to stabbing over canonical boxes.

A point set is lifted to 3D so that a 3-sided rectangle query becomes a
dominance query; the union of upward octants of each color class is then
cut into disjoint canonical boxes.  A query point dominates some point of
color c exactly when it lies in (exactly one) box of color c.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Sequence, Tuple

from .model import INF, CanonicalBox, ColoredPoint


class LiftedPoint(NamedTuple):
    x: int
    y: int
    z: int
    color: int


def lift_top_open(points: Sequence[ColoredPoint]) -> List[LiftedPoint]:
    """[a,b] x [c,+inf) over the input becomes dominance by (-a, b, -c)."""
    return [LiftedPoint(-p.x, p.x, -p.y, p.color) for p in points]


def lift_bottom_open(points: Sequence[ColoredPoint]) -> List[LiftedPoint]:
    """[a,b] x (-inf,d] over the input becomes dominance by (-a, b, d)."""
    return [LiftedPoint(-p.x, p.x, p.y, p.color) for p in points]


def top_open_query(a: int, b: int, c: int) -> Tuple[int, int, int]:
    return (-a, b, -c)


def bottom_open_query(a: int, b: int, d: int) -> Tuple[int, int, int]:
    return (-a, b, d)


def decompose_union(points3d: Sequence[Sequence[int]], color: int = 0) -> List[CanonicalBox]:
    """Partition the union of octants [p.x,inf) x [p.y,inf) x [p.z,inf) into
    pairwise disjoint canonical boxes (at most 2 per input point).

    Sweeps x upward while keeping the 2D cross-section as a staircase of
    minimal (y, z) points: ys ascending, zs strictly descending.
    """
    ys: List[int] = []
    zs: List[int] = []
    out: List[CanonicalBox] = []
    for px, py, pz in sorted((p[0], p[1], p[2]) for p in points3d):
        # predecessor in y: the staircase point with largest y <= py
        i = bisect_right(ys, py)
        if i > 0 and zs[i - 1] <= pz:
            continue  # already covered
        # staircase points with y >= py and z >= pz are swallowed; they
        # form a run starting at the first point with y >= py
        lo = bisect_left(ys, py)
        hi = lo
        while hi < len(ys) and zs[hi] >= pz:
            hi += 1
        z_cap = zs[lo - 1] if lo > 0 else INF
        y_end = ys[hi] if hi < len(ys) else INF
        y_cur, z_top = py, z_cap
        for j in range(lo, hi):
            if ys[j] > y_cur and z_top > pz:
                out.append(CanonicalBox(px, y_cur, ys[j], pz, z_top, color))
            y_cur, z_top = ys[j], zs[j]
        if y_end > y_cur and z_top > pz:
            out.append(CanonicalBox(px, y_cur, y_end, pz, z_top, color))
        ys[lo:hi] = [py]
        zs[lo:hi] = [pz]
    return out


@dataclass
class ColoredBoxSet:
    """Boxes of all colors; boxes of one color occupy a contiguous index range."""

    boxes: List[CanonicalBox] = field(default_factory=list)
    color_ranges: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.boxes)


def build_colored_boxes(points3d: Sequence[LiftedPoint]) -> ColoredBoxSet:
    by_color: Dict[int, List[Tuple[int, int, int]]] = defaultdict(list)
    for p in points3d:
        by_color[p.color].append((p.x, p.y, p.z))
    result = ColoredBoxSet()
    for color in sorted(by_color):
        start = len(result.boxes)
        result.boxes.extend(decompose_union(by_color[color], color))
        result.color_ranges[color] = (start, len(result.boxes))
    return result

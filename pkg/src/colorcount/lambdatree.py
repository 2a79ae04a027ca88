"""Balanced lambda-ary range tree over z with a 2D RankTree at every node.

Leaves are the points in z order; the node at level ``l`` with index ``k``
covers leaves [k * span, (k + 1) * span) with span = arity ** (h - l).
A dominance query walks to the last leaf with z <= q.z, collects the left
siblings of every path node plus that leaf, and asks each collected
node's RankTree for the (x, y) dominance prefixes.

The root is never collected when h > 0, so its RankTree is not built.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import List, Optional, Sequence, Tuple

from .model import ParameterError, ceil_log
from .ranktree import PrefixRef, RankTree
from .stabbing import TreeRegistry


class LambdaTree:
    def __init__(self, points3d: Sequence[Tuple[int, int, int]], arity: int,
                 items: Optional[Sequence] = None, stride=None,
                 registry: Optional[TreeRegistry] = None, family: str = ""):
        if arity < 2:
            raise ParameterError(f"arity must be >= 2, got {arity}")
        n = len(points3d)
        if n == 0:
            raise ValueError("LambdaTree needs at least one point")
        self.arity = arity
        self.n = n
        self.height = h = ceil_log(n, arity)
        self.registry = registry if registry is not None else TreeRegistry()
        order = sorted(range(n), key=lambda i: (points3d[i][2], i))
        self._zkeys = [points3d[i][2] for i in order]
        src = range(n) if items is None else items
        # levels[l][k] is the RankTree of node (l, k); None for the unbuilt root
        self.levels: List[List[Optional[RankTree]]] = []
        for level in range(h + 1):
            span = arity ** (h - level)
            row: List[Optional[RankTree]] = []
            if level == 0 and h > 0:
                row.append(None)
            else:
                for k in range(-(-n // span)):
                    chunk = order[k * span:(k + 1) * span]
                    tree = RankTree([(points3d[i][0], points3d[i][1]) for i in chunk],
                                    [src[i] for i in chunk], stride)
                    row.append(self.registry.add(tree, family))
            self.levels.append(row)

    def node_sizes(self) -> List[int]:
        return [t.n for row in self.levels for t in row if t is not None]

    def dominance_prefixes_3d(self, qx, qy, qz) -> List[PrefixRef]:
        t = bisect_right(self._zkeys, qz)
        if t == 0:
            return []
        leaf = t - 1
        lam, h, levels = self.arity, self.height, self.levels
        out: List[PrefixRef] = []
        span = lam ** h
        for level in range(1, h + 1):
            span //= lam
            c = leaf // span
            row = levels[level]
            for sib in range(c - c % lam, c):
                out.extend(row[sib].dominance_prefixes(qx, qy))
        out.extend(levels[h][leaf].dominance_prefixes(qx, qy))
        return out

    def dominance_count(self, qx, qy, qz) -> int:
        return sum(r.length for r in self.dominance_prefixes_3d(qx, qy, qz))


def build_lambda(points3d, arity: int, items=None, stride=None) -> LambdaTree:
    return LambdaTree(points3d, arity, items, stride)

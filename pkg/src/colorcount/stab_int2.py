"""Interval tree over z, interval trees over y, and four lambda-ary
dominance trees per middle node, one per yz corner of the stored boxes.

Open sides are handled by storing negated upper bounds: a box satisfies
y2 > q.y exactly when -y2 <= -q.y - 1 (likewise for z).
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .intervals import IntervalNode, build_interval_tree, interval_tree_nodes
from .lambdatree import LambdaTree
from .model import CanonicalBox, ParameterError
from .ranktree import PrefixRef
from .stabbing import RankTreeBackedIndex, TreeRegistry

CORNERS = ("ll", "lr", "ul", "ur")


class Int2Index(RankTreeBackedIndex):
    def __init__(self, boxes: Sequence[CanonicalBox], arity: int, stride=None):
        if arity < 2:
            raise ParameterError(f"arity must be >= 2, got {arity}")
        self.boxes = list(boxes)
        self.arity = arity
        self.registry = TreeRegistry()
        bx = self.boxes
        self.top: Optional[IntervalNode] = build_interval_tree(
            [(b.z1, b.z2, i) for i, b in enumerate(bx)])
        for v in interval_tree_nodes(self.top):
            mid = build_interval_tree([(bx[i].y1, bx[i].y2, i) for i in v.items])
            for w in interval_tree_nodes(mid):
                ids = w.items
                if not ids:
                    continue
                w.payload = {
                    "ll": self._corner_tree("ll", [(bx[i].x1, bx[i].y1, bx[i].z1) for i in ids], ids, stride),
                    "lr": self._corner_tree("lr", [(bx[i].x1, bx[i].y1, -bx[i].z2) for i in ids], ids, stride),
                    "ul": self._corner_tree("ul", [(bx[i].x1, -bx[i].y2, bx[i].z1) for i in ids], ids, stride),
                    "ur": self._corner_tree("ur", [(bx[i].x1, -bx[i].y2, -bx[i].z2) for i in ids], ids, stride),
                }
            v.payload = mid

    def _corner_tree(self, corner, pts, ids, stride) -> LambdaTree:
        return LambdaTree(pts, self.arity, ids, stride, self.registry, corner)

    def _visits(self, q):
        """Yield (corner, lambda tree, query triple) for every (v, v') pair on the search paths."""
        x, y, z = q[0], q[1], q[2]
        v = self.top
        while v is not None:
            zlow = z <= v.median
            w = v.payload
            while w is not None:
                ylow = y <= w.median
                if w.payload is None:
                    pass
                elif zlow:
                    if ylow:
                        yield "ll", w.payload["ll"], (x, y, z)
                    else:
                        yield "ul", w.payload["ul"], (x, -y - 1, z)
                elif ylow:
                    yield "lr", w.payload["lr"], (x, y, -z - 1)
                else:
                    yield "ur", w.payload["ur"], (x, -y - 1, -z - 1)
                w = w.left if ylow else w.right
            v = v.left if zlow else v.right

    def stab_prefixes(self, q: Sequence[int]) -> List[PrefixRef]:
        out: List[PrefixRef] = []
        for _, tree, (a, b, c) in self._visits(q):
            out.extend(tree.dominance_prefixes_3d(a, b, c))
        return out

    def corners_consulted(self, q: Sequence[int]) -> List[str]:
        return [corner for corner, _, _ in self._visits(q)]

    def words(self) -> float:
        w = 6 * len(self.boxes)
        for v in interval_tree_nodes(self.top):
            w += 4
            for w_node in interval_tree_nodes(v.payload):
                w += 4 + 4 * len(w_node.items)  # node record + explicit z keys per corner tree
        return w + super().words()


def build_int2(boxes, arity: int = 2, stride=None) -> Int2Index:
    return Int2Index(getattr(boxes, "boxes", boxes), arity, stride)

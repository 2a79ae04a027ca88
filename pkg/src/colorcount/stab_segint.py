"""Segment tree over z, interval trees over y, and at every interval-tree
node a pair of RankTrees over the lower-left and upper-left corners of its
boxes' xy projections.

The upper-corner tree stores -y2 so that the open condition y2 > q.y turns
into the closed dominance bound -y2 <= -q.y - 1.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Sequence

from .intervals import IntervalNode, SegmentLayout, build_interval_tree, interval_tree_nodes
from .model import CanonicalBox
from .ranktree import PrefixRef, RankTree
from .stabbing import RankTreeBackedIndex, TreeRegistry


class SegIntIndex(RankTreeBackedIndex):
    def __init__(self, boxes: Sequence[CanonicalBox], stride=None):
        self.boxes = list(boxes)
        self.registry = TreeRegistry()
        self.top = SegmentLayout((b.z1, b.z2) for b in self.boxes)
        assigned: Dict[int, List[int]] = defaultdict(list)
        for i, b in enumerate(self.boxes):
            for v in self.top.assign(b.z1, b.z2):
                assigned[v].append(i)
        self._mid: Dict[int, IntervalNode] = {}
        bx = self.boxes
        for v in sorted(assigned):
            root = build_interval_tree([(bx[i].y1, bx[i].y2, i) for i in assigned[v]])
            for node in interval_tree_nodes(root):
                ids = node.items
                if not ids:
                    continue
                lower = RankTree([(bx[i].x1, bx[i].y1) for i in ids], ids, stride)
                upper = RankTree([(bx[i].x1, -bx[i].y2) for i in ids], ids, stride)
                node.payload = (self.registry.add(lower, "lower"), self.registry.add(upper, "upper"))
            self._mid[v] = root

    def stab_prefixes(self, q: Sequence[int]) -> List[PrefixRef]:
        x, y, z = q[0], q[1], q[2]
        out: List[PrefixRef] = []
        for v in self.top.path(z):
            node = self._mid.get(v)
            while node is not None:
                pair = node.payload
                if y <= node.median:
                    if pair is not None:
                        out.extend(pair[0].dominance_prefixes(x, y))
                    node = node.left
                else:
                    if pair is not None:
                        out.extend(pair[1].dominance_prefixes(x, -y - 1))
                    node = node.right
        return out

    def trees_consulted(self, q: Sequence[int]) -> List[str]:
        """Which corner tree ('lower'/'upper') each visited node would use."""
        x, y, z = q[0], q[1], q[2]
        out = []
        for v in self.top.path(z):
            node = self._mid.get(v)
            while node is not None:
                if node.payload is None:
                    node = node.left if y <= node.median else node.right
                elif y <= node.median:
                    out.append("lower")
                    node = node.left
                else:
                    out.append("upper")
                    node = node.right
        return out

    def words(self) -> float:
        w = 6 * len(self.boxes) + len(self.top.ends)
        for root in self._mid.values():
            w += 4 * sum(1 for _ in interval_tree_nodes(root))
        return w + super().words()


def build_segint(boxes, stride=None) -> SegIntIndex:
    return SegIntIndex(getattr(boxes, "boxes", boxes), stride)

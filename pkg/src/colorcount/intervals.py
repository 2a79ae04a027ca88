"""Static segment tree and interval tree skeletons over half-open integer intervals."""

from __future__ import annotations

from array import array
from bisect import bisect_left, bisect_right
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


def _compact(values: List) -> Sequence:
    """Sorted keys as a packed int64 array when they fit, else the list itself."""
    try:
        return array("q", values)
    except (TypeError, OverflowError):
        return values


class SegmentLayout:
    """Elementary intervals from the distinct endpoints; an iterative
    (bottom-up) tree whose leaf j stands for [ends[j], ends[j+1]).

    Node ids are heap indices in a tree of ``size`` leaves.
    """

    __slots__ = ("ends", "size")

    def __init__(self, intervals: Iterable[Tuple[int, int]]):
        ends = set()
        for lo, hi in intervals:
            ends.add(lo)
            ends.add(hi)
        self.ends = _compact(sorted(ends))
        slots = max(1, len(self.ends) - 1)
        self.size = 1 << (slots - 1).bit_length()

    @property
    def height(self) -> int:
        return self.size.bit_length() - 1

    def assign(self, lo: int, hi: int) -> List[int]:
        """Canonical nodes whose union is [lo, hi) (at most two per level)."""
        l = bisect_left(self.ends, lo) + self.size
        r = bisect_left(self.ends, hi) + self.size
        out = []
        while l < r:
            if l & 1:
                out.append(l)
                l += 1
            if r & 1:
                r -= 1
                out.append(r)
            l >>= 1
            r >>= 1
        return out

    def path(self, q: int) -> List[int]:
        """Leaf-to-root ancestors of the elementary interval holding q."""
        j = bisect_right(self.ends, q) - 1
        if j < 0 or j >= len(self.ends) - 1:
            return []
        v = j + self.size
        out = []
        while v:
            out.append(v)
            v >>= 1
        return out


class IntervalNode:
    __slots__ = ("median", "items", "left", "right", "payload")

    def __init__(self, median: int, items: List[int]):
        self.median = median
        self.items = items
        self.left: Optional[IntervalNode] = None
        self.right: Optional[IntervalNode] = None
        self.payload = None


def build_interval_tree(intervals: Sequence[Tuple[int, int, int]]) -> Optional[IntervalNode]:
    """Static interval tree over half-open [lo, hi) intervals tagged with item ids.

    The median is the lower median of the multiset of both endpoints; a node
    keeps the intervals with lo <= median < hi, which may be none of them
    (e.g. [0,1) and [2,3) split around median 1).
    """
    if not intervals:
        return None
    ends = sorted([iv[0] for iv in intervals] + [iv[1] for iv in intervals])
    m = ends[len(intervals) - 1]
    here, left, right = [], [], []
    for iv in intervals:
        if iv[1] <= m:
            left.append(iv)
        elif iv[0] > m:
            right.append(iv)
        else:
            here.append(iv[2])
    node = IntervalNode(m, here)
    node.left = build_interval_tree(left)
    node.right = build_interval_tree(right)
    return node


def interval_tree_nodes(root: Optional[IntervalNode]):
    stack = [root] if root is not None else []
    while stack:
        v = stack.pop()
        yield v
        if v.left is not None:
            stack.append(v.left)
        if v.right is not None:
            stack.append(v.right)


def interval_tree_depth(root: Optional[IntervalNode]) -> int:
    if root is None:
        return 0
    return 1 + max(interval_tree_depth(root.left), interval_tree_depth(root.right))

"""Binary range tree over y with rank bit vectors (a wavelet-tree layout).

Node v conceptually owns P(v), its leaf-descendant points sorted by x.
Only one bit vector per level is stored: the concatenation of B(v) over
the nodes of that level.  In rank space the segment of a node at level
``l`` with index ``k`` starts at ``k << (h - l)``, so no per-node offsets
are needed.  Point coordinates are kept for every ``stride``-th level;
``point_at`` walks down through unsampled levels with rank calls.

Node ids are heap indices: root 1, children 2v and 2v+1, leaves at depth h.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .bitvector import RankBitVector


class PrefixRef(NamedTuple):
    """A nonempty prefix of one bottom list: the first ``length`` entries."""

    list_id: int
    length: int


class RankTree:
    __slots__ = ("n", "height", "stride", "base", "items", "_xkeys", "_ykeys",
                 "_x_of_y", "_bv", "_sampled")

    def __init__(self, points: Sequence[Tuple[int, int]], items: Optional[Sequence] = None,
                 stride: Optional[int] = None, base: int = 0):
        n = len(points)
        if n == 0:
            raise ValueError("RankTree needs at least one point")
        h = (n - 1).bit_length()
        if stride is None:
            stride = max(1, -(-h // 4))
        self.n = n
        self.height = h
        self.stride = stride
        self.base = base

        order_x = sorted(range(n), key=lambda i: (points[i][0], i))
        order_y = sorted(range(n), key=lambda i: (points[i][1], i))
        yr = [0] * n
        for r, i in enumerate(order_y, 1):
            yr[i] = r
        self._xkeys = [points[i][0] for i in order_x]
        self._ykeys = [points[i][1] for i in order_y]
        src = range(n) if items is None else items
        self.items = [src[i] for i in order_y]

        seq = [yr[i] for i in order_x]          # level 0: y-ranks in x order
        x_of_y = [0] * n
        for xr, y in enumerate(seq, 1):
            x_of_y[y - 1] = xr
        self._x_of_y = x_of_y
        self._bv: List[RankBitVector] = []
        self._sampled: Dict[int, List[int]] = {}
        for level in range(h):
            shift = h - level - 1
            self._bv.append(RankBitVector([((y - 1) >> shift) & 1 for y in seq]))
            if level % stride == 0:
                self._sampled[level] = seq
            seq = sorted(seq, key=lambda y, s=shift: (y - 1) >> s)

    # -- layout helpers ---------------------------------------------------

    @property
    def id_span(self) -> int:
        return 1 << (self.height + 1)

    def _segment(self, node: int) -> Tuple[int, int, int]:
        level = node.bit_length() - 1
        if node < 1 or level > self.height:
            raise IndexError(f"no node {node}")
        start = (node - (1 << level)) << (self.height - level)
        end = min(start + (1 << (self.height - level)), self.n)
        return level, start, end

    def list_length(self, node: int) -> int:
        _, start, end = self._segment(node)
        return max(0, end - start)

    def nodes(self):
        """Ids of all nonempty nodes."""
        for level in range(self.height + 1):
            size = 1 << (self.height - level)
            for k in range(-(-self.n // size)):
                yield (1 << level) + k

    def memberships(self) -> int:
        """Number of lists each point belongs to (one per level)."""
        return self.height + 1

    def rank(self, node: int, k: int) -> int:
        """Number of ones among the first k bits of B(node)."""
        level, start, end = self._segment(node)
        if level == self.height:
            raise IndexError("leaves carry no bit vector")
        if not 0 <= k <= end - start:
            raise IndexError(k)
        bv = self._bv[level]
        return bv.rank1(start + k) - bv.rank1(start)

    def bits(self, node: int) -> List[int]:
        level, start, end = self._segment(node)
        bv = self._bv[level]
        return [bv[i] for i in range(start, end)]

    # -- queries -----------------------------------------------------------

    def x_count(self, qx) -> int:
        return bisect_right(self._xkeys, qx)

    def y_count(self, qy) -> int:
        return bisect_right(self._ykeys, qy)

    def dominance_prefixes(self, qx, qy) -> List[PrefixRef]:
        """Prefixes partitioning {p : p.x <= qx, p.y <= qy}."""
        return self.dominance_prefixes_rank(bisect_right(self._xkeys, qx),
                                            bisect_right(self._ykeys, qy))

    def dominance_prefixes_rank(self, jx: int, qy: int) -> List[PrefixRef]:
        n, h, base = self.n, self.height, self.base
        if jx <= 0 or qy <= 0:
            return []
        if jx > n:
            jx = n
        out = []
        node = 1
        level = 0
        start = 0
        j = jx
        bvs = self._bv
        while True:
            size = 1 << (h - level)
            end = start + size
            if end > n:
                end = n
            if end <= qy:
                out.append(PrefixRef(base + node, j))
                return out
            half = size >> 1
            bv = bvs[level]
            r0 = bv.rank1(start)
            ones = bv.rank1(start + j) - r0
            if qy > start + half:
                zeros = j - ones
                if zeros:
                    out.append(PrefixRef(base + 2 * node, zeros))
                node = 2 * node + 1
                start += half
                j = ones
            else:
                node = 2 * node
                j -= ones
            if not j:
                return out
            level += 1

    def dominance_count(self, qx, qy) -> int:
        return sum(r.length for r in self.dominance_prefixes(qx, qy))

    def point_at(self, node: int, i: int) -> Tuple[int, int]:
        """(x-rank, y-rank) of P(node)[i], 1-based i."""
        level, start, end = self._segment(node)
        if not 1 <= i <= end - start:
            raise IndexError(f"index {i} outside list of length {max(0, end - start)}")
        h = self.height
        pos = start + i - 1
        sampled = self._sampled
        while True:
            if level == h:
                y = pos + 1
                break
            s = sampled.get(level)
            if s is not None:
                y = s[pos]
                break
            bv = self._bv[level]
            before = bv.rank1(pos) - bv.rank1(start)
            if bv[pos]:
                start += 1 << (h - level - 1)
                pos = start + before
            else:
                pos = pos - before
            level += 1
        return self._x_of_y[y - 1], y

    def item_at(self, node: int, i: int):
        return self.items[self.point_at(node, i)[1] - 1]

    def range_count(self, xlo: int, xhi: int, ylo: int, yhi: int, stop_at_one: bool = False) -> int:
        """Points with x-rank in [xlo, xhi] and y-rank in [ylo, yhi]."""
        n, h = self.n, self.height
        xlo = max(xlo, 1)
        xhi = min(xhi, n)
        ylo = max(ylo, 1)
        yhi = min(yhi, n)
        if xlo > xhi or ylo > yhi:
            return 0
        total = 0
        stack = [(0, 0, xlo - 1, xhi)]
        bvs = self._bv
        while stack:
            level, start, lo, hi = stack.pop()
            if lo >= hi:
                continue
            size = 1 << (h - level)
            end = start + size
            if end > n:
                end = n
            if end < ylo or start + 1 > yhi:
                continue
            if ylo <= start + 1 and end <= yhi:
                total += hi - lo
                if stop_at_one:
                    return total
                continue
            bv = bvs[level]
            r0 = bv.rank1(start)
            rlo = bv.rank1(lo) - r0
            rhi = bv.rank1(hi) - r0
            half = size >> 1
            stack.append((level + 1, start, lo - rlo, hi - rhi))
            stack.append((level + 1, start + half, start + half + rlo, start + half + rhi))
        return total

    def range_nonempty(self, xlo: int, xhi: int, ylo: int, yhi: int) -> bool:
        return self.range_count(xlo, xhi, ylo, yhi, stop_at_one=True) > 0

    # -- bulk access -------------------------------------------------------

    def materialize(self, min_length: int = 1) -> Dict[int, List]:
        """Explicit item lists P(v) for every node with at least min_length points."""
        h, n = self.height, self.n
        items = self.items
        seq = [y for y in self._y_of_x()]
        out: Dict[int, List] = {}
        for level in range(h + 1):
            shift = h - level
            size = 1 << shift
            if size >= min_length:
                for k in range(-(-n // size)):
                    start = k << shift
                    end = min(start + size, n)
                    if end - start >= min_length:
                        out[(1 << level) + k] = [items[y - 1] for y in seq[start:end]]
            if level < h:
                seq = sorted(seq, key=lambda y, s=shift - 1: (y - 1) >> s)
        return out

    def _y_of_x(self) -> List[int]:
        s = self._sampled.get(0)
        if s is not None:
            return s
        y_of_x = [0] * self.n
        for y, x in enumerate(self._x_of_y, 1):
            y_of_x[x - 1] = y
        return y_of_x

    def words(self) -> float:
        w = sum(bv.words() for bv in self._bv)
        w += sum(len(s) for s in self._sampled.values())
        return w + len(self._x_of_y) + len(self.items) + len(self._xkeys) + len(self._ykeys)


def build_ranktree(points, items=None, stride=None) -> RankTree:
    return RankTree(points, items, stride)

"""Range-tree framework for 2D orthogonal colored range counting.

A binary range tree over y (padded to a power of two with empty leaves).
For every internal node v whose children are both nonempty, the left child
carries a top-open 3-sided structure and the right child a bottom-open
one, each a stabbing backend over canonical boxes, plus a per-color
emptiness index over the child's points in its own rank space.  M(v)
stores, for every pair of full-block prefixes of bottom lists on the two
sides, the size of the intersection of their color sets.

A query [a,b] x [c,d] goes to u = lca(leaf c, leaf d) and returns
|C(u_l)| + |C(u_r)| - |C(u_l) & C(u_r)|, the last term assembled from
matrix lookups, emptiness probes and one sorted-list intersection.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .boxes import build_colored_boxes, lift_bottom_open, lift_top_open
from .emptiness import EmptinessIndex
from .model import (ColoredPoint, DatasetError, ParameterError, QueryRect, RankSpaceMap,
                    ceil_log, ceil_log2, map_query, to_rank_space)
from .ranktree import PrefixRef
from .stabbing import BACKENDS, StabbingIndex, make_backend

BLOCK_TOKENS = ("sqrt_n_lg_n", "sqrt_n_times_lg_n", "sqrt_n_lg_n_log_lambda_n", "n")


def resolve_block_size(x: Union[int, str], n: int, arity: int = 2) -> int:
    """Block size X from an integer or a formula token, clamped to [1, n]."""
    if isinstance(x, str) and x.strip().lstrip("-").isdigit():
        x = int(x)
    if isinstance(x, int):
        if x < 1:
            raise ParameterError(f"block size must be >= 1, got {x}")
        return max(1, min(x, n))
    lg = max(1.0, math.log2(n)) if n > 1 else 1.0
    if x == "sqrt_n_lg_n":
        val = math.sqrt(n * lg)
    elif x == "sqrt_n_times_lg_n":
        val = math.sqrt(n) * lg
    elif x == "sqrt_n_lg_n_log_lambda_n":
        val = math.sqrt(n * lg * max(1.0, math.log(max(n, 2), arity)))
    elif x == "n":
        val = n
    else:
        raise ParameterError(f"unknown block size token {x!r}")
    return max(1, min(int(round(val)), n))


@dataclass
class FrameworkConfig:
    backend: str = "segseg"
    block_size: Union[int, str] = "sqrt_n_lg_n"
    arity: int = 2
    stride: Optional[int] = None

    def validate(self) -> None:
        if self.backend not in BACKENDS:
            raise ParameterError(f"unknown backend {self.backend!r}")
        if not isinstance(self.arity, int) or self.arity < 2:
            raise ParameterError(f"arity must be an integer >= 2, got {self.arity!r}")
        if self.stride is not None and self.stride < 1:
            raise ParameterError("stride must be >= 1")
        if isinstance(self.block_size, int) and self.block_size < 1:
            raise ParameterError("block size must be >= 1")
        if isinstance(self.block_size, str):
            resolve_block_size(self.block_size, 2, self.arity)


class BlockMatrix:
    """Dense b_l x b_r matrix; row (list A, k) is the prefix of A ending at its k-th full block."""

    def __init__(self, X: int, rows: Dict[int, Tuple[int, int]], cols: Dict[int, Tuple[int, int]],
                 data: np.ndarray):
        self.X = X
        self.rows = rows            # list id -> (first row, number of full blocks)
        self.cols = cols
        self.data = data

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def entries(self) -> int:
        return int(self.data.shape[0]) * int(self.data.shape[1])

    def entry(self, left_list: int, k_left: int, right_list: int, k_right: int) -> int:
        if left_list not in self.rows or right_list not in self.cols:
            raise IndexError("list has no full block")
        r0, nr = self.rows[left_list]
        c0, nc = self.cols[right_list]
        if not (1 <= k_left <= nr and 1 <= k_right <= nc):
            raise IndexError("block index out of range")
        return int(self.data[r0 + k_left - 1, c0 + k_right - 1])


def _full_block_layout(lists: Dict[int, List[int]], X: int):
    layout: Dict[int, Tuple[int, int]] = {}
    total = 0
    for lid in sorted(lists):
        nfull = len(lists[lid]) // X
        layout[lid] = (total, nfull)
        total += nfull
    return layout, total


def _first_blocks(lists, layout, X, color_of) -> Dict[int, List[int]]:
    """color -> row (or column) index of its first full block, one per list holding it."""
    out: Dict[int, List[int]] = {}
    for lid, ids in lists.items():
        start, nfull = layout[lid]
        seen = set()
        for pos in range(nfull * X):
            c = color_of[ids[pos]]
            if c not in seen:
                seen.add(c)
                out.setdefault(c, []).append(start + pos // X)
    return out


def _matrix_dtype(bound: int):
    for dt in (np.uint8, np.uint16, np.uint32):
        if bound <= np.iinfo(dt).max:
            return dt
    return np.int64


def build_matrix(left: StabbingIndex, right: StabbingIndex, X: int,
                 color_bound: Optional[int] = None) -> BlockMatrix:
    """Exact intersection sizes for every pair of full-block prefixes.

    For each color, take the first full block holding it in every list on
    each side and add one at all (left row, right column) combinations;
    running sums across the columns and then down the rows of each
    (list, list) block turn these first-occurrence marks into counts.
    Every intermediate value is bounded by a final entry, so the whole
    build runs in the narrow storage type.
    """
    llists = left.lists_at_least(X)
    rlists = right.lists_at_least(X)
    rows, b_l = _full_block_layout(llists, X)
    cols, b_r = _full_block_layout(rlists, X)
    lcolor = [b.color for b in left.boxes]
    rcolor = [b.color for b in right.boxes]
    if color_bound is None:
        color_bound = len(set(lcolor) & set(rcolor))
    dtype = _matrix_dtype(color_bound)
    if b_l == 0 or b_r == 0:
        return BlockMatrix(X, rows, cols, np.zeros((b_l, b_r), dtype=dtype))
    lfirst = _first_blocks(llists, rows, X, lcolor)
    rfirst = _first_blocks(rlists, cols, X, rcolor)
    # accumulate column-major so both running-sum passes add whole contiguous rows
    acc = np.zeros((b_r, b_l), dtype=dtype)
    for c, rr in lfirst.items():
        cc = rfirst.get(c)
        if cc is not None:
            # rows are distinct (one per list) and so are columns: no index collisions
            acc[np.ix_(cc, rr)] += 1
    _running_sums(acc, cols)
    data = np.ascontiguousarray(acc.T)
    del acc
    _running_sums(data, rows)
    return BlockMatrix(X, rows, cols, data)


def _running_sums(a: np.ndarray, segments: Dict[int, Tuple[int, int]]) -> None:
    """Turn each run of rows a[start:start+n] into its running sum, in place."""
    add = np.add
    for start, n in segments.values():
        for r in range(start + 1, start + n):
            add(a[r], a[r - 1], out=a[r])


def count_full_blocks(backend: StabbingIndex, X: int) -> int:
    return sum(backend.list_length(lid) // X for lid in backend.list_ids())


@dataclass
class ChildSide:
    """Structures attached to one child w of a payload node."""

    xs: List[int]              # sorted x-ranks of P(w)
    ys: List[int]              # sorted y-ranks of P(w)
    stab: StabbingIndex
    colors: List[int]          # color of each box of stab, by box id
    empt: EmptinessIndex

    def local_rect(self, a: int, b: int, c: int, d: int) -> QueryRect:
        xs, ys = self.xs, self.ys
        return QueryRect(bisect_left(xs, a) + 1, bisect_right(xs, b),
                         bisect_left(ys, c) + 1, bisect_right(ys, d))

    def words(self) -> float:
        return len(self.xs) + len(self.ys) + len(self.colors) + self.stab.words() + self.empt.words()


def _build_side(pts: Sequence[ColoredPoint], top_open: bool, cfg: FrameworkConfig) -> ChildSide:
    lifted = lift_top_open(pts) if top_open else lift_bottom_open(pts)
    boxes = build_colored_boxes(lifted).boxes
    stab = make_backend(cfg.backend, boxes, cfg.arity, cfg.stride)
    by_x = sorted(pts, key=lambda p: p.x)
    xs = [p.x for p in by_x]
    ys = sorted(p.y for p in pts)
    local = [ColoredPoint(bisect_left(xs, p.x) + 1, bisect_left(ys, p.y) + 1, p.color) for p in pts]
    return ChildSide(xs, ys, stab, [b.color for b in boxes], EmptinessIndex(local))


@dataclass
class QueryTrace:
    """Intermediate values of one query, for verification and benchmarks."""

    node: int = 0
    left_count: int = 0
    right_count: int = 0
    term_hh: int = 0
    term_hl: int = 0
    term_l: int = 0
    D: List[PrefixRef] = field(default_factory=list)
    U: List[PrefixRef] = field(default_factory=list)
    answer: int = 0

    @property
    def intersection(self) -> int:
        return self.term_hh + self.term_hl + self.term_l


def _sorted_intersection_size(a: List[int], b: List[int]) -> int:
    a = sorted(a)
    b = sorted(b)
    i = j = k = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            k += 1
            i += 1
            j += 1
    return k


class FrameworkIndex:
    def __init__(self, points: Sequence[ColoredPoint], cfg: Optional[FrameworkConfig] = None,
                 build_matrices: bool = True):
        cfg = cfg or FrameworkConfig()
        cfg.validate()
        if not points:
            raise DatasetError("empty dataset")
        self.cfg = cfg
        ranked, self.rank_map = to_rank_space(points)
        self.points = ranked
        n = self.n = len(ranked)
        self.X = resolve_block_size(cfg.block_size, n, cfg.arity)
        self.height = ceil_log2(n)
        self.size = 1 << self.height
        self.by_y: List[ColoredPoint] = sorted(ranked, key=lambda p: p.y)
        self.num_colors = len({p.color for p in ranked})
        self.sides: Dict[int, ChildSide] = {}
        self.matrices: Dict[int, BlockMatrix] = {}
        for v in self.payload_nodes():
            (l0, l1), (r0, r1) = self._child_ranges(v)
            self.sides[2 * v] = _build_side(self.by_y[l0:l1], True, cfg)
            self.sides[2 * v + 1] = _build_side(self.by_y[r0:r1], False, cfg)
        if build_matrices:
            self._build_matrices()

    # -- layout ----------------------------------------------------------

    def _range(self, v: int) -> Tuple[int, int]:
        """Half-open slice of by_y held by node v."""
        level = v.bit_length() - 1
        span = self.size >> level
        start = (v - (1 << level)) * span
        return min(start, self.n), min(start + span, self.n)

    def _child_ranges(self, v: int):
        return self._range(2 * v), self._range(2 * v + 1)

    def payload_nodes(self) -> List[int]:
        """Internal nodes whose two children both hold points."""
        out = []
        for v in range(1, self.size):
            (l0, l1), (r0, r1) = self._child_ranges(v)
            if l1 > l0 and r1 > r0:
                out.append(v)
        return out

    def lca_leaves(self, c: int, d: int) -> int:
        a = self.size + c - 1
        b = self.size + d - 1
        return a >> (a ^ b).bit_length()

    # -- matrices ----------------------------------------------------------

    def _build_matrices(self) -> None:
        self.matrices = {}
        for v in self.payload_nodes():
            self.matrices[v] = build_matrix(self.sides[2 * v].stab, self.sides[2 * v + 1].stab,
                                            self.X, self.num_colors)

    def with_block_size(self, X: Union[int, str]) -> "FrameworkIndex":
        """Same point set and stabbing structures, matrices rebuilt for another X."""
        other = object.__new__(FrameworkIndex)
        other.__dict__.update(self.__dict__)
        other.cfg = FrameworkConfig(self.cfg.backend, X, self.cfg.arity, self.cfg.stride)
        other.X = resolve_block_size(X, self.n, self.cfg.arity)
        other._build_matrices()
        return other

    # -- queries -----------------------------------------------------------

    def query(self, q: QueryRect) -> int:
        """Distinct colors among points in the closed rectangle (original coordinates)."""
        return self.query_rank(map_query(q, self.rank_map))

    def query_rank(self, r: QueryRect) -> int:
        return self.trace_rank(r).answer

    def trace(self, q: QueryRect) -> QueryTrace:
        return self.trace_rank(map_query(q, self.rank_map))

    def trace_rank(self, r: QueryRect) -> QueryTrace:
        n = self.n
        a, b = max(r.a, 1), min(r.b, n)
        c, d = max(r.c, 1), min(r.d, n)
        tr = QueryTrace()
        if a > b or c > d:
            return tr
        if c == d:
            p = self.by_y[c - 1]
            tr.node = self.size + c - 1
            tr.answer = 1 if a <= p.x <= b else 0
            return tr
        u = self.lca_leaves(c, d)
        left, right = self.sides[2 * u], self.sides[2 * u + 1]
        D, cl = three_sided_count(left, a, b, c, top_open=True)
        U, cr = three_sided_count(right, a, b, d, top_open=False)
        tr.node, tr.D, tr.U = u, D, U
        tr.left_count, tr.right_count = cl, cr
        if D and U:
            tr.term_hh, tr.term_hl, tr.term_l = intersection_terms(
                left, right, self.matrices[u], D, U, QueryRect(a, b, c, d))
        tr.answer = cl + cr - tr.intersection
        return tr

    # -- accounting --------------------------------------------------------

    def matrix_entries(self) -> int:
        return sum(m.entries for m in self.matrices.values())

    def duplication_factor(self) -> int:
        return max((s.stab.duplication_factor() for s in self.sides.values()), default=0)

    def words(self) -> float:
        w = 2 * self.n + len(self.rank_map.xkeys) + len(self.rank_map.ykeys)
        w += sum(s.words() for s in self.sides.values())
        return w + self.matrix_entries()


def three_sided_count(side: ChildSide, a: int, b: int, bound: int, top_open: bool):
    """Stab the child's structure with the lifted query; returns (prefixes, count).

    top_open: range [a,b] x [bound, +inf); otherwise [a,b] x (-inf, bound].
    """
    q = (-a, b, -bound) if top_open else (-a, b, bound)
    refs = side.stab.stab_prefixes(q)
    return refs, sum(r.length for r in refs)


def intersection_terms(left: ChildSide, right: ChildSide, M: BlockMatrix,
                       D: List[PrefixRef], U: List[PrefixRef], rect: QueryRect) -> Tuple[int, int, int]:
    """(full x full, full x partial, partial x all) parts of |C(u_l) & C(u_r)|."""
    X = M.X
    rows, cols, data = M.rows, M.cols, M.data

    hrows: List[int] = []
    sl_colors: List[int] = []
    lcol = left.colors
    for s in D:
        k = s.length // X
        if k:
            hrows.append(rows[s.list_id][0] + k - 1)
        if s.length > k * X:
            sl_colors.extend(lcol[i] for i in left.stab.prefix_box_ids(s.list_id, s.length, k * X))
    hcols: List[int] = []
    tl_colors: List[int] = []
    rcol = right.colors
    for t in U:
        k = t.length // X
        if k:
            hcols.append(cols[t.list_id][0] + k - 1)
        if t.length > k * X:
            tl_colors.extend(rcol[i] for i in right.stab.prefix_box_ids(t.list_id, t.length, k * X))

    hh = 0
    if hrows and hcols:
        if len(hrows) * len(hcols) <= 16:
            hh = sum(int(data[i, j]) for i in hrows for j in hcols)
        else:
            hh = int(data[np.ix_(hrows, hcols)].sum(dtype=np.int64))

    a, b, c, d = rect
    l_part = 0
    if sl_colors:
        rq = right.local_rect(a, b, c, d)
        probe = right.empt.is_nonempty
        l_part = sum(1 for col in sl_colors if probe(col, rq))
    hl = 0
    if tl_colors:
        lq = left.local_rect(a, b, c, d)
        probe = left.empt.is_nonempty
        hl = sum(1 for col in tl_colors if probe(col, lq))
        if sl_colors:
            hl -= _sorted_intersection_size(sl_colors, tl_colors)
    return hh, hl, l_part


def intersection_count(left, right, M, D, U, rect) -> int:
    return sum(intersection_terms(left, right, M, D, U, rect))


def build_framework(points: Sequence[ColoredPoint], cfg: Optional[FrameworkConfig] = None) -> FrameworkIndex:
    return FrameworkIndex(points, cfg)


def query(idx: FrameworkIndex, q: QueryRect) -> int:
    return idx.query(q)

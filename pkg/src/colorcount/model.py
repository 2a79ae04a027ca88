"""Domain types, rank-space reduction and dataset/query file I/O."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, List, NamedTuple, Sequence, Tuple, Union

# Stands in for +infinity in box bounds; every structure is integer-only.
INF = 1 << 62

Coord = Union[int, Decimal]


class DatasetError(ValueError):
    """Malformed or empty input data."""


class ParameterError(ValueError):
    """Invalid structure parameter (block size, arity, backend...)."""


class ColoredPoint(NamedTuple):
    x: Coord
    y: Coord
    color: int


class QueryRect(NamedTuple):
    """Closed rectangle [a, b] x [c, d]; a > b or c > d is an empty range."""

    a: Coord
    b: Coord
    c: Coord
    d: Coord

    def is_empty(self) -> bool:
        return self.a > self.b or self.c > self.d

    def contains(self, x, y) -> bool:
        return self.a <= x <= self.b and self.c <= y <= self.d


class CanonicalBox(NamedTuple):
    """Box [x1, +inf) x [y1, y2) x [z1, z2); y2/z2 may equal INF."""

    x1: int
    y1: int
    y2: int
    z1: int
    z2: int
    color: int = 0

    def contains(self, p: Sequence[int]) -> bool:
        return self.x1 <= p[0] and self.y1 <= p[1] < self.y2 and self.z1 <= p[2] < self.z2


@dataclass(frozen=True)
class RankSpaceMap:
    """Sorted original keys per axis; rank r maps back to keys[r - 1].

    Keys are non-decreasing: tied coordinates occupy consecutive ranks,
    ordered by input index.
    """

    xkeys: Tuple[Coord, ...]
    ykeys: Tuple[Coord, ...]

    def x_of_rank(self, r: int) -> Coord:
        return self.xkeys[r - 1]

    def y_of_rank(self, r: int) -> Coord:
        return self.ykeys[r - 1]


def _ranks(values: Sequence[Coord]) -> List[int]:
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    ranks = [0] * len(values)
    for r, i in enumerate(order, 1):
        ranks[i] = r
    return ranks


def to_rank_space(points: Sequence[ColoredPoint]) -> Tuple[List[ColoredPoint], RankSpaceMap]:
    """Replace coordinates by ranks 1..n per axis, ties broken by input index."""
    if not points:
        raise DatasetError("empty dataset")
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    rx, ry = _ranks(xs), _ranks(ys)
    out = [ColoredPoint(rx[i], ry[i], p.color) for i, p in enumerate(points)]
    return out, RankSpaceMap(tuple(sorted(xs)), tuple(sorted(ys)))


def map_query(q: QueryRect, m: RankSpaceMap) -> QueryRect:
    """Map an original-coordinate rectangle to the equivalent rank rectangle."""
    a = bisect_left(m.xkeys, q.a) + 1
    b = bisect_right(m.xkeys, q.b)
    c = bisect_left(m.ykeys, q.c) + 1
    d = bisect_right(m.ykeys, q.d)
    return QueryRect(a, b, c, d)


# -- file formats -----------------------------------------------------------

def parse_coord(text: str) -> Coord:
    text = text.strip()
    try:
        v = int(text)
    except ValueError:
        try:
            v = Decimal(text)
        except InvalidOperation:
            raise DatasetError(f"bad coordinate {text!r}") from None
        if not v.is_finite():
            raise DatasetError(f"non-finite coordinate {text!r}")
        if v == v.to_integral_value():
            v = int(v)
    if isinstance(v, int) and not -(1 << 63) <= v < (1 << 63):
        raise DatasetError(f"coordinate {text!r} outside 64-bit range")
    return v


def _data_lines(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_dataset(lines: Iterable[str]) -> List[ColoredPoint]:
    points = []
    for lineno, line in _data_lines(lines):
        fields = line.split(",")
        if len(fields) != 3:
            raise DatasetError(f"line {lineno}: expected x,y,color")
        try:
            color = int(fields[2])
        except ValueError:
            raise DatasetError(f"line {lineno}: bad color {fields[2]!r}") from None
        if color < 1:
            raise DatasetError(f"line {lineno}: color must be a positive integer")
        points.append(ColoredPoint(parse_coord(fields[0]), parse_coord(fields[1]), color))
    return points


def parse_queries(lines: Iterable[str]) -> List[QueryRect]:
    queries = []
    for lineno, line in _data_lines(lines):
        fields = line.split(",")
        if len(fields) != 4:
            raise DatasetError(f"line {lineno}: expected a,b,c,d")
        queries.append(QueryRect(*(parse_coord(f) for f in fields)))
    return queries


def read_dataset(path) -> List[ColoredPoint]:
    with open(path, encoding="utf-8") as fh:
        return parse_dataset(fh)


def read_queries(path) -> List[QueryRect]:
    with open(path, encoding="utf-8") as fh:
        return parse_queries(fh)


def format_dataset(points: Iterable[ColoredPoint]) -> str:
    return "".join(f"{p.x},{p.y},{p.color}\n" for p in points)


def format_queries(queries: Iterable[QueryRect]) -> str:
    return "".join(f"{q.a},{q.b},{q.c},{q.d}\n" for q in queries)


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def ceil_log2(n: int) -> int:
    return max(0, (n - 1).bit_length())


def ceil_log(n: int, base: int) -> int:
    """Smallest h with base**h >= n (0 for n <= 1)."""
    h, cap = 0, 1
    while cap < n:
        cap *= base
        h += 1
    return h


def isqrt_ceil(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1

"""Dataset generation, oracle verification and parameter sweeps."""

from __future__ import annotations

import csv
import io
import itertools
import math
import random
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .framework import FrameworkConfig, FrameworkIndex, resolve_block_size
from .model import ColoredPoint, ParameterError, QueryRect, format_dataset, map_query
from .oracle import oracle_distinct_count

DISTRIBUTIONS = ("uniform", "clustered", "few-colors", "many-colors")


def gen_dataset(n: int, colors: int, distribution: str = "uniform", seed: int = 0) -> List[ColoredPoint]:
    """Integer points on a grid of side 2n (so ties occur), colors in 1..colors.

    uniform     - uniform positions and colors
    clustered   - a few Gaussian clusters, each favouring its own colors
    few-colors  - uniform positions, geometric color frequencies (a handful dominate)
    many-colors - uniform positions, colors dealt round-robin so every color is used evenly
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if colors < 1:
        raise ParameterError("color count must be >= 1")
    if distribution not in DISTRIBUTIONS:
        raise ParameterError(f"unknown distribution {distribution!r}")
    rng = random.Random(f"{seed}:{n}:{colors}:{distribution}")
    side = 2 * n
    pts: List[ColoredPoint] = []
    if distribution == "uniform":
        for _ in range(n):
            pts.append(ColoredPoint(rng.randrange(side), rng.randrange(side), rng.randint(1, colors)))
    elif distribution == "clustered":
        k = max(1, min(n, int(colors ** 0.5) + 1))
        centers = [(rng.uniform(0, side), rng.uniform(0, side)) for _ in range(k)]
        spread = side / (4 * k)
        for _ in range(n):
            ci = rng.randrange(k)
            cx, cy = centers[ci]
            x = min(side - 1, max(0, round(rng.gauss(cx, spread))))
            y = min(side - 1, max(0, round(rng.gauss(cy, spread))))
            if rng.random() < 0.8:
                color = 1 + (ci + k * rng.randrange(max(1, colors // k))) % colors
            else:
                color = rng.randint(1, colors)
            pts.append(ColoredPoint(x, y, color))
    elif distribution == "few-colors":
        for _ in range(n):
            color = 1
            while color < colors and rng.random() < 0.5:
                color += 1
            pts.append(ColoredPoint(rng.randrange(side), rng.randrange(side), color))
    else:
        perm = list(range(1, colors + 1))
        rng.shuffle(perm)
        for i in range(n):
            pts.append(ColoredPoint(rng.randrange(side), rng.randrange(side), perm[i % colors]))
    return pts


def gen_queries(points: Sequence[ColoredPoint], count: int, seed: int = 0) -> List[QueryRect]:
    """Random rectangles over a slightly enlarged bounding box of the points."""
    rng = random.Random(f"q:{seed}:{count}:{len(points)}")
    xs = [p.x for p in points] or [0]
    ys = [p.y for p in points] or [0]
    x0, x1 = min(xs) - 1, max(xs) + 1
    y0, y1 = min(ys) - 1, max(ys) + 1
    out = []
    for _ in range(count):
        a, b = sorted((rng.randint(x0, x1), rng.randint(x0, x1)))
        c, d = sorted((rng.randint(y0, y1), rng.randint(y0, y1)))
        out.append(QueryRect(a, b, c, d))
    return out


def dataset_bytes(points: Sequence[ColoredPoint]) -> bytes:
    return format_dataset(points).encode("utf-8")


@dataclass
class Mismatch:
    query: QueryRect
    got: int
    expected: int
    kind: str = "count"                       # "count" or "repeated-color"
    indices: List[int] = field(default_factory=list)   # minimized dataset indices

    def describe(self, points: Sequence[ColoredPoint]) -> str:
        lines = [f"{self.kind} mismatch on rectangle {tuple(self.query)}: got {self.got}, expected {self.expected}",
                 f"reproduction keeps {len(self.indices)} point(s): indices {self.indices}"]
        lines += [f"  [{i}] {points[i].x},{points[i].y},{points[i].color}" for i in self.indices]
        return "\n".join(lines)


@dataclass
class VerifyReport:
    checked: int
    mismatch: Optional[Mismatch] = None

    @property
    def ok(self) -> bool:
        return self.mismatch is None


IndexFactory = Callable[[Sequence[ColoredPoint], FrameworkConfig], FrameworkIndex]


def _first_failure(index, points, queries, check_contract: bool):
    """(number of queries checked, first mismatch or None)."""
    for k, q in enumerate(queries, 1):
        expected = oracle_distinct_count(points, q)
        got = index.query(q)
        if got != expected:
            return k, Mismatch(q, got, expected)
        if check_contract and hasattr(index, "trace"):
            tr = index.trace(q)
            for side_id, refs in ((2 * tr.node, tr.D), (2 * tr.node + 1, tr.U)):
                side = index.sides.get(side_id)
                for ref in refs:
                    cols = [side.colors[i] for i in side.stab.prefix_box_ids(ref.list_id, ref.length, 0)]
                    if len(set(cols)) != len(cols):
                        return k, Mismatch(q, len(cols) - len(set(cols)), 0, "repeated-color")
    return len(queries), None


def _minimize(points, q, cfg, factory, budget: int = 200) -> List[int]:
    """Greedy chunked removal of points while the query still disagrees with the oracle."""
    keep = list(range(len(points)))

    def fails(idx_list):
        sub = [points[i] for i in idx_list]
        if not sub:
            return False
        try:
            return factory(sub, cfg).query(q) != oracle_distinct_count(sub, q)
        except Exception:
            return True

    chunk = max(1, len(keep) // 2)
    while chunk >= 1 and budget > 0:
        i = 0
        progressed = False
        while i < len(keep) and budget > 0:
            trial = keep[:i] + keep[i + chunk:]
            budget -= 1
            if fails(trial):
                keep = trial
                progressed = True
            else:
                i += chunk
        if not progressed:
            chunk //= 2
    return keep


def verify(points: Sequence[ColoredPoint], queries: Sequence[QueryRect], cfg: FrameworkConfig,
           factory: Optional[IndexFactory] = None, minimize: bool = True,
           check_contract: bool = True) -> VerifyReport:
    """Compare the index with the oracle on every query; stop at the first disagreement."""
    factory = factory or FrameworkIndex
    index = factory(points, cfg)
    checked, bad = _first_failure(index, points, queries, check_contract)
    if bad is None:
        return VerifyReport(checked)
    if minimize and bad.kind == "count":
        bad.indices = _minimize(points, bad.query, cfg, factory)
    else:
        bad.indices = list(range(len(points)))
    return VerifyReport(checked, bad)


# -- sweeps -------------------------------------------------------------------

CSV_COLUMNS = ("backend", "n", "colors", "distribution", "block_size", "X", "arity",
               "build_ms", "median_query_us", "p99_query_us", "index_words",
               "matrix_entries", "dup_factor_max", "mean_prefix_refs")
TIMING_COLUMNS = ("build_ms", "median_query_us", "p99_query_us")


@dataclass
class SweepConfig:
    sizes: List[int] = field(default_factory=lambda: [256])
    colors: List[int] = field(default_factory=lambda: [16])
    distributions: List[str] = field(default_factory=lambda: ["uniform"])
    backends: List[str] = field(default_factory=lambda: ["segseg"])
    block_sizes: List = field(default_factory=lambda: ["sqrt_n_lg_n"])
    arities: List[int] = field(default_factory=lambda: [2])
    queries: int = 200
    repetitions: int = 32
    seed: int = 0
    stride: Optional[int] = None

    def validate(self) -> None:
        for d in self.distributions:
            if d not in DISTRIBUTIONS:
                raise ParameterError(f"unknown distribution {d!r}")
        if self.repetitions < 1 or self.queries < 0:
            raise ParameterError("repetitions must be >= 1 and queries >= 0")
        for n in self.sizes:
            if n < 1:
                raise ParameterError("sizes must be >= 1")
        for x in self.block_sizes:
            resolve_block_size(x, 2)
        for lam in self.arities:
            if lam < 2:
                raise ParameterError("arity must be >= 2")


_LIST_KEYS = {"sizes": int, "colors": int, "distributions": str, "backends": str,
              "block_sizes": None, "arities": int}
_SCALAR_KEYS = {"queries": int, "repetitions": int, "seed": int, "stride": int}


def _scalar(text: str) -> str:
    return text.strip().strip('"').strip("'")


def parse_sweep_config(text: str) -> SweepConfig:
    """key = value lines; lists are comma separated, optionally in [brackets]."""
    cfg = SweepConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and "=" not in line):
            continue   # blank, comment or [section] header
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _LIST_KEYS:
            body = value.strip()
            if body.startswith("[") and body.endswith("]"):
                body = body[1:-1]
            items = [_scalar(t) for t in body.split(",") if t.strip()]
            conv = _LIST_KEYS[key]
            try:
                if conv is None:
                    vals = [int(t) if t.lstrip("-").isdigit() else t for t in items]
                else:
                    vals = [conv(t) for t in items]
            except ValueError:
                raise ParameterError(f"line {lineno}: bad value for {key}") from None
            setattr(cfg, key, vals)
        elif key in _SCALAR_KEYS:
            try:
                setattr(cfg, key, _SCALAR_KEYS[key](_scalar(value)))
            except ValueError:
                raise ParameterError(f"line {lineno}: bad value for {key}") from None
        else:
            raise ParameterError(f"line {lineno}: unknown key {key!r}")
    cfg.validate()
    return cfg


def time_queries(index: FrameworkIndex, queries: Sequence[QueryRect], repetitions: int = 32):
    """Per-query median latency in microseconds over repeated runs, after one warm-up pass."""
    ranked = [map_query(q, index.rank_map) for q in queries]
    qr = index.query_rank
    for r in ranked:
        qr(r)
    clock = time.perf_counter_ns
    samples = [[0] * repetitions for _ in ranked]
    for rep in range(repetitions):
        for i, r in enumerate(ranked):
            t0 = clock()
            qr(r)
            samples[i][rep] = clock() - t0
    return [statistics.median(s) / 1000.0 for s in samples]


def percentile(values: Sequence[float], pct: float) -> float:
    if not values:
        return 0.0
    s = sorted(values)
    k = min(len(s) - 1, max(0, int(round(pct / 100.0 * (len(s) - 1)))))
    return s[k]


def sweep_rows(cfg: SweepConfig):
    """Yield one dict per (backend, n, colors, X, arity, distribution) cell."""
    cfg.validate()
    for backend, n, colors, dist in itertools.product(cfg.backends, cfg.sizes, cfg.colors, cfg.distributions):
        points = gen_dataset(n, colors, dist, cfg.seed)
        queries = gen_queries(points, cfg.queries, cfg.seed)
        arities = cfg.arities if backend == "int2" else cfg.arities[:1]
        for lam in arities:
            t0 = time.perf_counter()
            base = FrameworkIndex(points, FrameworkConfig(backend, 1, lam, cfg.stride), build_matrices=False)
            side_ms = (time.perf_counter() - t0) * 1000.0
            for xs in cfg.block_sizes:
                t0 = time.perf_counter()
                idx = base.with_block_size(xs)
                build_ms = side_ms + (time.perf_counter() - t0) * 1000.0
                lat = time_queries(idx, queries, cfg.repetitions) if queries else []
                refs = [len(t.D) + len(t.U) for t in (idx.trace(q) for q in queries)]
                yield {
                    "backend": backend, "n": n, "colors": colors, "distribution": dist,
                    "block_size": xs, "X": idx.X, "arity": lam if backend == "int2" else "",
                    "build_ms": f"{build_ms:.3f}",
                    "median_query_us": f"{statistics.median(lat):.3f}" if lat else "",
                    "p99_query_us": f"{percentile(lat, 99):.3f}" if lat else "",
                    "index_words": math.ceil(idx.words()),
                    "matrix_entries": idx.matrix_entries(),
                    "dup_factor_max": idx.duplication_factor(),
                    "mean_prefix_refs": f"{statistics.fmean(refs):.4f}" if refs else "",
                }


def sweep(cfg: SweepConfig) -> str:
    """Run the sweep and return the CSV text (header only for an empty grid)."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in sweep_rows(cfg):
        writer.writerow(row)
    return buf.getvalue()

"""Command-line entry point: gen, build, query, verify, sweep.

Exit codes: 0 success, 1 oracle mismatch, 2 bad input or parameters.
"""

from __future__ import annotations

import argparse
import pickle
import sys
from typing import List, Optional

from .bench import DISTRIBUTIONS, gen_dataset, gen_queries, parse_sweep_config, sweep, verify
from .framework import FrameworkConfig, FrameworkIndex
from .model import (DatasetError, ParameterError, format_dataset, format_queries,
                    read_dataset, read_queries, write_text)
from .stabbing import BACKENDS

EXIT_OK, EXIT_MISMATCH, EXIT_BAD_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def _block_size(text: str):
    return int(text) if text.lstrip("-").isdigit() else text


def _add_index_options(p) -> None:
    p.add_argument("--backend", choices=BACKENDS, default="segseg")
    p.add_argument("--block-size", type=_block_size, default="sqrt_n_lg_n",
                   help="integer X or one of sqrt_n_lg_n, sqrt_n_times_lg_n, sqrt_n_lg_n_log_lambda_n, n")
    p.add_argument("--arity", type=int, default=2, help="lambda for the int2 backend")
    p.add_argument("--stride", type=int, default=None, help="RankTree coordinate sampling stride")


def _config(args) -> FrameworkConfig:
    cfg = FrameworkConfig(args.backend, args.block_size, args.arity, args.stride)
    cfg.validate()
    return cfg


def cmd_gen(args) -> int:
    pts = gen_dataset(args.n, args.colors, args.dist, args.seed)
    write_text(args.out, format_dataset(pts))
    if args.queries:
        if not args.queries_out:
            raise ParameterError("--queries needs --queries-out")
        write_text(args.queries_out, format_queries(gen_queries(pts, args.queries, args.seed)))
    return EXIT_OK


def cmd_build(args) -> int:
    idx = FrameworkIndex(read_dataset(args.input), _config(args))
    with open(args.out, "wb") as fh:
        pickle.dump(idx, fh, protocol=pickle.HIGHEST_PROTOCOL)
    print(f"n={idx.n} X={idx.X} backend={idx.cfg.backend} words={idx.words():g} "
          f"matrix_entries={idx.matrix_entries()} dup_factor={idx.duplication_factor()}")
    return EXIT_OK


def cmd_query(args) -> int:
    try:
        with open(args.index, "rb") as fh:
            idx = pickle.load(fh)
    except (pickle.UnpicklingError, EOFError, AttributeError) as exc:
        raise DatasetError(f"cannot load index {args.index}: {exc}") from None
    if not isinstance(idx, FrameworkIndex):
        raise DatasetError(f"{args.index} does not hold an index")
    out = sys.stdout
    for q in read_queries(args.queries):
        out.write(f"{idx.query(q)}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    pts = read_dataset(args.input)
    queries = read_queries(args.queries)
    report = verify(pts, queries, _config(args))
    if report.ok:
        print(f"ok: {report.checked} queries agree with the oracle")
        return EXIT_OK
    print(report.mismatch.describe(pts))
    return EXIT_MISMATCH


def cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = parse_sweep_config(fh.read())
    text = sweep(cfg)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="colorcount", description="Colored orthogonal range counting index")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a random colored dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--dist", choices=DISTRIBUTIONS, default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--queries", type=int, default=0, help="also write this many random rectangles")
    p.add_argument("--queries-out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build an index and save it")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    _add_index_options(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer rectangles with a saved index")
    p.add_argument("--index", required=True)
    p.add_argument("--queries", required=True)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="check an index against the brute-force oracle")
    p.add_argument("--input", required=True)
    p.add_argument("--queries", required=True)
    _add_index_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    p.add_argument("--config", required=True, help="key = value file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

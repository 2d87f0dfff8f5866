"""Command-line entry point: gen, process, query, report.

Exit status is 0 on success, 1 on a usage error and 2 on an I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import MalformedRecord, PlateFormatError
from .matcher import DEFAULT_THRESHOLD, query, report
from .pipeline import ENHANCERS, PipelineConfig, process_many
from .synth import gen_corpus

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="platewatch", description="Find a wanted plate in recorded camera footage.")
    p.add_argument("-v", "--verbose", action="store_true", help="log per-frame diagnostics")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a synthetic corpus with ground truth")
    g.add_argument("--plates", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True)
    g.add_argument("--tier", choices=["mild", "harsh"], default="mild")

    pr = sub.add_parser("process", help="run the pipeline over clip manifests")
    pr.add_argument("--manifest", type=Path, nargs="+", required=True)
    pr.add_argument("--store", type=Path, required=True)
    pr.add_argument("--trace", type=Path)
    pr.add_argument("--enhancer", choices=sorted(ENHANCERS), default="builtin")
    pr.add_argument("--workers", type=int, default=1)

    q = sub.add_parser("query", help="list sightings of a plate")
    q.add_argument("--plate", required=True)
    q.add_argument("--store", type=Path, required=True)
    q.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)

    r = sub.add_parser("report", help="write sightings of a plate as CSV")
    r.add_argument("--store", type=Path, required=True)
    r.add_argument("--plate", required=True)
    r.add_argument("--out", type=Path, required=True)
    r.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    return p


def _run(args: argparse.Namespace) -> int:
    if args.command == "gen":
        if args.plates < 1:
            raise UsageError("gen: --plates must be >= 1")
        entries = gen_corpus(args.plates, args.seed, [args.tier], args.out)
        for e in entries:
            print(f"{e.video_id}\t{e.plate_text}\t{e.manifest}")
        return EXIT_OK

    if args.command == "process":
        if args.workers < 1:
            raise UsageError("process: --workers must be >= 1")
        cfg = PipelineConfig(enhancer=args.enhancer, store=args.store)
        n = process_many(args.manifest, cfg, args.store, args.trace, workers=args.workers)
        print(f"{n} detections written to {args.store}")
        return EXIT_OK

    if args.threshold < 0:
        raise UsageError(f"{args.command}: --threshold must be >= 0")
    try:
        hits = query(args.store, args.plate, args.threshold)
    except PlateFormatError as exc:
        raise UsageError(f"{args.command}: bad plate {args.plate!r}: {exc}") from None
    lines = report(hits)
    if args.command == "query":
        print(f"{len(hits)} matches")
        for line in lines[1:]:
            print(line)
    else:
        args.out.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"{len(hits)} matches written to {args.out}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, MalformedRecord) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # malformed manifests and the like
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

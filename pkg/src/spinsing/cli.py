"""Command-line entry point: ``spinsing analyze <file>``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from .errors import AnalysisError, CapExceeded, SpinSingError
from .reports import parse_request, run_analysis, with_modes

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAP = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinsing", description="Classify spin curve strata from a dual graph.")
    sub = parser.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="analyse a JSON request file ('-' reads stdin)")
    an.add_argument("file")
    an.add_argument("--enumerate-supports", action="store_true", help="analyse every spin support")
    an.add_argument("--classify", action="store_true", help="smooth / canonical / non-canonical verdicts")
    an.add_argument("--audit-degree", action="store_true", help="check the fiber degree 2^(2g)")
    an.add_argument("--oracle", action="store_true", help="cross-check verdicts by explicit group closure")
    an.add_argument("--closure-cap", type=int, metavar="N", help="largest group the oracle may enumerate")
    an.add_argument("--format", choices=("json", "text"))
    return parser


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    modes = [
        m
        for m, on in (
            ("enumerate_supports", args.enumerate_supports),
            ("classify", args.classify),
            ("audit_degree", args.audit_degree),
            ("oracle", args.oracle),
        )
        if on
    ]
    try:
        req = parse_request(_read(args.file))
        req = with_modes(req, modes, args.closure_cap, args.format)
        report = run_analysis(req)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP if isinstance(exc.cause, CapExceeded) else EXIT_INVALID
    except SpinSingError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(report.render(req.options.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

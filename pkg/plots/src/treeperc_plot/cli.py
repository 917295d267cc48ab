"""Command-line entry point: one figure per invocation.

    treeperc-plot --kind curve --input results/curve.csv --out curve.svg
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS
from .schema import SchemaError, read_rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeperc-plot",
        description="Render figures from treeperc result CSVs")
    parser.add_argument("--kind", required=True, choices=sorted(KINDS),
                        help="which figure to draw")
    parser.add_argument("--input", required=True,
                        help="results CSV written by the runner")
    parser.add_argument("--out", required=True,
                        help="output image path (.svg or .png)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows = read_rows(args.input)
        _, fn = KINDS[args.kind]
        fn(rows, args.out)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

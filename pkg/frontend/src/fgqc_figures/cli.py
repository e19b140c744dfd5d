"""fgqc-plot: render fgqc sweep CSVs to SVG figures."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fgqc-plot",
        description="Render fgqc sweep CSVs as fidelity-vs-parameter "
        "figures (SVG by default).",
    )
    parser.add_argument("--figure", choices=sorted(FIGURES), required=True)
    parser.add_argument(
        "--csv", nargs="+", required=True, metavar="PATH",
        help="sweep CSVs; one curve is drawn per (gate, scheme) pair found",
    )
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(args.figure, tuple(args.csv), args.out)
    try:
        render(spec)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

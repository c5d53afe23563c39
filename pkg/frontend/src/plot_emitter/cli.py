"""Command line for rendering summary CSVs: ``plot sweep|region``."""

from __future__ import annotations

import argparse
import sys

from .render import FORMATS, SchemaError, plot_region, plot_sweep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pass-isac-plot",
        description="Render pass-isac summary CSVs into figure files")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="weighted-rate curves")
    p_sweep.add_argument("--in", dest="summary", required=True,
                         help="summary.csv from a sweep experiment")
    p_sweep.add_argument("--out", required=True, help="output image path")
    p_sweep.add_argument("--kind", choices=["sidelength", "elements"],
                         default="sidelength")
    p_sweep.add_argument("--format", choices=list(FORMATS), default="svg")

    p_region = sub.add_parser("region", help="communication/sensing rate region")
    p_region.add_argument("--in", dest="summary", required=True,
                          help="summary.csv from a rate-region experiment")
    p_region.add_argument("--out", required=True, help="output image path")
    p_region.add_argument("--format", choices=list(FORMATS), default="svg")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            out = plot_sweep(args.summary, args.kind, args.out, args.format)
        else:
            out = plot_region(args.summary, args.out, args.format)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

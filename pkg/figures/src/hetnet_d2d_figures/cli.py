"""Command line: one figure per invocation, batch friendly."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hetnet-d2d-figures",
        description="Render a hetnet-d2d experiment CSV into a figure")
    parser.add_argument("figure_id", choices=FIGURE_IDS)
    parser.add_argument("input_csv")
    parser.add_argument("output_image")
    args = parser.parse_args(argv)
    try:
        path = render(FigureSpec(args.figure_id, args.input_csv,
                                 args.output_image))
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Batch figure renderer: `entroledger-figs render --spec fig.toml`."""

from __future__ import annotations

import argparse
import sys

from .errors import FigsError
from .render import render
from .spec import load_spec


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="entroledger-figs",
        description="Render figures from entroledger ledger.csv / sweep.csv files.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure spec")
    p_render.add_argument("--spec", required=True, help="TOML figure spec")

    args = parser.parse_args(argv)
    try:
        out = render(load_spec(args.spec))
    except FigsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

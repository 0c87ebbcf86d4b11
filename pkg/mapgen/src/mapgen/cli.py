"""mapgen command line: depth and label file generation.

Exit codes: 0 success, 2 usage error, 3 input or model failure.
"""

from __future__ import annotations

import argparse
import sys

from . import ModelUnavailable
from .depth import MIDAS_DEFAULT, gen_depth
from .groups import load_groups
from .labels import gen_labels


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mapgen",
                                description="Generate depth / label inputs "
                                            "for the layerpaint engine.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("depth", help="write a 16-bit PGM depth map")
    d.add_argument("image")
    d.add_argument("out_pgm")
    d.add_argument("--backend", choices=["midas", "classical"], default="midas")
    d.add_argument("--model", default=MIDAS_DEFAULT,
                   help=f"torch hub model name (default {MIDAS_DEFAULT})")

    l = sub.add_parser("labels", help="write a label PNG + metadata JSON")
    l.add_argument("image")
    l.add_argument("out_png")
    l.add_argument("out_json")
    l.add_argument("--backend", choices=["detectron2", "classical"],
                   default="detectron2")
    l.add_argument("--groups", default=None,
                   help="JSON file overriding the category->group table")
    l.add_argument("--seed", type=int, default=0,
                   help="clustering seed for the classical backend")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "depth":
            gen_depth(args.image, args.out_pgm, backend=args.backend,
                      model_name=args.model)
        else:
            gen_labels(args.image, args.out_png, args.out_json,
                       backend=args.backend, groups=load_groups(args.groups),
                       seed=args.seed)
    except ModelUnavailable as e:
        print(f"mapgen: model unavailable: {e}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as e:
        print(f"mapgen: error: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

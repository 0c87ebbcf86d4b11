"""Command-line entry point: image + depth + labels -> painting plan.

Runs the full pipeline (load, palette, seed plan, strokes, raster,
optional two-arm schedule) and writes every artifact plus a manifest
recording resolved parameters and input hashes, so a run can be
reproduced byte-for-byte.

Exit codes: 0 success, 2 usage error, 3 input error, 4 output error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__, imagecore, ordering, render, robotplan, segmentation, strokes
from .depth import default_sigma
from .errors import InputError, OutputError
from .palette import build_palette, save_palette


def _parse_pair(text: str, kind: str, cast) -> tuple:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected {kind} as WxH, got {text!r}")
    try:
        return (cast(parts[0]), cast(parts[1]))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad {kind} {text!r}: {e}") from e


def _grid(text: str) -> tuple[int, int]:
    return _parse_pair(text, "grid", int)


def _size_mm(text: str) -> tuple[float, float]:
    return _parse_pair(text, "canvas size", float)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="layerpaint",
        description="Depth-layered stroke painting planner and renderer.")
    p.add_argument("--input", required=True, help="target image (PNG)")
    p.add_argument("--depth", required=True, help="depth map (16-bit P5 PGM)")
    p.add_argument("--depth-convention", choices=list(imagecore.CONVENTIONS),
                   default=imagecore.NEARER_HIGH,
                   help="whether larger depth values are nearer or farther")
    p.add_argument("--labels", required=True, help="label map (16-bit PNG)")
    p.add_argument("--meta", required=True, help="label metadata (JSON)")
    p.add_argument("--strokes", type=int, required=True, help="total stroke count")
    p.add_argument("--colors", type=int, default=None,
                   help="palette size; omit for unrestricted colors")
    p.add_argument("--width", type=int, default=6, help="stroke width in pixels")
    p.add_argument("--bins", type=int, default=8, help="depth histogram bins")
    p.add_argument("--grid", type=_grid, default=(5, 5), metavar="RxC",
                   help="frame sorting grid (default 5x5)")
    p.add_argument("--sigma", type=float, default=None,
                   help="depth smoothing sigma in px (default: diagonal/200)")
    p.add_argument("--snapshots", default="auto",
                   help='comma list of stroke counts, "auto", or "none"')
    p.add_argument("--equal-population", action="store_true",
                   help="quantile depth bins instead of equal-width")
    p.add_argument("--interleave-first-k", type=int, default=0, metavar="K",
                   help="emit the first K depth layers of every thing first")
    p.add_argument("--min-points", type=int, default=2)
    p.add_argument("--max-points", type=int, default=12)
    p.add_argument("--color-tolerance", type=float, default=0.0)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--robot", action="store_true",
                   help="also produce the two-arm drawing schedule")
    p.add_argument("--canvas-mm", type=_size_mm, default=(160.0, 160.0),
                   metavar="WxH", help="physical canvas size (default 160x160)")
    p.add_argument("--margin-mm", type=float, default=5.0)
    p.add_argument("--pen-speed", type=float, default=40.0, help="mm/s")
    p.add_argument("--travel-speed", type=float, default=100.0, help="mm/s")
    p.add_argument("--toolchange-s", type=float, default=15.0)
    p.add_argument("--dump-debug", action="store_true",
                   help="write superpixel maps, seeds, and smoothed depth")
    p.add_argument("--out", required=True, help="output directory")
    return p


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.strokes < 1:
        parser.error("--strokes must be >= 1")
    if args.colors is not None and args.colors < 1:
        parser.error("--colors must be >= 1")
    if args.width < 1:
        parser.error("--width must be >= 1")
    if args.bins < 1:
        parser.error("--bins must be >= 1")
    if args.grid[0] < 1 or args.grid[1] < 1:
        parser.error("--grid must be at least 1x1")
    if args.sigma is not None and args.sigma < 0:
        parser.error("--sigma must be >= 0")
    if args.min_points < 1 or args.max_points < args.min_points:
        parser.error("--min-points/--max-points must satisfy 1 <= min <= max")
    if args.snapshots not in ("auto", "none"):
        try:
            counts = [int(c) for c in args.snapshots.split(",") if c.strip()]
        except ValueError:
            parser.error(f"bad --snapshots list {args.snapshots!r}")
        if any(c < 1 for c in counts):
            parser.error("--snapshots counts must be >= 1")


def _resolve_snapshots(spec: str, n: int) -> list[int]:
    if spec == "none":
        return []
    if spec == "auto":
        return render.default_snapshots(n)
    counts = sorted({int(c) for c in spec.split(",") if c.strip()})
    return counts


def _sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def rebuild_argv(manifest: dict, out_dir: str | Path) -> list[str]:
    """Turn a manifest's recorded parameters back into CLI argv."""
    par = manifest["parameters"]
    argv = [
        "--input", manifest["inputs"]["image"]["path"],
        "--depth", manifest["inputs"]["depth"]["path"],
        "--labels", manifest["inputs"]["labels"]["path"],
        "--meta", manifest["inputs"]["meta"]["path"],
        "--depth-convention", par["depth_convention"],
        "--strokes", str(par["strokes"]),
        "--width", str(par["width"]),
        "--bins", str(par["bins"]),
        "--grid", f"{par['grid'][0]}x{par['grid'][1]}",
        "--sigma", str(par["sigma"]),
        "--snapshots", ",".join(str(c) for c in par["snapshots"]) or "none",
        "--interleave-first-k", str(par["interleave_first_k"]),
        "--min-points", str(par["min_points"]),
        "--max-points", str(par["max_points"]),
        "--color-tolerance", str(par["color_tolerance"]),
        "--rng-seed", str(par["rng_seed"]),
        "--canvas-mm", f"{par['canvas_mm'][0]}x{par['canvas_mm'][1]}",
        "--margin-mm", str(par["margin_mm"]),
        "--pen-speed", str(par["pen_speed"]),
        "--travel-speed", str(par["travel_speed"]),
        "--toolchange-s", str(par["toolchange_s"]),
        "--out", str(out_dir),
    ]
    if par["colors"] is not None:
        argv += ["--colors", str(par["colors"])]
    if par["equal_population"]:
        argv.append("--equal-population")
    if par["robot"]:
        argv.append("--robot")
    return argv


def run(args: argparse.Namespace) -> None:
    image = imagecore.load_image(args.input)
    depth = imagecore.load_depth(args.depth, args.depth_convention)
    seg = imagecore.load_labels(args.labels, args.meta)
    imagecore.validate_consistent(image, depth, seg)

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create output directory {out_dir}: {e}") from e
    if not out_dir.is_dir():
        raise OutputError(f"not a directory: {out_dir}")

    pal = None
    if args.colors is not None:
        pal = build_palette(image, args.colors, rng_seed=args.rng_seed)

    sigma = default_sigma(image) if args.sigma is None else args.sigma
    plan = ordering.layered_depth_plan(
        image, seg, depth, args.strokes, sigma=sigma, bin_count=args.bins,
        grid_dims=args.grid, equal_population=args.equal_population,
        interleave_first_k=args.interleave_first_k)

    params = strokes.StrokeParams(width_px=args.width, min_points=args.min_points,
                                  max_points=args.max_points,
                                  color_tolerance=args.color_tolerance)
    stroke_plan = strokes.generate_all(plan, image, palette=pal, params=params)

    snapshots = _resolve_snapshots(args.snapshots, args.strokes)
    outputs: list[str] = []
    try:
        render.render_plan(stroke_plan, snapshots, out_dir)
        outputs.append("painting.png")
        frame_names = [f"frame{c:04}.png" for c in snapshots
                       if c <= len(stroke_plan.strokes)]
        outputs += frame_names
        if frame_names:
            # frame list for external encoders (ffmpeg and friends)
            (out_dir / "frames.txt").write_text(
                "\n".join(frame_names + ["painting.png"]) + "\n")
            outputs.append("frames.txt")
        strokes.save_stroke_plan(stroke_plan, out_dir / "strokes.jsonl")
        outputs.append("strokes.jsonl")
        ordering.save_seed_plan(plan, out_dir / "seed_plan.json")
        outputs.append("seed_plan.json")
        if pal is not None:
            save_palette(pal, out_dir / "palette.json")
            outputs.append("palette.json")
        if args.robot:
            phys = robotplan.map_to_canvas(stroke_plan, args.canvas_mm, args.margin_mm)
            assignment = robotplan.split_canvas(phys)
            schedule = robotplan.schedule_bimanual(
                assignment, robotplan.Timing(pen_speed_mm_s=args.pen_speed,
                                             travel_speed_mm_s=args.travel_speed,
                                             tool_change_s=args.toolchange_s))
            robotplan.export_plan(schedule, out_dir / "schedule.jsonl")
            outputs.append("schedule.jsonl")
            robotplan.save_split_svg(phys, assignment, out_dir / "split.svg")
            outputs.append("split.svg")
        if args.dump_debug:
            _dump_debug(out_dir, image, seg, depth, args, sigma)
            outputs.append("debug/")
    except OSError as e:
        raise OutputError(f"cannot write into {out_dir}: {e}") from e

    manifest = {
        "tool": "layerpaint",
        "version": __version__,
        "parameters": {
            "depth_convention": args.depth_convention,
            "strokes": args.strokes,
            "colors": args.colors,
            "width": args.width,
            "bins": args.bins,
            "grid": list(args.grid),
            "sigma": sigma,
            "snapshots": snapshots,
            "equal_population": args.equal_population,
            "interleave_first_k": args.interleave_first_k,
            "min_points": args.min_points,
            "max_points": args.max_points,
            "color_tolerance": args.color_tolerance,
            "rng_seed": args.rng_seed,
            "robot": args.robot,
            "canvas_mm": list(args.canvas_mm),
            "margin_mm": args.margin_mm,
            "pen_speed": args.pen_speed,
            "travel_speed": args.travel_speed,
            "toolchange_s": args.toolchange_s,
        },
        "inputs": {
            "image": {"path": str(args.input), "sha256": _sha256(args.input)},
            "depth": {"path": str(args.depth), "sha256": _sha256(args.depth)},
            "labels": {"path": str(args.labels), "sha256": _sha256(args.labels)},
            "meta": {"path": str(args.meta), "sha256": _sha256(args.meta)},
        },
        "outputs": outputs,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _dump_debug(out_dir: Path, image, seg, depth, args, sigma: float) -> None:
    from .depth import smooth_depth

    dbg = out_dir / "debug"
    dbg.mkdir(exist_ok=True)
    imagecore.save_depth(smooth_depth(depth, sigma), dbg / "depth_smoothed.pgm")
    budgets = segmentation.allocate_budgets(seg, image, args.strokes)
    for p in segmentation.order_predictions(seg):
        budget = budgets.get(p.id, 0)
        if budget < 1:
            continue
        mask = seg.mask_of(p.id)
        regions = segmentation.superpixels(image, mask, budget)
        segmentation.save_region_map(regions, dbg / f"superpixels_{p.id:03}.png")
        seeds = segmentation.region_centroids(regions, mask, p.id)
        segmentation.save_seeds(seeds, dbg / f"seeds_{p.id:03}.json")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        run(args)
    except InputError as e:
        print(f"layerpaint: input error: {e}", file=sys.stderr)
        return 3
    except OutputError as e:
        print(f"layerpaint: output error: {e}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

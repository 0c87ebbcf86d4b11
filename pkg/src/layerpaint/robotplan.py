"""Physical-unit stroke plans and the two-arm drawing schedule.

Simulation model
----------------
The canvas is split at its vertical midline; each arm owns one closed
half. Both arms consume the global stroke sequence in order, restricted
to their half, and never wait on each other: pen racks are per arm and
tool-change motions are assumed not to interfere. An arm's timeline is
therefore a serial chain of draw events, tool changes, and travel gaps,
and the makespan is the later of the two finish times.

Strokes whose polyline crosses the midline are cut at the crossing and
each side draws its own piece, so geometry never leaves an arm's half.
A stroke that wiggles across the line more than once contributes one
multi-path draw event per side (pen-up hops between the paths are
charged at travel speed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import OutputError
from .strokes import StrokePlan

ARMS = ("left", "right")

ColorKey = int | tuple[int, int, int]


@dataclass
class Timing:
    # Placeholder speeds for studying schedule shape, not measured values.
    pen_speed_mm_s: float = 40.0
    travel_speed_mm_s: float = 100.0
    tool_change_s: float = 15.0


@dataclass
class PhysicalStroke:
    global_index: int
    color: ColorKey
    points_mm: np.ndarray  # (n, 2) float64


@dataclass
class PhysicalPlan:
    strokes: list[PhysicalStroke]
    canvas_w_mm: float
    canvas_h_mm: float


@dataclass
class ArmStroke:
    """One stroke's share for a single arm: one or more polyline paths."""

    global_index: int
    color: ColorKey
    paths: list[np.ndarray]


@dataclass
class ArmEvent:
    kind: str  # "draw" | "toolchange" | "idle"
    t0: float
    t1: float
    stroke: int | None = None
    color: ColorKey | None = None
    paths: list[np.ndarray] | None = None


@dataclass
class ArmSchedule:
    events: dict[str, list[ArmEvent]]
    makespan: float


def path_length(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    d = np.diff(points, axis=0)
    return float(np.hypot(d[:, 0], d[:, 1]).sum())


def map_to_canvas(plan: StrokePlan, canvas_mm: tuple[float, float],
                  margin_mm: float) -> PhysicalPlan:
    """Scale pixel strokes uniformly into the drawable canvas area.

    The image is centered; along the tighter axis pixel (0, 0) lands at
    the margin. Color keys are palette indices when a palette is active,
    raw RGB triples otherwise.
    """
    cw, ch = float(canvas_mm[0]), float(canvas_mm[1])
    dw = cw - 2.0 * margin_mm
    dh = ch - 2.0 * margin_mm
    if dw <= 0 or dh <= 0:
        raise ValueError("canvas minus margins must be positive")
    iw, ih = plan.canvas_size
    scale = min(dw / iw, dh / ih)
    off_x = (cw - iw * scale) / 2.0
    off_y = (ch - ih * scale) / 2.0
    strokes = []
    for i, s in enumerate(plan.strokes):
        # pixel coordinates address cell centers, hence the half-pixel shift
        pts = (s.points + 0.5) * scale
        pts[:, 0] += off_x
        pts[:, 1] += off_y
        color: ColorKey = s.color_index if s.color_index is not None else s.color
        strokes.append(PhysicalStroke(global_index=i, color=color, points_mm=pts))
    return PhysicalPlan(strokes=strokes, canvas_w_mm=cw, canvas_h_mm=ch)


def _split_at_midline(points: np.ndarray, mid: float) -> list[tuple[int, np.ndarray]]:
    """Cut a polyline at strict midline crossings.

    Returns [(side, piece)] where side is -1 (left), +1 (right), or 0
    (every point exactly on the line). Pieces share their cut points,
    which are placed at exactly x == mid.
    """
    pts = [(float(x), float(y)) for x, y in points]
    pieces: list[tuple[int, list[tuple[float, float]]]] = []
    cur = [pts[0]]
    cur_side = int(np.sign(pts[0][0] - mid))
    for bx, by in pts[1:]:
        sb = int(np.sign(bx - mid))
        if cur_side == 0 or sb == 0 or sb == cur_side:
            cur.append((bx, by))
            if cur_side == 0:
                cur_side = sb
        else:
            ax, ay = cur[-1]
            if ax == mid:
                pieces.append((cur_side, cur))
                cur = [(ax, ay), (bx, by)]
            else:
                t = (mid - ax) / (bx - ax)
                c = (mid, ay + t * (by - ay))
                cur.append(c)
                pieces.append((cur_side, cur))
                cur = [c, (bx, by)]
            cur_side = sb
    pieces.append((cur_side, cur))
    return [(side, np.array(piece, dtype=np.float64)) for side, piece in pieces]


def split_canvas(plan: PhysicalPlan) -> dict[str, list[ArmStroke]]:
    """Assign every stroke (or stroke piece) to the arm owning its half.

    Non-crossing strokes go by the x centroid of their points; a
    centroid exactly on the midline goes right. Crossing strokes are cut
    so each arm receives only geometry inside its closed half.
    """
    mid = plan.canvas_w_mm / 2.0
    out: dict[str, list[ArmStroke]] = {"left": [], "right": []}
    for s in plan.strokes:
        pieces = _split_at_midline(s.points_mm, mid)
        if len(pieces) == 1:
            side = "left" if float(s.points_mm[:, 0].mean()) < mid else "right"
            out[side].append(ArmStroke(s.global_index, s.color, [pieces[0][1]]))
            continue
        for side_name in ARMS:
            want = -1 if side_name == "left" else 1
            paths = [p for sd, p in pieces if sd == want or (sd == 0 and want == 1)]
            if paths:
                out[side_name].append(ArmStroke(s.global_index, s.color, paths))
    return out


def schedule_bimanual(assignment: dict[str, list[ArmStroke]],
                      timing: Timing | None = None) -> ArmSchedule:
    """Simulate both arms consuming their queues in global-index order.

    Per stroke: a tool change when the needed pen differs from the one
    held (the first pen is pre-loaded), a travel gap from the previous
    end position, then the draw event. Arms are independent, so an arm
    is never idle until it runs out of strokes.
    """
    timing = timing or Timing()
    if timing.pen_speed_mm_s <= 0 or timing.travel_speed_mm_s <= 0:
        raise ValueError("speeds must be positive")
    events: dict[str, list[ArmEvent]] = {arm: [] for arm in ARMS}
    finish: dict[str, float] = {}
    for arm in ARMS:
        t = 0.0
        pos: np.ndarray | None = None
        pen: ColorKey | None = None
        for s in assignment.get(arm, []):
            if pen is None:
                pen = s.color
            elif s.color != pen:
                events[arm].append(ArmEvent("toolchange", t, t + timing.tool_change_s,
                                            color=s.color))
                t += timing.tool_change_s
                pen = s.color
            start = s.paths[0][0]
            if pos is not None:
                t += float(np.hypot(start[0] - pos[0], start[1] - pos[1])) \
                    / timing.travel_speed_mm_s
            draw_len = sum(path_length(p) for p in s.paths)
            hop_len = sum(
                float(np.hypot(b[0][0] - a[-1][0], b[0][1] - a[-1][1]))
                for a, b in zip(s.paths, s.paths[1:])
            )
            dur = draw_len / timing.pen_speed_mm_s + hop_len / timing.travel_speed_mm_s
            events[arm].append(ArmEvent("draw", t, t + dur, stroke=s.global_index,
                                        color=s.color, paths=s.paths))
            t += dur
            pos = s.paths[-1][-1]
        finish[arm] = t
    makespan = max(finish.values(), default=0.0)
    for arm in ARMS:
        if finish[arm] < makespan:
            events[arm].append(ArmEvent("idle", finish[arm], makespan))
    return ArmSchedule(events=events, makespan=makespan)


def _color_json(color: ColorKey | None):
    if color is None or isinstance(color, int):
        return color
    return [int(c) for c in color]


def _color_parse(raw) -> ColorKey | None:
    if raw is None or isinstance(raw, int):
        return raw
    return (raw[0], raw[1], raw[2])


def export_plan(schedule: ArmSchedule, path: str | Path) -> None:
    """JSON Lines: one event per line, then a summary record."""
    draw_time = {arm: sum(e.t1 - e.t0 for e in schedule.events[arm] if e.kind == "draw")
                 for arm in ARMS}
    changes = {arm: sum(1 for e in schedule.events[arm] if e.kind == "toolchange")
               for arm in ARMS}
    try:
        with open(path, "w") as fh:
            for arm in ARMS:
                for e in schedule.events[arm]:
                    rec: dict = {"arm": arm, "kind": e.kind, "t0": e.t0, "t1": e.t1}
                    if e.stroke is not None:
                        rec["stroke"] = e.stroke
                    if e.color is not None:
                        rec["color"] = _color_json(e.color)
                    if e.paths is not None:
                        rec["paths"] = [[[float(x), float(y)] for x, y in p]
                                        for p in e.paths]
                    fh.write(json.dumps(rec) + "\n")
            summary = {
                "kind": "summary",
                "makespan": schedule.makespan,
                "utilization": {
                    arm: (draw_time[arm] / schedule.makespan
                          if schedule.makespan > 0 else 0.0)
                    for arm in ARMS
                },
                "toolchanges": changes,
            }
            fh.write(json.dumps(summary) + "\n")
    except OSError as e:
        raise OutputError(f"cannot write schedule {path}: {e}") from e


def import_plan(path: str | Path) -> ArmSchedule:
    events: dict[str, list[ArmEvent]] = {arm: [] for arm in ARMS}
    makespan = 0.0
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            if rec["kind"] == "summary":
                makespan = rec["makespan"]
                continue
            paths = None
            if "paths" in rec:
                paths = [np.array(p, dtype=np.float64) for p in rec["paths"]]
            events[rec["arm"]].append(ArmEvent(
                kind=rec["kind"], t0=rec["t0"], t1=rec["t1"],
                stroke=rec.get("stroke"), color=_color_parse(rec.get("color")),
                paths=paths))
    return ArmSchedule(events=events, makespan=makespan)


def save_split_svg(plan: PhysicalPlan, assignment: dict[str, list[ArmStroke]],
                   path: str | Path) -> None:
    """Visual check: left strokes blue, right strokes red, midline dashed."""
    w, h = plan.canvas_w_mm, plan.canvas_h_mm
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" '
        f'width="{w}mm" height="{h}mm">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="black" '
        f'stroke-width="0.5"/>',
        f'<line x1="{w / 2}" y1="0" x2="{w / 2}" y2="{h}" stroke="gray" '
        f'stroke-width="0.3" stroke-dasharray="2,2"/>',
    ]
    colors = {"left": "#3366cc", "right": "#cc3333"}
    for arm in ARMS:
        for s in assignment.get(arm, []):
            for p in s.paths:
                pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in p)
                lines.append(f'<polyline points="{pts}" fill="none" '
                             f'stroke="{colors[arm]}" stroke-width="0.6"/>')
    lines.append("</svg>")
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as e:
        raise OutputError(f"cannot write SVG {path}: {e}") from e

import numpy as np
import pytest

from layerpaint.robotplan import (
    ARMS,
    ArmStroke,
    PhysicalPlan,
    PhysicalStroke,
    Timing,
    export_plan,
    import_plan,
    map_to_canvas,
    path_length,
    save_split_svg,
    schedule_bimanual,
    split_canvas,
)
from layerpaint.strokes import Stroke, StrokePlan


def stroke(points, color=(0, 0, 0), index=None, width=6):
    return Stroke(points=np.array(points, np.float64), width_px=width,
                  color=color, color_index=index,
                  seed=(int(points[0][0]), int(points[0][1])),
                  frame_index=0, prediction_id=0, bin_index=0)


def phys(points_list, colors=None, canvas=(160.0, 160.0)):
    colors = colors or [0] * len(points_list)
    strokes = [PhysicalStroke(i, c, np.array(p, np.float64))
               for i, (p, c) in enumerate(zip(points_list, colors))]
    return PhysicalPlan(strokes=strokes, canvas_w_mm=canvas[0],
                        canvas_h_mm=canvas[1])


class TestMapToCanvas:
    def test_square_scale(self):
        sp = StrokePlan(strokes=[stroke([(0, 0)], index=0)], canvas_size=(100, 100))
        pp = map_to_canvas(sp, (160, 160), 5)
        # scale = 150/100; pixel centers: (0+0.5)*1.5 + offset 5
        assert pp.strokes[0].points_mm[0] == pytest.approx([5.75, 5.75])

    def test_tall_canvas_centered_vertically(self):
        sp = StrokePlan(strokes=[stroke([(0, 0)], index=0)], canvas_size=(100, 100))
        pp = map_to_canvas(sp, (160, 200), 5)
        x, y = pp.strokes[0].points_mm[0]
        assert x == pytest.approx(5 + 0.5 * 1.5)       # tight axis: at margin
        assert y == pytest.approx(25 + 0.5 * 1.5)      # slack axis: centered

    def test_centered_point_maps_to_center(self):
        sp = StrokePlan(strokes=[stroke([(50, 50)], index=0)], canvas_size=(101, 101))
        pp = map_to_canvas(sp, (160, 160), 5)
        assert pp.strokes[0].points_mm[0] == pytest.approx([80.0, 80.0])

    def test_all_points_inside_canvas(self, small_scene):
        from layerpaint.ordering import layered_depth_plan
        from layerpaint.strokes import generate_all

        plan = layered_depth_plan(small_scene.image, small_scene.seg,
                                  small_scene.depth, 100)
        sp = generate_all(plan, small_scene.image)
        pp = map_to_canvas(sp, (160, 200), 5)
        for s in pp.strokes:
            assert (s.points_mm[:, 0] >= 0).all()
            assert (s.points_mm[:, 0] <= 160).all()
            assert (s.points_mm[:, 1] >= 0).all()
            assert (s.points_mm[:, 1] <= 200).all()

    def test_degenerate_canvas_rejected(self):
        sp = StrokePlan(strokes=[], canvas_size=(10, 10))
        with pytest.raises(ValueError):
            map_to_canvas(sp, (10, 10), 5)


class TestSplitCanvas:
    def test_fully_left(self):
        pp = phys([[(10, 10), (20, 20)]])
        out = split_canvas(pp)
        assert len(out["left"]) == 1 and out["right"] == []

    def test_centroid_on_midline_goes_right(self):
        pp = phys([[(80, 10)]])  # single point exactly on the line
        out = split_canvas(pp)
        assert out["left"] == [] and len(out["right"]) == 1

    def test_single_crossing_splits_and_covers(self):
        pts = [(70.0, 10.0), (90.0, 30.0)]
        pp = phys([pts])
        out = split_canvas(pp)
        assert len(out["left"]) == 1 and len(out["right"]) == 1
        lp = out["left"][0].paths[0]
        rp = out["right"][0].paths[0]
        assert lp[-1][0] == 80.0 and rp[0][0] == 80.0  # cut exactly at midline
        total = path_length(np.array(pts))
        assert path_length(lp) + path_length(rp) == pytest.approx(total)

    def test_double_crossing_multipath(self):
        pts = [(70, 10), (90, 12), (70, 14)]
        pp = phys([pts])
        out = split_canvas(pp)
        left, right = out["left"][0], out["right"][0]
        assert len(left.paths) == 2 and len(right.paths) == 1
        assert left.global_index == right.global_index == 0
        covered = sum(path_length(p) for p in left.paths + right.paths)
        assert covered == pytest.approx(path_length(np.array(pts, float)))

    def test_geometry_respects_halves(self):
        rng = np.random.default_rng(0)
        pts_list = [rng.uniform(0, 160, (rng.integers(1, 10), 2)).tolist()
                    for _ in range(50)]
        out = split_canvas(phys(pts_list))
        for s in out["left"]:
            for p in s.paths:
                assert (np.array(p)[:, 0] <= 80.0).all()
        for s in out["right"]:
            for p in s.paths:
                assert (np.array(p)[:, 0] >= 80.0).all()


class TestSchedule:
    def test_single_stroke_draw_duration(self):
        pp = phys([[(10.0, 10.0), (110.0, 10.0)]])  # 100 mm path, left half? no: x to 110
        out = split_canvas(phys([[(10.0, 10.0), (10.0, 110.0)]],
                                canvas=(160.0, 200.0)))
        sched = schedule_bimanual(out, Timing(pen_speed_mm_s=50.0))
        draws = [e for e in sched.events["left"] if e.kind == "draw"]
        assert len(draws) == 1
        assert draws[0].t0 == 0.0
        assert draws[0].t1 == pytest.approx(2.0)
        assert sched.makespan == pytest.approx(2.0)

    def test_all_on_one_side_leaves_other_idle(self):
        pts = [[(100 + i, 20), (110 + i, 30)] for i in range(5)]
        out = split_canvas(phys(pts))
        sched = schedule_bimanual(out)
        left = sched.events["left"]
        assert len(left) == 1 and left[0].kind == "idle"
        assert left[0].t0 == 0.0 and left[0].t1 == sched.makespan
        right_busy = sched.events["right"][-1].t1
        assert sched.makespan == pytest.approx(right_busy)

    def test_first_pen_free_then_changes_counted(self):
        # four contiguous color blocks on one side: exactly 3 tool changes
        pts, colors = [], []
        for color in range(4):
            for j in range(3):
                y = 10 + color * 30 + j * 5
                pts.append([(20, y), (40, y)])
                colors.append(color)
        out = split_canvas(phys(pts, colors))
        sched = schedule_bimanual(out)
        changes = [e for e in sched.events["left"] if e.kind == "toolchange"]
        assert len(changes) == 3

    def test_symmetric_halves_halve_the_makespan(self):
        # mirrored single-color work on both sides: each arm is the
        # serial schedule of its half, so makespan = serialTotal / 2
        pts = []
        for i in range(6):
            y = 10.0 + 10 * i
            pts.append([(20.0, y), (60.0, y)])
            pts.append([(100.0, y), (140.0, y)])
        sched = schedule_bimanual(split_canvas(phys(pts)))
        finish = {arm: max((e.t1 for e in sched.events[arm]
                            if e.kind != "idle"), default=0.0) for arm in ARMS}
        assert finish["left"] == pytest.approx(finish["right"])
        assert sched.makespan == pytest.approx(sum(finish.values()) / 2)

    def test_makespan_bounds_and_priority(self):
        rng = np.random.default_rng(7)
        pts = [rng.uniform(0, 160, (rng.integers(2, 8), 2)).tolist()
               for _ in range(40)]
        colors = [int(rng.integers(0, 3)) for _ in pts]
        out = split_canvas(phys(pts, colors))
        sched = schedule_bimanual(out)
        busy = {}
        for arm in ARMS:
            evs = [e for e in sched.events[arm] if e.kind != "idle"]
            for a, b in zip(evs, evs[1:]):
                assert b.t0 >= a.t1 - 1e-12
            idx = [e.stroke for e in evs if e.kind == "draw"]
            assert idx == sorted(idx) and len(set(idx)) == len(idx)
            busy[arm] = evs[-1].t1 if evs else 0.0
        serial_total = sum(busy.values())
        assert max(busy.values()) <= sched.makespan + 1e-12
        assert sched.makespan <= serial_total + 1e-12

    def test_empty_schedule(self):
        sched = schedule_bimanual({"left": [], "right": []})
        assert sched.makespan == 0.0
        assert sched.events["left"] == [] and sched.events["right"] == []


class TestExport:
    def test_round_trip_reproduces_file(self, tmp_path):
        rng = np.random.default_rng(3)
        pts = [rng.uniform(0, 160, (4, 2)).tolist() for _ in range(10)]
        colors = [int(rng.integers(0, 2)) for _ in pts]
        sched = schedule_bimanual(split_canvas(phys(pts, colors)))
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        export_plan(sched, p1)
        back = import_plan(p1)
        assert back.makespan == sched.makespan
        export_plan(back, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_rgb_color_keys_round_trip(self, tmp_path):
        # unrestricted mode: pens keyed by raw RGB triples
        pts = [[(20.0, 10.0), (40.0, 10.0)], [(20.0, 30.0), (40.0, 30.0)]]
        colors = [(10, 20, 30), (200, 100, 0)]
        sched = schedule_bimanual(split_canvas(phys(pts, colors)))
        changes = [e for e in sched.events["left"] if e.kind == "toolchange"]
        assert len(changes) == 1
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        export_plan(sched, p1)
        export_plan(import_plan(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_schedule_summary_only(self, tmp_path):
        export_plan(schedule_bimanual({"left": [], "right": []}), tmp_path / "e.jsonl")
        lines = (tmp_path / "e.jsonl").read_text().splitlines()
        assert len(lines) == 1
        import json

        rec = json.loads(lines[0])
        assert rec["kind"] == "summary" and rec["makespan"] == 0.0

    def test_svg_written(self, tmp_path):
        pp = phys([[(10, 10), (150, 20)]])
        save_split_svg(pp, split_canvas(pp), tmp_path / "s.svg")
        text = (tmp_path / "s.svg").read_text()
        assert "<svg" in text and "polyline" in text

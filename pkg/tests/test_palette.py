import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layerpaint.imagecore import Image
from layerpaint.palette import (
    Palette,
    build_palette,
    cluster_colors,
    load_palette,
    quantize,
    save_palette,
)


def image_of(arr):
    return Image.from_array(np.asarray(arr, np.uint8))


def random_image(seed, w=64, h=64):
    rng = np.random.default_rng(seed)
    return image_of(rng.integers(0, 256, (h, w, 3)))


class TestBuildPalette:
    def test_black_white_two_clusters_exact(self):
        pix = np.zeros((10, 10, 3), np.uint8)
        pix[::2] = 255
        pal = build_palette(image_of(pix), 2, rng_seed=0)
        got = {tuple(c) for c in pal.colors}
        assert got == {(0, 0, 0), (255, 255, 255)}

    def test_k1_is_per_channel_mean(self):
        img = random_image(11, w=16, h=16)
        pal = build_palette(img, 1, rng_seed=3)
        mean = img.pixels.reshape(-1, 3).astype(np.float64).mean(axis=0)
        expected = np.floor(mean + 0.5).astype(np.uint8)
        assert len(pal) == 1
        assert np.array_equal(pal.colors[0], expected)

    def test_fewer_distinct_than_k_returns_distinct(self):
        pix = np.zeros((4, 4, 3), np.uint8)
        pix[0, 0] = (1, 2, 3)
        pal = build_palette(image_of(pix), 8, rng_seed=0)
        assert {tuple(c) for c in pal.colors} == {(0, 0, 0), (1, 2, 3)}

    def test_deterministic_for_seed(self):
        img = random_image(5)
        a = build_palette(img, 4, rng_seed=42)
        b = build_palette(img, 4, rng_seed=42)
        assert np.array_equal(a.colors, b.colors)

    def test_colors_distinct(self):
        img = random_image(9)
        pal = build_palette(img, 8, rng_seed=1)
        seen = {tuple(c) for c in pal.colors}
        assert len(seen) == len(pal.colors) <= 8

    def test_large_image_stride_subsample_deterministic(self):
        rng = np.random.default_rng(1)
        pix = rng.integers(0, 256, (1100, 1000, 3)).astype(np.uint8)
        img = image_of(pix)  # 1.1M pixels: stride subsampling kicks in
        a = build_palette(img, 3, rng_seed=0, max_iters=10)
        b = build_palette(img, 3, rng_seed=0, max_iters=10)
        assert np.array_equal(a.colors, b.colors)
        assert 1 <= len(a) <= 3

    def test_bad_args(self):
        img = random_image(0, w=4, h=4)
        with pytest.raises(ValueError):
            build_palette(img, 0)
        with pytest.raises(ValueError):
            build_palette(img, 2, max_iters=0)


class TestSSETrace:
    @pytest.mark.parametrize("k", [2, 4, 8])
    def test_sse_nonincreasing(self, k):
        for seed in range(5):
            img = random_image(seed)
            _, trace = cluster_colors(img.pixels.reshape(-1, 3), k, seed, 50)
            assert len(trace) >= 1
            assert all(a >= b for a, b in zip(trace, trace[1:]))


class TestQuantize:
    PAL = Palette(colors=np.array([[0, 0, 0], [255, 255, 255]], np.uint8), k=2)

    def test_exact_member(self):
        assert quantize((0, 0, 0), self.PAL) == 0

    def test_hand_computed_distances(self):
        # (100,100,100): 3*100^2 = 30000 to black, 3*155^2 = 72075 to white
        assert quantize((100, 100, 100), self.PAL) == 0

    def test_tie_takes_lower_index(self):
        pal = Palette(colors=np.array([[10, 0, 0], [0, 10, 0]], np.uint8), k=2)
        assert quantize((5, 5, 0), pal) == 0

    @given(st.tuples(*[st.integers(0, 255)] * 3),
           st.lists(st.tuples(*[st.integers(0, 255)] * 3), min_size=1, max_size=8))
    @settings(max_examples=60, deadline=None)
    def test_result_is_nearest(self, color, colors):
        pal = Palette(colors=np.array(colors, np.uint8), k=len(colors))
        idx = quantize(color, pal)
        c = np.array(color, np.int64)
        d2 = ((pal.colors.astype(np.int64) - c) ** 2).sum(axis=1)
        assert d2[idx] == d2.min()
        assert idx == int(np.flatnonzero(d2 == d2.min())[0])


class TestPaletteIO:
    def test_json_round_trip(self, tmp_path):
        pal = build_palette(random_image(2), 4, rng_seed=0)
        save_palette(pal, tmp_path / "p.json")
        back = load_palette(tmp_path / "p.json")
        assert np.array_equal(back.colors, pal.colors)

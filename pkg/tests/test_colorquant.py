import colorsys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcreid.colorquant import (
    ACHROMATIC,
    HUE_EDGES,
    MASKED,
    QuantizedColor,
    pack_bins,
    quantize_hsv,
    quantize_hue,
    quantize_hue_array,
    quantize_image,
    quantize_pixel,
    quantize_rgb_array,
    quantize_sat,
    quantize_unit_array,
    quantize_val,
    rgb_to_hsv,
    rgb_to_hsv_array,
    unpack_bins,
    HsvColor,
)
from dcreid.imaging import ForegroundMask, ImageBuffer, full_mask

from conftest import solid

byte = st.integers(0, 255)


def test_black_is_achromatic():
    c = rgb_to_hsv(0, 0, 0)
    assert c.h == ACHROMATIC and c.achromatic
    assert (c.s, c.v) == (0, 0)


def test_red_takes_wraparound_branch_and_folds():
    # r == MAX and g == MIN -> 360 + 60*(0-0)/1 = 360 -> folded to 0
    assert rgb_to_hsv(255, 0, 0) == HsvColor(0.0, 1.0, 1.0)


def test_green_hue():
    assert rgb_to_hsv(0, 255, 0) == HsvColor(120.0, 1.0, 1.0)


def test_grey_is_achromatic_with_zero_saturation():
    c = rgb_to_hsv(128, 128, 128)
    assert c.h == ACHROMATIC and c.s == 0 and c.v == 128 / 255


@pytest.mark.parametrize(
    "h, expected",
    [
        (0, 0), (19.999, 0), (20, 1), (30, 1), (39.999, 1), (40, 2), (74.9, 2), (75, 3),
        (154.9, 3), (155, 4), (189.9, 4), (190, 5), (269.9, 5), (270, 6), (294.9, 6),
        (295, 7), (315.9, 7), (316, 0), (359.999, 0), (ACHROMATIC, 0),
    ],
)
def test_hue_intervals(h, expected):
    assert quantize_hue(h) == expected
    assert quantize_hue_array(np.array([h]))[0] == expected


@pytest.mark.parametrize(
    "x, expected",
    [(0.0, 0), (0.1, 0), (0.2, 0), (0.2000001, 1), (0.5, 1), (0.7, 1), (0.70001, 2), (1.0, 2)],
)
def test_sat_val_intervals(x, expected):
    assert quantize_sat(x) == expected
    assert quantize_val(x) == expected
    assert quantize_unit_array(np.array([x]))[0] == expected


def test_paper_worked_examples():
    assert quantize_pixel(0, 0, 0).c == 0
    assert QuantizedColor.from_bins(7, 2, 2).c == 71
    assert quantize_pixel(255, 0, 0).c == 8
    assert quantize_pixel(255, 0, 0).bins == (0, 2, 2)
    assert quantize_pixel(0, 255, 0).c == 35


def test_pack_is_bijective():
    codes = [pack_bins(h, s, v) for h in range(8) for s in range(3) for v in range(3)]
    assert sorted(codes) == list(range(72))
    for c in range(72):
        assert pack_bins(*unpack_bins(c)) == c
    with pytest.raises(ValueError):
        pack_bins(8, 0, 0)


def test_hue_partition_dense():
    hs = np.concatenate([np.linspace(0, 360, 720001)[:-1], np.array(HUE_EDGES)])
    lows = [316, 20, 40, 75, 155, 190, 270, 295]
    highs = [20, 40, 75, 155, 190, 270, 295, 316]
    for h in hs[::97].tolist() + list(HUE_EDGES):
        hits = [
            b
            for b, (lo, hi) in enumerate(zip(lows, highs))
            if (lo <= h < hi) or (lo > hi and (h >= lo or h < hi))
        ]
        assert len(hits) == 1
        assert quantize_hue(h) == hits[0]
    assert np.array_equal(quantize_hue_array(hs), [quantize_hue(h) for h in hs])


@given(byte, byte, byte)
def test_conversion_ranges(r, g, b):
    c = rgb_to_hsv(r, g, b)
    assert c.h == ACHROMATIC or 0 <= c.h < 360
    assert 0 <= c.s <= 1 and 0 <= c.v <= 1
    assert 0 <= quantize_pixel(r, g, b).c <= 71


@given(byte, byte, byte)
def test_hue_agrees_with_stdlib(r, g, b):
    # independent reference: colorsys uses a different formula for hue
    c = rgb_to_hsv(r, g, b)
    h, s, v = colorsys.rgb_to_hsv(r / 255, g / 255, b / 255)
    assert c.s == pytest.approx(s, abs=1e-12)
    assert c.v == pytest.approx(v, abs=1e-12)
    if c.achromatic:
        assert s == 0
    else:
        diff = abs(c.h - 360 * h) % 360
        assert min(diff, 360 - diff) < 1e-9


HUE_INTERVALS = [(316, 380), (20, 40), (40, 75), (75, 155), (155, 190), (190, 270), (270, 295), (295, 316)]
UNIT_INTERVALS = [(0.0, 0.2), (0.2, 0.7), (0.7, 1.0)]
frac = st.floats(0, 1, exclude_max=True)


def _hue_in(b, t):
    lo, hi = HUE_INTERVALS[b]
    x = min(lo + t * (hi - lo), np.nextafter(hi, lo))  # [lo, hi)
    return x - 360 if x >= 360 else x


def _unit_in(b, t):
    lo, hi = UNIT_INTERVALS[b]
    return max(hi - t * (hi - lo), np.nextafter(lo, hi))  # (lo, hi]


@given(st.integers(0, 7), st.integers(0, 2), st.integers(0, 2), frac, frac, frac, frac, frac, frac)
def test_bin_stability(hb, sb, vb, t1, t2, t3, u1, u2, u3):
    a = HsvColor(_hue_in(hb, t1), _unit_in(sb, t2), _unit_in(vb, t3))
    b = HsvColor(_hue_in(hb, u1), _unit_in(sb, u2), _unit_in(vb, u3))
    assert quantize_hsv(a) == quantize_hsv(b) == QuantizedColor.from_bins(hb, sb, vb)


def test_vector_path_matches_scalar_on_sample(rng):
    rgb = rng.integers(0, 256, size=(20000, 3))
    # add structured cases: greys, ties between channels, primaries
    extra = [(v, v, v) for v in range(256)]
    extra += [(255, v, v) for v in range(256)] + [(v, 255, v) for v in range(256)]
    extra += [(v, v, 0) for v in range(256)] + [(0, v, v) for v in range(256)]
    rgb = np.vstack([rgb, np.array(extra)])
    h, s, v = rgb_to_hsv_array(rgb)
    codes = quantize_rgb_array(rgb)
    for i, (r, g, b) in enumerate(rgb.tolist()):
        c = rgb_to_hsv(r, g, b)
        assert (h[i], s[i], v[i]) == (c.h, c.s, c.v)
        assert codes[i] == quantize_pixel(r, g, b).c


def test_quantize_image():
    assert quantize_image(solid(1, 1, (0, 0, 0)), full_mask(1, 1)).cells.tolist() == [[0]]
    img = ImageBuffer.from_array(np.array([[[255, 0, 0], [0, 0, 0]]], dtype=np.uint8))
    assert quantize_image(img, full_mask(2, 1)).cells.tolist() == [[8, 0]]
    empty = ForegroundMask(2, 1, [False, False])
    assert quantize_image(img, empty).cells.tolist() == [[MASKED, MASKED]]
    partial = ForegroundMask(2, 1, [False, True])
    assert quantize_image(img, partial).cells.tolist() == [[MASKED, 0]]
    with pytest.raises(ValueError):
        quantize_image(img, full_mask(1, 2))

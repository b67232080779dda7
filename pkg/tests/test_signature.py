import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dcreid.colorquant import quantize_image
from dcreid.descriptor import color_histogram
from dcreid.imaging import ForegroundMask, ImageBuffer, resize_nearest
from dcreid.regions import Part
from dcreid.signature import ExtractionParams, build_signature, split_body

from conftest import GREEN, RED, two_block


def test_split_halves():
    assert split_body(128, 0.5) == (range(0, 64), range(64, 128))


def test_split_floor():
    upper, lower = split_body(10, 0.55)
    assert upper.stop == lower.start == 5


def test_split_near_one_keeps_both_parts():
    # floor(0.999 * 2) = 1, so each part gets one row
    assert split_body(2, 0.999) == (range(0, 1), range(1, 2))


@pytest.mark.parametrize("h, tau", [(2, 0.2), (2, 0.4), (1, 0.5), (10, 0.0), (10, 1.0)])
def test_split_degenerate(h, tau):
    with pytest.raises(ValueError):
        split_body(h, tau)


def test_red_over_green():
    sig = build_signature(two_block(upper=RED, lower=GREEN), id="p1")
    assert list(sig.upper_dcds) == [(8, 1.0)]
    assert list(sig.lower_dcds) == [(35, 1.0)]
    assert len(sig.part_regions(Part.UPPER)) == 1
    assert len(sig.part_regions(Part.LOWER)) == 1
    up, low = sig.regions
    assert up.mbr == (0, 0, 48, 64) and (up.center_y, up.mbr_height) == (0.25, 0.5)
    assert low.mbr == (0, 64, 48, 64) and (low.center_y, low.mbr_height) == (0.75, 0.5)
    assert sig.image_size == (48, 128)


def test_image_is_normalized_first():
    small = two_block(12, 32)
    assert build_signature(small, id="a") == build_signature(two_block(), id="a")


def test_determinism():
    img = two_block()
    assert build_signature(img, id="a") == build_signature(img, id="a")


def test_all_background_mask():
    img = two_block()
    sig = build_signature(img, ForegroundMask(48, 128, np.zeros(48 * 128, dtype=bool)), "bg")
    assert len(sig.upper_dcds) == 0 and len(sig.lower_dcds) == 0 and sig.regions == ()


def test_mask_is_resized_with_image():
    img = two_block(24, 64)
    bits = np.zeros((64, 24), dtype=bool)
    bits[:, :12] = True
    sig = build_signature(img, ForegroundMask.from_array(bits), "m")
    assert all(r.x + r.width <= 24 for r in sig.regions)
    assert len(sig.regions) == 2


def test_mask_dimension_mismatch():
    with pytest.raises(ValueError):
        build_signature(two_block(), ForegroundMask(2, 2, np.ones(4, dtype=bool)), "x")


def test_fingerprint_tracks_params():
    a = ExtractionParams()
    assert a.fingerprint() == ExtractionParams().fingerprint()
    assert a.fingerprint() != ExtractionParams(min_area=4).fingerprint()
    assert a.fingerprint() != ExtractionParams(tau=0.55).fingerprint()
    assert ExtractionParams.from_dict(a.to_dict()) == a


@pytest.mark.parametrize(
    "kwargs",
    [dict(tau=1.0), dict(max_colors=0), dict(connectivity=6), dict(min_area=0), dict(norm_width=0),
     dict(norm_height=1)],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        ExtractionParams(**kwargs)


images = arrays(np.uint8, (16, 8, 3), elements=st.sampled_from([0, 60, 128, 200, 255]))


@given(images, st.sampled_from([0.3, 0.5, 0.7]))
@settings(max_examples=40, deadline=None)
def test_signature_invariants(pixels, tau):
    params = ExtractionParams(norm_width=8, norm_height=16, tau=tau, min_area=2)
    img = ImageBuffer.from_array(pixels)
    sig = build_signature(img, None, "s", params)
    for r in sig.regions:
        assert r.color in sig.dcds(r.part).colors
        assert 0 <= r.x and r.x + r.width <= 8 and 0 <= r.y and r.y + r.height <= 16
    upper, lower = split_body(16, tau)
    for r in sig.part_regions(Part.UPPER):
        assert r.y + r.height <= upper.stop
    for r in sig.part_regions(Part.LOWER):
        assert r.y >= lower.start
    # parts partition the pixels
    q = quantize_image(resize_nearest(img, 8, 16))
    assert color_histogram(q, upper).pixel_count + color_histogram(q, lower).pixel_count == 128

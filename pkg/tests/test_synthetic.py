import numpy as np
import pytest

from dcreid import synthetic
from dcreid.colorquant import quantize_rgb_array


def test_identities_are_distinct():
    ids = synthetic.make_identities(200, seed=1)
    pairs = {(i.upper.color, i.lower.color) for i in ids}
    assert len(pairs) == 200
    assert all(i.upper != i.lower for i in ids)
    with pytest.raises(ValueError):
        synthetic.make_identities(10_000)


@pytest.mark.parametrize("shift", [-synthetic.MAX_SHIFT, 0, synthetic.MAX_SHIFT])
def test_garment_pixels_stay_in_their_bins(shift):
    rng = np.random.default_rng(0)
    for ident in synthetic.make_identities(40, seed=2):
        img = synthetic.render(ident, rng, shift=shift)
        codes = quantize_rgb_array(img.pixels)
        x0 = synthetic.BAND_X + shift
        band = codes[:, x0 : x0 + synthetic.BAND_WIDTH]
        assert (band[: synthetic.HEIGHT // 2] == ident.upper.color).all()
        assert (band[synthetic.HEIGHT // 2 :] == ident.lower.color).all()
        background = np.delete(codes, np.s_[x0 : x0 + synthetic.BAND_WIDTH], axis=1)
        assert (background == background[0, 0]).all()
        assert background[0, 0] not in (ident.upper.color, ident.lower.color)


def test_cross_fraction_flips_value_bin():
    rng = np.random.default_rng(0)
    ident = synthetic.make_identities(1, seed=3)[0]
    img = synthetic.render(ident, rng, shift=0, cross_fraction=0.2)
    band = quantize_rgb_array(img.pixels)[: synthetic.HEIGHT // 2, synthetic.BAND_X : synthetic.BAND_X + synthetic.BAND_WIDTH]
    off = (band != ident.upper.color).mean()
    assert 0.1 < off < 0.3
    # flipped pixels differ from the garment only in the value bin
    flipped = set(np.unique(band[band != ident.upper.color]).tolist())
    assert flipped == {ident.upper.color - ident.upper.val_bin + (3 - ident.upper.val_bin)}


def test_shift_bounds():
    ident = synthetic.make_identities(1)[0]
    with pytest.raises(ValueError):
        synthetic.render(ident, np.random.default_rng(0), shift=synthetic.MAX_SHIFT + 2)

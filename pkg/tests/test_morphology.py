import numpy as np
import pytest
from scipy import ndimage

from shapesuite.morphology.profile import (closing_by_reconstruction, dilate_square, dmp, erode_square,
                                           multiscale_characteristic, opening_by_reconstruction,
                                           profile_scales, reconstruct_by_dilation, reconstruct_by_erosion,
                                           segment_average_characteristic)


def _window_filter(img, half_size, reduce):
    rows, cols = img.shape
    out = np.empty_like(img)
    for r in range(rows):
        for c in range(cols):
            window = img[max(r - half_size, 0):r + half_size + 1, max(c - half_size, 0):c + half_size + 1]
            out[r, c] = reduce(window)
    return out


def _fixpoint_dilation(marker, mask):
    out = marker.copy()
    while True:
        grown = np.minimum(ndimage.grey_dilation(out, size=(3, 3), mode='nearest'), mask)
        if np.array_equal(grown, out):
            return out
        out = grown


def _square_image(side, bright=True, size=41, background=50, foreground=200):
    img = np.full((size, size), background if bright else foreground, dtype=np.int64)
    top = (size - side) // 2
    img[top:top + side, top:top + side] = foreground if bright else background
    mask = np.zeros(img.shape, dtype=bool)
    mask[top:top + side, top:top + side] = True
    return img, mask


@pytest.mark.parametrize('half_size', [0, 1, 2, 4])
def test_erode_dilate_match_window_filter(rng, half_size):
    img = rng.integers(0, 256, size=(17, 13))
    np.testing.assert_array_equal(erode_square(img, half_size), _window_filter(img, half_size, np.min))
    np.testing.assert_array_equal(dilate_square(img, half_size), _window_filter(img, half_size, np.max))


def test_erode_rejects_bad_input():
    with pytest.raises(ValueError):
        erode_square(np.zeros((3, 3), dtype=np.int64), -1)
    with pytest.raises(TypeError):
        erode_square(np.zeros((3, 3), dtype=np.float64), 1)
    with pytest.raises(ValueError):
        dilate_square(np.zeros(3, dtype=np.int64), 1)


def test_reconstruction_matches_fixpoint():
    rng = np.random.default_rng(31)
    for _ in range(100):
        mask = rng.integers(0, 64, size=(32, 32))
        marker = mask - rng.integers(0, 64, size=(32, 32))
        marker = np.maximum(marker, mask.min())
        np.testing.assert_array_equal(reconstruct_by_dilation(marker, mask), _fixpoint_dilation(marker, mask))


def test_reconstruction_with_negative_values(rng):
    mask = rng.integers(-40, 40, size=(12, 12))
    marker = mask - rng.integers(0, 30, size=(12, 12))
    np.testing.assert_array_equal(reconstruct_by_dilation(marker, mask), _fixpoint_dilation(marker, mask))


def test_reconstruction_rejects_marker_above_mask():
    mask = np.zeros((4, 4), dtype=np.int64)
    marker = mask.copy()
    marker[1, 1] = 1
    with pytest.raises(ValueError):
        reconstruct_by_dilation(marker, mask)
    with pytest.raises(ValueError):
        reconstruct_by_dilation(mask[:3], mask)
    with pytest.raises(ValueError):
        reconstruct_by_erosion(mask - 1, mask)


def test_erosion_reconstruction_is_dual(rng):
    for _ in range(20):
        mask = rng.integers(0, 100, size=(20, 20))
        marker = mask + rng.integers(0, 50, size=(20, 20))
        expected = 255 - reconstruct_by_dilation(255 - marker, 255 - mask)
        np.testing.assert_array_equal(reconstruct_by_erosion(marker, mask), expected)


def test_opening_and_closing_bracket_image(rng):
    img = rng.integers(0, 256, size=(24, 24))
    for scale in (3, 5, 9):
        opened = opening_by_reconstruction(img, scale)
        closed = closing_by_reconstruction(img, scale)
        assert (opened <= img).all()
        assert (closed >= img).all()
        np.testing.assert_array_equal(opening_by_reconstruction(opened, scale), opened)


def test_profile_scales():
    assert profile_scales(1) == (0, 1)
    assert profile_scales(4) == (0, 1, 3, 5, 9)
    assert profile_scales(5) == (0, 1, 3, 5, 9, 17)
    with pytest.raises(ValueError):
        profile_scales(0)


def test_dmp_shapes(rng):
    img = rng.integers(0, 256, size=(10, 12))
    stack = dmp(img, 3)
    assert stack.opening.shape == (4, 10, 12)
    assert stack.d_open_num.shape == (3, 10, 12)
    np.testing.assert_array_equal(stack.gaps, [1, 2, 2])
    assert (stack.d_open_num >= 0).all()
    np.testing.assert_array_equal(stack.opening[0], img)


@pytest.mark.parametrize('side,expected', [(3, 5), (5, 9), (9, 17)])
def test_bright_square_characteristic(side, expected):
    img, mask = _square_image(side)
    cmap = multiscale_characteristic(dmp(img, 5))
    assert (cmap.values[mask] == expected).all()
    assert (cmap.values[~mask] == 0).all()
    assert segment_average_characteristic(cmap, mask) == expected
    assert not cmap.mixed_sign(mask)


@pytest.mark.parametrize('side,expected', [(3, 5), (5, 9)])
def test_dark_square_characteristic(side, expected):
    img, mask = _square_image(side, bright=False)
    cmap = multiscale_characteristic(dmp(img, 5))
    assert (cmap.values[mask] == -expected).all()
    assert segment_average_characteristic(cmap, mask) == expected


def test_flat_image_has_zero_characteristic():
    cmap = multiscale_characteristic(dmp(np.full((9, 9), 7, dtype=np.int64), 4))
    assert (cmap.values == 0).all()


def test_mixed_sign_region():
    img, _ = _square_image(3, size=21)
    img[2:5, 2:5] = 0
    cmap = multiscale_characteristic(dmp(img, 4))
    whole = np.ones(img.shape, dtype=bool)
    assert cmap.mixed_sign(whole)
    with pytest.raises(ValueError):
        cmap.segment_average(np.ones((3, 3), dtype=bool))
    with pytest.raises(ValueError):
        cmap.segment_average(np.zeros(img.shape, dtype=bool))

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from blockmark.attacks import (
    brightness_shift,
    dct_quantize,
    gaussian_noise,
    mean_filter,
    median_filter,
    quant_table,
    salt_pepper,
)
from blockmark.metrics import psnr
from blockmark.model import GrayImage

small_images = arrays(np.uint8, st.tuples(st.integers(1, 9), st.integers(1, 9))).map(GrayImage)


def _window(img, r, c, k):
    h = k // 2
    return img.pixels[max(r - h, 0):r + h + 1, max(c - h, 0):c + h + 1].astype(int).reshape(-1)


@settings(max_examples=60)
@given(small_images, st.sampled_from([1, 3, 5]))
def test_mean_filter_matches_brute_force(img, k):
    out = mean_filter(img, k)
    for r in range(img.height):
        for c in range(img.width):
            w = _window(img, r, c, k)
            assert out.pixels[r, c] == math.floor(sum(w) / len(w) + 0.5)


@settings(max_examples=60)
@given(small_images, st.sampled_from([1, 3, 5]))
def test_median_filter_matches_brute_force(img, k):
    out = median_filter(img, k)
    for r in range(img.height):
        for c in range(img.width):
            w = sorted(_window(img, r, c, k))
            assert out.pixels[r, c] == w[(len(w) - 1) // 2]


def test_filter_examples():
    ramp = GrayImage(np.arange(9).reshape(3, 3))
    assert mean_filter(ramp, 3).pixels[1, 1] == 4
    sp = GrayImage(np.array([[0, 0, 0], [0, 255, 255], [255, 255, 255]]))
    assert median_filter(sp, 3).pixels[1, 1] == 255
    flat = GrayImage(np.full((6, 7), 77))
    for k in (1, 3, 5):
        assert mean_filter(flat, k) == flat
        assert median_filter(flat, k) == flat
    with pytest.raises(ValueError):
        mean_filter(flat, 2)
    with pytest.raises(ValueError):
        median_filter(flat, 4)


@given(small_images)
def test_window_one_is_identity(img):
    assert mean_filter(img, 1) == img
    assert median_filter(img, 1) == img


def test_gaussian_noise(host):
    assert gaussian_noise(host, 0, 5) == host
    a = gaussian_noise(host, 2, 11)
    assert a == gaussian_noise(host, 2, 11)
    assert a != gaussian_noise(host, 2, 12)
    diff = a.pixels.astype(float) - host.pixels
    assert 1.9 <= diff.std() <= 2.1
    with pytest.raises(ValueError):
        gaussian_noise(host, -1, 0)


def test_gaussian_noise_first_pixel_by_hand():
    from oracles import splitmix_stream
    stream = splitmix_stream(99)
    total = sum(next(stream) % (1 << 32) for _ in range(12))
    x = 3.0 * (total - 6 * (1 << 32)) / (1 << 32)
    noise = int(math.copysign(math.floor(abs(x) + 0.5), x))
    out = gaussian_noise(GrayImage(np.array([[128]])), 3.0, 99)
    assert out.pixels[0, 0] == 128 + noise


def test_salt_pepper(host):
    assert salt_pepper(host, 0, 1) == host
    assert set(np.unique(salt_pepper(host, 1, 1).pixels)) <= {0, 255}
    hit = np.count_nonzero(salt_pepper(host, 0.05, 3).pixels != host.pixels)
    n = host.pixels.size
    assert abs(hit - n * 0.05) <= 4 * math.sqrt(n * 0.05 * 0.95)
    assert salt_pepper(host, 0.05, 3) == salt_pepper(host, 0.05, 3)
    with pytest.raises(ValueError):
        salt_pepper(host, 1.5, 0)


def test_brightness_shift(host):
    assert brightness_shift(host, 0) == host
    assert not brightness_shift(host, -300).pixels.any()
    assert (brightness_shift(host, 300).pixels == 255).all()


def test_quant_table_scaling():
    assert (quant_table(100) == 1).all()
    assert quant_table(50)[0, 0] == 16
    assert quant_table(10)[0, 0] == 80
    with pytest.raises(ValueError):
        quant_table(0)


def _dct_matrix():
    c = np.array([[math.sqrt((1 if u == 0 else 2) / 8) * math.cos((2 * x + 1) * u * math.pi / 16)
                   for x in range(8)] for u in range(8)])
    return c


def _dct_quantize_reference(pixels, quality):
    """Explicit cosine-basis version, one block at a time.

    Also returns a per-pixel mask of blocks where some coefficient quotient
    sits within 1e-6 of a rounding tie; there the two float routes may
    legitimately round a whole quantization step apart.
    """
    def round_half_away(x):
        return np.sign(x) * np.floor(np.abs(x) + 0.5)

    c = _dct_matrix()
    q = quant_table(quality)
    out = np.empty_like(pixels, dtype=float)
    ambiguous = np.zeros(pixels.shape, dtype=bool)
    for r in range(0, pixels.shape[0], 8):
        for s in range(0, pixels.shape[1], 8):
            block = pixels[r:r + 8, s:s + 8].astype(float) - 128
            ratio = (c @ block @ c.T) / q
            frac = np.abs(ratio) % 1
            ambiguous[r:r + 8, s:s + 8] = (np.abs(frac - 0.5) < 1e-6).any()
            out[r:r + 8, s:s + 8] = c.T @ (round_half_away(ratio) * q) @ c + 128
    return np.clip(round_half_away(out), 0, 255), ambiguous


@settings(max_examples=50, deadline=None)
@given(arrays(np.uint8, (16, 24)), st.sampled_from([10, 50, 75, 90, 100]))
def test_dct_quantize_matches_reference_within_one(pixels, quality):
    got = dct_quantize(GrayImage(pixels), quality).pixels.astype(int)
    expected, ambiguous = _dct_quantize_reference(pixels, quality)
    assert np.abs(got - expected)[~ambiguous].max(initial=0) <= 1


def test_dct_quantize_matches_reference_on_smooth_host(host):
    pixels = host.pixels[:64, :64]
    for quality in (10, 50, 90):
        got = dct_quantize(GrayImage(pixels), quality).pixels.astype(int)
        expected, ambiguous = _dct_quantize_reference(pixels, quality)
        assert ambiguous.mean() < 0.5
        assert np.abs(got - expected)[~ambiguous].max(initial=0) <= 1


def test_dct_quantize_properties(host, watermarked):
    flat = GrayImage(np.full((16, 16), 93))
    assert dct_quantize(flat, 100) == flat
    once = dct_quantize(host, 100)
    twice = dct_quantize(once, 100)
    assert np.abs(once.pixels.astype(int) - twice.pixels).max() <= 1
    assert psnr(watermarked, dct_quantize(watermarked, 10)) < psnr(watermarked, dct_quantize(watermarked, 90))
    with pytest.raises(ValueError):
        dct_quantize(GrayImage(np.zeros((12, 16))), 50)


@settings(max_examples=30, deadline=None)
@given(arrays(np.uint8, (16, 16)), st.integers(0, 2**64 - 1))
def test_attacks_preserve_shape_and_range(pixels, seed):
    img = GrayImage(pixels)
    outs = [gaussian_noise(img, 8, seed), salt_pepper(img, 0.1, seed), mean_filter(img, 3),
            median_filter(img, 5), brightness_shift(img, 40), dct_quantize(img, 30)]
    for out in outs:
        assert out.shape == img.shape and out.pixels.dtype == np.uint8

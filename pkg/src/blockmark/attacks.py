"""Simulated signal-processing attacks on grayscale images.

Randomised attacks draw from a single SplitMix64 stream in row-major pixel
order, so results are reproducible from the seed alone.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import dctn, idctn

from .keys import splitmix64_outputs
from .model import GrayImage, from_blocks, to_blocks

_TWO32 = float(1 << 32)

# JPEG Annex K luminance table
LUMA_QUANT = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.int64)


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def _to_image(values: np.ndarray) -> GrayImage:
    return GrayImage(np.clip(values, 0, 255).astype(np.uint8))


def gaussian_noise(img: GrayImage, sigma: float, seed: int) -> GrayImage:
    """Additive approximately-normal noise: ``sigma * (sum of 12 uniforms - 6)`` per pixel."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    count = img.pixels.size
    steps = np.arange(12 * count, dtype=np.uint64).reshape(count, 12)
    u = (splitmix64_outputs(seed, steps) & np.uint64(0xFFFFFFFF)).astype(np.int64)
    centred = (u.sum(axis=1) - 6 * (1 << 32)) / _TWO32
    noise = _round_half_away(sigma * centred).reshape(img.shape)
    return _to_image(img.pixels.astype(np.int64) + noise.astype(np.int64))


def salt_pepper(img: GrayImage, p: float, seed: int) -> GrayImage:
    """Replace each pixel by 0 or 255 with probability ``p``.

    Every pixel consumes two draws: the first decides corruption, the second
    picks black (even) or white (odd).
    """
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    count = img.pixels.size
    draws = splitmix64_outputs(seed, np.arange(2 * count, dtype=np.uint64)).reshape(count, 2)
    u = (draws[:, 0] & np.uint64(0xFFFFFFFF)).astype(np.float64) / _TWO32
    hit = (u < p).reshape(img.shape)
    colour = np.where((draws[:, 1] & np.uint64(1)) == 1, 255, 0).reshape(img.shape)
    return GrayImage(np.where(hit, colour, img.pixels).astype(np.uint8))


def _check_window(k: int) -> None:
    if k < 1 or k % 2 == 0:
        raise ValueError(f"window size must be a positive odd integer, got {k}")


def mean_filter(img: GrayImage, k: int) -> GrayImage:
    """k x k box filter; windows are clipped at the border and the in-bounds
    mean is rounded half up."""
    _check_window(k)
    h, w = img.shape
    r = k // 2
    integral = np.zeros((h + 1, w + 1), dtype=np.int64)
    integral[1:, 1:] = img.pixels.astype(np.int64).cumsum(0).cumsum(1)
    rows, cols = np.arange(h), np.arange(w)
    top, bottom = np.maximum(rows - r, 0), np.minimum(rows + r + 1, h)
    left, right = np.maximum(cols - r, 0), np.minimum(cols + r + 1, w)
    total = (integral[bottom][:, right] - integral[top][:, right]
             - integral[bottom][:, left] + integral[top][:, left])
    count = np.outer(bottom - top, right - left)
    return GrayImage(((2 * total + count) // (2 * count)).astype(np.uint8))


def median_filter(img: GrayImage, k: int) -> GrayImage:
    """k x k median; clipped windows at the border use the lower median."""
    _check_window(k)
    r = k // 2
    # out-of-bounds cells sort past every real intensity
    padded = np.pad(img.pixels.astype(np.int16), r, constant_values=1 << 10)
    windows = np.sort(sliding_window_view(padded, (k, k)).reshape(*img.shape, k * k), axis=-1)
    valid = (windows < (1 << 10)).sum(axis=-1)
    idx = (valid - 1) // 2
    return GrayImage(np.take_along_axis(windows, idx[..., None], axis=-1)[..., 0].astype(np.uint8))


def brightness_shift(img: GrayImage, offset: int) -> GrayImage:
    return _to_image(img.pixels.astype(np.int64) + int(offset))


def quant_table(quality: int) -> np.ndarray:
    """Annex K luminance table scaled with the usual IJG quality mapping."""
    if not 1 <= quality <= 100:
        raise ValueError("quality must be in [1, 100]")
    scale = 5000 // quality if quality < 50 else 200 - 2 * quality
    return np.clip((LUMA_QUANT * scale + 50) // 100, 1, 255)


def dct_quantize(img: GrayImage, quality: int) -> GrayImage:
    """JPEG-style lossy round trip on 8x8 blocks, without entropy coding."""
    h, w = img.shape
    if h % 8 or w % 8:
        raise ValueError("image dimensions must be divisible by 8")
    q = quant_table(quality).astype(np.float64)
    blocks = to_blocks(img.pixels, 8).astype(np.float64).reshape(-1, 8, 8) - 128.0
    coeffs = dctn(blocks, type=2, norm="ortho", axes=(1, 2))
    coeffs = _round_half_away(coeffs / q) * q
    spatial = idctn(coeffs, type=2, norm="ortho", axes=(1, 2)) + 128.0
    pixels = from_blocks(_round_half_away(spatial).reshape(-1, 64), 8, w, h)
    return _to_image(pixels)

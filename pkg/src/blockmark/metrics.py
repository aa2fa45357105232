"""Image fidelity and watermark recovery metrics."""

from __future__ import annotations

import math

import numpy as np

from .model import BitMatrix, GrayImage

PEAK = 255


class UndefinedCorrelation(ValueError):
    """Raised when a correlation input has zero variance."""


def _same_shape(a, b) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def squared_error(a: GrayImage, b: GrayImage) -> int:
    """Exact integer sum of squared intensity differences."""
    _same_shape(a, b)
    d = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    return int((d * d).sum())


def mse(a: GrayImage, b: GrayImage) -> float:
    return squared_error(a, b) / a.pixels.size


def psnr(a: GrayImage, b: GrayImage) -> float:
    """PSNR in dB with peak 255; ``math.inf`` for identical images."""
    err = squared_error(a, b)
    if err == 0:
        return math.inf
    return 10 * math.log10(PEAK * PEAK * a.pixels.size / err)


def ber(recovered: BitMatrix, original: BitMatrix) -> float:
    _same_shape(recovered, original)
    return int(np.count_nonzero(recovered.bits != original.bits)) / recovered.bits.size


def ncc(recovered: BitMatrix, original: BitMatrix) -> float:
    """Pearson correlation of the two bit sequences."""
    _same_shape(recovered, original)
    x = recovered.bits.reshape(-1).astype(np.int64)
    y = original.bits.reshape(-1).astype(np.int64)
    n = x.size
    sx, sy = int(x.sum()), int(y.sum())
    # for 0/1 data sum(x*x) == sum(x)
    var_x = n * sx - sx * sx
    var_y = n * sy - sy * sy
    if var_x == 0 or var_y == 0:
        raise UndefinedCorrelation("correlation undefined for a constant bit matrix")
    cov = n * int((x * y).sum()) - sx * sy
    return cov / math.sqrt(var_x * var_y)

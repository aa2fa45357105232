"""Canonical test configuration: a saturation-free gradient host and a checkerboard mark."""

from __future__ import annotations

import numpy as np

from .keys import KeyFile
from .model import BitMatrix, GrayImage


def gradient_host(width: int = 512, height: int = 512) -> GrayImage:
    """``pixel(x, y) = ((x + 2y) mod 251) + 2``, intensities in 2..252."""
    y, x = np.mgrid[0:height, 0:width]
    return GrayImage(((x + 2 * y) % 251 + 2).astype(np.uint8))


def checkerboard_mark(width: int = 128, height: int = 128, cell: int = 8) -> BitMatrix:
    y, x = np.mgrid[0:height, 0:width]
    return BitMatrix(((x // cell + y // cell) % 2).astype(np.uint8))


def canonical_key() -> KeyFile:
    return KeyFile(512, 512, 128, 128, block_size=4, alpha_num=1, alpha_den=10, c_min=2,
                   perm_seed=1, scramble_seed=2, delta_seed=3)

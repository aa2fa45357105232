"""Non-blind extraction by comparing block sums against the original host."""

from __future__ import annotations

import numpy as np

from .embed import check_dimensions
from .keys import KeyFile, descramble_bits, fisher_yates
from .model import BitMatrix, GrayImage, to_blocks


def decode_block(orig_block, wm_block) -> int:
    """1 if the watermarked block sum exceeds the original's, else 0 (ties read 0)."""
    orig = np.asarray(orig_block)
    wm = np.asarray(wm_block)
    if orig.shape != wm.shape:
        raise ValueError(f"block shapes differ: {orig.shape} vs {wm.shape}")
    return int(int(wm.astype(np.int64).sum()) > int(orig.astype(np.int64).sum()))


def decode_blocks(host: GrayImage, watermarked: GrayImage, block_size: int) -> np.ndarray:
    """Raw decoded bit of every block, in row-major block order."""
    so = to_blocks(host.pixels, block_size).astype(np.int64).sum(axis=1)
    sw = to_blocks(watermarked.pixels, block_size).astype(np.int64).sum(axis=1)
    return (sw > so).astype(np.uint8)


def extract(host: GrayImage, watermarked: GrayImage, key: KeyFile) -> BitMatrix:
    """Recover the mark from ``watermarked`` using the original ``host`` and ``key``.

    Returns an all-zero matrix when the two images agree block for block;
    deciding whether that means "no watermark" is left to the caller.
    """
    check_dimensions(key, host)
    check_dimensions(key, watermarked)
    raw = decode_blocks(host, watermarked, key.block_size)
    perm = fisher_yates(key.num_blocks, key.perm_seed)
    bits = descramble_bits(raw[perm], key.scramble_seed)
    return BitMatrix(bits.reshape(key.mark_height, key.mark_width))

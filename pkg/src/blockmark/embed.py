"""Contrast-adaptive block embedding.

Each host block carries one watermark bit. Pixels are split around the
block mean into a low and a high class; depending on the bit, pixels are
pulled to the block extreme, snapped to the block mean, or nudged by a
random offset ``delta`` in ``[1, contrast]``. The net effect raises the
block sum for a 1 and lowers it for a 0, which is what extraction reads.
"""

from __future__ import annotations

import numpy as np

from .keys import (
    KeyFile,
    SplitMix64,
    block_delta_seeds,
    fisher_yates,
    scramble_bits,
    splitmix64_outputs,
)
from .model import BitMatrix, BlockStats, GrayImage, from_blocks, to_blocks


def round_half_up(num: int, den: int) -> int:
    """``floor(num / den + 1/2)`` for non-negative ``num`` and positive ``den``."""
    return (2 * num + den) // (2 * den)


def _high_mean(stats: BlockStats) -> tuple[int, int]:
    if stats.count_high == 0:
        return stats.sum, stats.count
    return stats.sum_high, stats.count_high


def embed_bit_in_block(block, bit: int, stats: BlockStats, delta_stream: SplitMix64) -> np.ndarray:
    """Embed one bit into one block.

    ``delta_stream`` is advanced once per pixel that takes the ``+/- delta``
    branch, in row-major order. Returns a new array shaped like ``block``.
    """
    block = np.asarray(block)
    s, n = stats.sum, stats.count
    sl, nl = stats.sum_low, stats.count_low
    sh, nh = _high_mean(stats)
    snapped = round_half_up(s, n)
    out = []
    for g in (int(v) for v in block.reshape(-1)):
        if bit:
            if g * nh > sh:
                g_new = stats.g_max
            elif g * nl >= sl and g * n < s:
                g_new = snapped
            else:
                g_new = min(255, g + 1 + delta_stream.below(stats.contrast))
        else:
            if g * nl < sl:
                g_new = stats.g_min
            elif g * n >= s and g * nh < sh:
                g_new = snapped
            else:
                g_new = max(0, g - 1 - delta_stream.below(stats.contrast))
        out.append(g_new)
    return np.array(out, dtype=np.uint8).reshape(block.shape)


def check_dimensions(key: KeyFile, host: GrayImage, mark: BitMatrix | None = None) -> None:
    if host.shape != (key.host_height, key.host_width):
        raise ValueError(
            f"host is {host.width}x{host.height}, key expects {key.host_width}x{key.host_height}"
        )
    if mark is not None and mark.shape != (key.mark_height, key.mark_width):
        raise ValueError(
            f"mark is {mark.width}x{mark.height}, key expects {key.mark_width}x{key.mark_height}"
        )


def bits_by_block(mark: BitMatrix, key: KeyFile) -> np.ndarray:
    """The bit each block (in row-major block order) will carry."""
    scrambled = scramble_bits(mark.flat(), key.scramble_seed)
    perm = fisher_yates(key.num_blocks, key.perm_seed)
    placed = np.empty_like(scrambled)
    placed[perm] = scrambled
    return placed


def embed_blocks(blocks: np.ndarray, bits: np.ndarray, block_seeds: np.ndarray,
                 alpha_num: int, alpha_den: int, c_min: int) -> np.ndarray:
    """Vectorised :func:`embed_bit_in_block` over a ``(num_blocks, N*N)`` array."""
    g = blocks.astype(np.int64)
    n = g.shape[1]
    s = g.sum(axis=1, keepdims=True)
    g_min = g.min(axis=1, keepdims=True)
    g_max = g.max(axis=1, keepdims=True)

    high = g * n > s
    nh = high.sum(axis=1, keepdims=True)
    sh = np.where(high, g, 0).sum(axis=1, keepdims=True)
    nl = n - nh
    sl = s - sh
    flat = nh == 0
    sh = np.where(flat, s, sh)
    nh = np.where(flat, n, nh)

    contrast = np.maximum(c_min, (alpha_num * (g_max - g_min)) // alpha_den)
    snapped = (2 * s + n) // (2 * n)

    one = bits.astype(bool)[:, None]
    to_extreme = np.where(one, g * nh > sh, g * nl < sl)
    to_mean = np.where(one, (g * nl >= sl) & (g * n < s), (g * n >= s) & (g * nh < sh))
    nudge = ~to_extreme & ~to_mean

    rank = np.cumsum(nudge, axis=1) - 1
    draws = splitmix64_outputs(block_seeds[:, None], np.maximum(rank, 0))
    delta = 1 + (draws % contrast.astype(np.uint64)).astype(np.int64)
    nudged = np.where(one, np.minimum(255, g + delta), np.maximum(0, g - delta))

    out = np.where(to_extreme, np.where(one, g_max, g_min), np.where(to_mean, snapped, nudged))
    return out.astype(np.uint8)


def embed(host: GrayImage, mark: BitMatrix, key: KeyFile) -> GrayImage:
    """Embed ``mark`` into ``host`` under ``key``.

    Bits are scrambled by ``scramble_seed``; scrambled bit ``i`` goes to block
    ``perm[i]`` with ``perm = fisher_yates(num_blocks, perm_seed)``. The delta
    stream of a block depends only on its position, so the result does not
    depend on processing order.
    """
    check_dimensions(key, host, mark)
    n = key.block_size
    bits = bits_by_block(mark, key)
    seeds = block_delta_seeds(key.delta_seed, np.arange(key.num_blocks))
    blocks = to_blocks(host.pixels, n)
    new = embed_blocks(blocks, bits, seeds, key.alpha_num, key.alpha_den, key.c_min)
    return GrayImage(from_blocks(new, n, host.width, host.height))


def saturated_blocks(host: GrayImage, mark: BitMatrix, key: KeyFile) -> int:
    """Count blocks whose bit cannot be guaranteed: a 1 into a block reaching 255,
    or a 0 into a block reaching 0."""
    check_dimensions(key, host, mark)
    bits = bits_by_block(mark, key)
    blocks = to_blocks(host.pixels, key.block_size)
    hot = (blocks.max(axis=1) == 255) & (bits == 1)
    cold = (blocks.min(axis=1) == 0) & (bits == 0)
    return int(np.count_nonzero(hot | cold))

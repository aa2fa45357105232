"""
What happens inside one block
=============================

The per-block statistics and the effect of embedding a 1 or a 0.
"""

from fractions import Fraction

import numpy as np

from blockmark import SplitMix64, block_delta_seed, block_stats, decode_block, embed_bit_in_block

block = np.arange(16).reshape(4, 4)
stats = block_stats(block, alpha=Fraction(1, 10), c_min=2)
print("mean", stats.mean, "low-class mean", stats.mean_low, "high-class mean", stats.mean_high)
print("contrast budget", stats.contrast)

for bit in (1, 0):
    out = embed_bit_in_block(block, bit, stats, SplitMix64(block_delta_seed(3, 0)))
    print(f"bit {bit}:")
    print(out)
    print("  sum", block.sum(), "->", int(out.astype(int).sum()), "decodes as", decode_block(block, out))

# A saturated block cannot move upward, so a 1 is lost.
white = np.full((4, 4), 255)
out = embed_bit_in_block(white, 1, block_stats(white), SplitMix64(1))
print("all-255 block with bit 1 decodes as", decode_block(white, out))

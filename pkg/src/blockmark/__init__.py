"""Contrast-adaptive block watermarking for grayscale images."""

from .attacks import (
    brightness_shift,
    dct_quantize,
    gaussian_noise,
    mean_filter,
    median_filter,
    salt_pepper,
)
from .embed import embed, embed_bit_in_block, saturated_blocks
from .extract import decode_block, extract
from .keys import (
    KeyFile,
    KeyFileError,
    SplitMix64,
    block_delta_seed,
    descramble_bits,
    fisher_yates,
    invert_permutation,
    keyfile_parse,
    keyfile_serialize,
    prng_next,
    scramble_bits,
    uniform_below,
)
from .metrics import UndefinedCorrelation, ber, mse, ncc, psnr
from .model import BitMatrix, BlockGrid, BlockStats, GrayImage, block_stats, block_view
from .pnm import read_pbm, read_pgm, write_pbm, write_pgm

__version__ = "0.1.0"

"""Image and watermark containers plus exact per-block statistics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


class GrayImage:
    """8-bit grayscale image stored as a read-only ``(height, width)`` uint8 array."""

    __slots__ = ("pixels",)

    def __init__(self, pixels):
        arr = np.asarray(pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        self.pixels = _frozen(arr.copy())

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "GrayImage":
        values = np.asarray(values)
        if values.size != width * height:
            raise ValueError(f"expected {width * height} pixels, got {values.size}")
        return cls(values.reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self):
        return hash((self.shape, self.pixels.tobytes()))

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


class BitMatrix:
    """Binary matrix stored as a read-only ``(height, width)`` uint8 array of 0/1."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.asarray(bits)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"bit matrix must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype == bool:
            arr = arr.astype(np.uint8)
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("bits must be 0 or 1")
        self.bits = _frozen(arr.astype(np.uint8))

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "BitMatrix":
        values = np.asarray(values)
        if values.size != width * height:
            raise ValueError(f"expected {width * height} bits, got {values.size}")
        return cls(values.reshape(height, width))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    def flat(self) -> np.ndarray:
        return self.bits.reshape(-1)

    def __eq__(self, other):
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.shape, self.bits.tobytes()))

    def __repr__(self):
        return f"BitMatrix({self.width}x{self.height})"


@dataclass(frozen=True)
class BlockGrid:
    """Row-major tiling of an image into ``block_size`` x ``block_size`` blocks."""

    block_size: int
    blocks_x: int
    blocks_y: int

    @classmethod
    def for_image(cls, width: int, height: int, block_size: int = 4) -> "BlockGrid":
        if block_size < 1:
            raise ValueError("block size must be positive")
        if width % block_size or height % block_size:
            raise ValueError("host not divisible by block size")
        return cls(block_size, width // block_size, height // block_size)

    @property
    def num_blocks(self) -> int:
        return self.blocks_x * self.blocks_y

    def origin(self, k: int) -> tuple[int, int]:
        """Top-left ``(row, col)`` of block ``k``."""
        if not 0 <= k < self.num_blocks:
            raise IndexError(f"block index {k} out of range [0, {self.num_blocks})")
        n = self.block_size
        return (k // self.blocks_x) * n, (k % self.blocks_x) * n


def block_view(image: GrayImage, grid: BlockGrid, k: int) -> np.ndarray:
    """Return block ``k`` as an ``(N, N)`` array (a read-only view into the image)."""
    r, c = grid.origin(k)
    n = grid.block_size
    return image.pixels[r:r + n, c:c + n]


def to_blocks(arr: np.ndarray, n: int) -> np.ndarray:
    """Reshape an ``(H, W)`` array into ``(num_blocks, n*n)``, blocks row-major."""
    h, w = arr.shape
    return arr.reshape(h // n, n, w // n, n).swapaxes(1, 2).reshape(-1, n * n)


def from_blocks(blocks: np.ndarray, n: int, width: int, height: int) -> np.ndarray:
    """Inverse of :func:`to_blocks`."""
    return blocks.reshape(height // n, width // n, n, n).swapaxes(1, 2).reshape(height, width)


@dataclass(frozen=True)
class BlockStats:
    """Exact statistics of one block.

    Means are kept as integer ``(sum, count)`` pairs; comparisons against them
    are done by cross-multiplication so that no floating rounding enters the
    pixel classification. ``count_high`` is 0 exactly when the block is flat.
    """

    sum: int
    count: int
    g_min: int
    g_max: int
    sum_low: int
    count_low: int
    sum_high: int
    count_high: int
    contrast: int

    @property
    def mean(self) -> Fraction:
        return Fraction(self.sum, self.count)

    @property
    def mean_low(self) -> Fraction:
        return Fraction(self.sum_low, self.count_low)

    @property
    def mean_high(self) -> Fraction:
        # flat block: the high class is empty and stands in as the block mean
        if self.count_high == 0:
            return self.mean
        return Fraction(self.sum_high, self.count_high)

    @property
    def is_flat(self) -> bool:
        return self.g_min == self.g_max


def contrast_value(g_min: int, g_max: int, alpha: Fraction, c_min: int) -> int:
    """``max(c_min, floor(alpha * (g_max - g_min)))``."""
    return max(c_min, (alpha.numerator * (g_max - g_min)) // alpha.denominator)


def block_stats(block, alpha: Fraction = Fraction(1, 10), c_min: int = 2) -> BlockStats:
    """Compute exact :class:`BlockStats` for a block of intensities.

    A pixel belongs to the high class iff ``g > mean``, tested as
    ``g * count > sum``.
    """
    values = [int(v) for v in np.asarray(block).reshape(-1)]
    if not values:
        raise ValueError("block must be nonempty")
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if not 1 <= c_min <= 255:
        raise ValueError("c_min must be in [1, 255]")
    total, count = sum(values), len(values)
    high = [g for g in values if g * count > total]
    low_sum = total - sum(high)
    return BlockStats(
        sum=total,
        count=count,
        g_min=min(values),
        g_max=max(values),
        sum_low=low_sum,
        count_low=count - len(high),
        sum_high=sum(high),
        count_high=len(high),
        contrast=contrast_value(min(values), max(values), alpha, c_min),
    )

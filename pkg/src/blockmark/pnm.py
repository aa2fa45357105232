"""Readers and writers for PGM (P5/P2) and PBM (P4/P1) images.

Writers always emit the binary variants with a fixed header layout, so a
given image has exactly one byte encoding.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .model import BitMatrix, GrayImage

_WHITESPACE = b" \t\n\r\v\f"


class PnmError(ValueError):
    pass


class PnmFormatError(PnmError):
    pass


class PnmUnsupportedError(PnmError):
    pass


class PnmTruncatedError(PnmError):
    pass


class _Header:
    """Cursor over the whitespace/comment-separated header tokens."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 2

    def _skip(self) -> None:
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                break

    def integer(self, what: str) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if self.pos >= len(self.data):
                raise PnmTruncatedError(f"header truncated before {what}")
            raise PnmFormatError(f"expected {what} at byte {start}")
        return int(self.data[start:self.pos])

    def end_of_header(self) -> int:
        """Offset of binary data: exactly one whitespace byte after the last field."""
        if self.pos >= len(self.data) or self.data[self.pos:self.pos + 1] not in _WHITESPACE:
            raise PnmFormatError(f"expected a single whitespace byte at offset {self.pos}")
        return self.pos + 1


def _magic(data: bytes, allowed: tuple[bytes, ...]) -> bytes:
    magic = bytes(data[:2])
    if magic not in allowed:
        raise PnmFormatError(f"bad magic {magic!r}, expected one of {allowed}")
    return magic


def _dims(header: _Header) -> tuple[int, int]:
    width, height = header.integer("width"), header.integer("height")
    if width < 1 or height < 1:
        raise PnmFormatError(f"invalid dimensions {width}x{height}")
    return width, height


def _ascii_values(data: bytes, offset: int, count: int, what: str) -> np.ndarray:
    header = _Header(data)
    header.pos = offset
    values = []
    for i in range(count):
        try:
            values.append(header.integer(what))
        except PnmTruncatedError:
            raise PnmTruncatedError(f"pixel data truncated: got {i} of {count} values") from None
    return np.array(values, dtype=np.int64)


def read_pgm(data: bytes) -> GrayImage:
    data = bytes(data)
    magic = _magic(data, (b"P5", b"P2"))
    header = _Header(data)
    width, height = _dims(header)
    maxval = header.integer("maxval")
    if maxval != 255:
        raise PnmUnsupportedError(f"maxval {maxval} unsupported (only 255)")
    count = width * height
    if magic == b"P2":
        values = _ascii_values(data, header.pos, count, "intensity")
        if values.max() > 255:
            raise PnmFormatError("intensity exceeds maxval")
        return GrayImage(values.reshape(height, width))
    start = header.end_of_header()
    pixels = data[start:start + count]
    if len(pixels) < count:
        raise PnmTruncatedError(
            f"pixel data truncated at offset {len(pixels)} (expected {count} bytes)"
        )
    return GrayImage(np.frombuffer(pixels, dtype=np.uint8).reshape(height, width))


def write_pgm(img: GrayImage) -> bytes:
    return f"P5\n{img.width} {img.height}\n255\n".encode("ascii") + img.pixels.tobytes()


def read_pbm(data: bytes) -> BitMatrix:
    """Read P4 or P1; a 1 bit (black) maps to watermark bit 1."""
    data = bytes(data)
    magic = _magic(data, (b"P4", b"P1"))
    header = _Header(data)
    width, height = _dims(header)
    if magic == b"P1":
        header._skip()
        bits = []
        pos = header.pos
        # P1 bits need no separators, so read one digit at a time
        while len(bits) < width * height and pos < len(data):
            c = data[pos:pos + 1]
            if c == b"#":
                end = data.find(b"\n", pos)
                pos = len(data) if end < 0 else end + 1
                continue
            if c in (b"0", b"1"):
                bits.append(int(c))
            elif c not in _WHITESPACE:
                raise PnmFormatError(f"unexpected byte {c!r} at offset {pos}")
            pos += 1
        if len(bits) < width * height:
            raise PnmTruncatedError(f"bit data truncated: got {len(bits)} of {width * height} bits")
        return BitMatrix(np.array(bits, dtype=np.uint8).reshape(height, width))
    start = header.end_of_header()
    row_bytes = (width + 7) // 8
    needed = row_bytes * height
    packed = data[start:start + needed]
    if len(packed) < needed:
        raise PnmTruncatedError(
            f"bit data truncated at offset {len(packed)} (expected {needed} bytes)"
        )
    rows = np.frombuffer(packed, dtype=np.uint8).reshape(height, row_bytes)
    return BitMatrix(np.unpackbits(rows, axis=1)[:, :width])


def write_pbm(mat: BitMatrix) -> bytes:
    header = f"P4\n{mat.width} {mat.height}\n".encode("ascii")
    return header + np.packbits(mat.bits, axis=1).tobytes()


def load_pgm(path) -> GrayImage:
    return read_pgm(Path(path).read_bytes())


def save_pgm(path, img: GrayImage) -> None:
    Path(path).write_bytes(write_pgm(img))


def load_pbm(path) -> BitMatrix:
    return read_pbm(Path(path).read_bytes())


def save_pbm(path, mat: BitMatrix) -> None:
    Path(path).write_bytes(write_pbm(mat))

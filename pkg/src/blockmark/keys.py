"""SplitMix64 randomness, keyed permutations, and the key file format."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
MAX_BOUND = 1 << 32


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def prng_next(state: int) -> tuple[int, int]:
    """One SplitMix64 step. Returns ``(output, new_state)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    return _mix(state), state


def uniform_below(state: int, n: int) -> tuple[int, int]:
    """Draw from ``[0, n)`` by reducing one PRNG output modulo ``n``."""
    if not 1 <= n <= MAX_BOUND:
        raise ValueError(f"bound must be in [1, 2**32], got {n}")
    value, state = prng_next(state)
    return value % n, state


class SplitMix64:
    """Mutable convenience wrapper around :func:`prng_next`."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        value, self.state = prng_next(self.state)
        return value

    def below(self, n: int) -> int:
        value, self.state = uniform_below(self.state, n)
        return value


def splitmix64_outputs(seed, steps) -> np.ndarray:
    """Vectorised stream lookup: output number ``t`` (0-based) of the stream seeded with ``seed``.

    ``seed`` and ``steps`` broadcast against each other. The state after
    ``t + 1`` steps is ``seed + (t + 1) * gamma``, so any draw can be
    addressed directly.
    """
    seed = np.asarray(seed, dtype=np.uint64)
    steps = np.asarray(steps, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = seed + (steps + np.uint64(1)) * np.uint64(GOLDEN_GAMMA)
        return _mix_array(z)


def _mix_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


def block_delta_seed(delta_seed: int, k: int) -> int:
    """Seed of the per-block delta stream for block ``k``."""
    if k < 0:
        raise ValueError("block index must be non-negative")
    return (delta_seed ^ (((k + 1) * GOLDEN_GAMMA) & MASK64)) & MASK64


def block_delta_seeds(delta_seed: int, ks) -> np.ndarray:
    """Array form of :func:`block_delta_seed`."""
    ks = np.asarray(ks, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return np.uint64(delta_seed & MASK64) ^ ((ks + np.uint64(1)) * np.uint64(GOLDEN_GAMMA))


def fisher_yates(n: int, seed: int) -> np.ndarray:
    """Keyed permutation of ``range(n)``.

    Runs the usual descending Fisher-Yates shuffle on the identity array and
    returns ``mapping`` with ``mapping[i]`` = final position of element ``i``.
    """
    if n < 1:
        raise ValueError("permutation length must be positive")
    a = list(range(n))
    state = seed & MASK64
    for i in range(n - 1, 0, -1):
        j, state = uniform_below(state, i + 1)
        a[i], a[j] = a[j], a[i]
    mapping = np.empty(n, dtype=np.int64)
    mapping[a] = np.arange(n)
    return mapping


def invert_permutation(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    q = np.empty_like(p)
    q[p] = np.arange(p.size)
    return q


def is_permutation(p) -> bool:
    p = np.asarray(p)
    return bool(np.array_equal(np.sort(p), np.arange(p.size)))


def scramble_bits(bits, seed: int) -> np.ndarray:
    """Move bit ``i`` to position ``fisher_yates(len, seed)[i]``."""
    bits = np.asarray(bits).reshape(-1)
    if bits.size == 0:
        raise ValueError("cannot scramble an empty bit sequence")
    out = np.empty_like(bits)
    out[fisher_yates(bits.size, seed)] = bits
    return out


def descramble_bits(bits, seed: int) -> np.ndarray:
    bits = np.asarray(bits).reshape(-1)
    if bits.size == 0:
        raise ValueError("cannot descramble an empty bit sequence")
    return bits[fisher_yates(bits.size, seed)]


class KeyFileError(ValueError):
    pass


MAGIC = "WMK1"


@dataclass(frozen=True)
class KeyFile:
    """Everything needed to reproduce an embedding and to extract from it."""

    host_width: int
    host_height: int
    mark_width: int
    mark_height: int
    block_size: int = 4
    alpha_num: int = 1
    alpha_den: int = 10
    c_min: int = 2
    perm_seed: int = 0
    scramble_seed: int = 0
    delta_seed: int = 0

    def __post_init__(self):
        problem = self.problem()
        if problem:
            raise KeyFileError(problem[1])

    def problem(self) -> tuple[int, str] | None:
        """First violated invariant as ``(key-file line, message)``, or None."""
        if self.host_width < 1 or self.host_height < 1:
            return 2, "host dimensions must be positive"
        if self.mark_width < 1 or self.mark_height < 1:
            return 3, "mark dimensions must be positive"
        if self.block_size < 1:
            return 4, "block size must be positive"
        if self.host_width % self.block_size or self.host_height % self.block_size:
            return 4, "host not divisible by block size"
        blocks = (self.host_width // self.block_size) * (self.host_height // self.block_size)
        bits = self.mark_width * self.mark_height
        if blocks != bits:
            return 3, f"block count {blocks} != mark bits {bits}"
        if self.alpha_num < 0 or self.alpha_den < 1:
            return 5, "alpha must be num/den with num >= 0 and den >= 1"
        if not 1 <= self.c_min <= 255:
            return 6, "cmin must be in [1, 255]"
        for line, name in ((7, "perm_seed"), (8, "scramble_seed"), (9, "delta_seed")):
            if not 0 <= getattr(self, name) <= MASK64:
                return line, f"{name} must be an unsigned 64-bit integer"
        return None

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.alpha_num, self.alpha_den)

    @property
    def num_blocks(self) -> int:
        return self.mark_width * self.mark_height

    def serialize(self) -> str:
        return (
            f"{MAGIC}\n"
            f"host {self.host_width} {self.host_height}\n"
            f"mark {self.mark_width} {self.mark_height}\n"
            f"block {self.block_size}\n"
            f"alpha {self.alpha_num}/{self.alpha_den}\n"
            f"cmin {self.c_min}\n"
            f"perm_seed {self.perm_seed}\n"
            f"scramble_seed {self.scramble_seed}\n"
            f"delta_seed {self.delta_seed}\n"
        )

    @classmethod
    def parse(cls, text: str) -> "KeyFile":
        return keyfile_parse(text)


# (keyword, field names, separator between values)
_LAYOUT = [
    ("host", ("host_width", "host_height"), " "),
    ("mark", ("mark_width", "mark_height"), " "),
    ("block", ("block_size",), None),
    ("alpha", ("alpha_num", "alpha_den"), "/"),
    ("cmin", ("c_min",), None),
    ("perm_seed", ("perm_seed",), None),
    ("scramble_seed", ("scramble_seed",), None),
    ("delta_seed", ("delta_seed",), None),
]


def _parse_uint(token: str, lineno: int) -> int:
    # int() would accept '+', '_', and surrounding whitespace
    if not token.isascii() or not token.isdigit():
        raise KeyFileError(f"line {lineno}: non-integer value {token!r}")
    if len(token) > 1 and token[0] == "0":
        raise KeyFileError(f"line {lineno}: leading zero in {token!r}")
    return int(token)


def keyfile_serialize(key: KeyFile) -> str:
    return key.serialize()


def keyfile_parse(text: str) -> KeyFile:
    """Parse the strict line-oriented key format produced by :meth:`KeyFile.serialize`."""
    if not text.endswith("\n"):
        raise KeyFileError("key file must end with a newline")
    lines = text[:-1].split("\n")
    if lines[0] != MAGIC:
        raise KeyFileError(f"line 1: bad magic {lines[0]!r}, expected {MAGIC!r}")
    fields: dict[str, int] = {}
    for idx, (keyword, names, sep) in enumerate(_LAYOUT):
        lineno = idx + 2
        if lineno > len(lines):
            raise KeyFileError(f"line {lineno}: missing field {keyword!r}")
        line = lines[lineno - 1]
        head, space, rest = line.partition(" ")
        if head != keyword or not space:
            raise KeyFileError(f"line {lineno}: expected {keyword!r}, got {line!r}")
        tokens = rest.split(sep) if sep else [rest]
        if len(tokens) != len(names):
            raise KeyFileError(f"line {lineno}: expected {len(names)} value(s) for {keyword!r}")
        for name, tok in zip(names, tokens):
            fields[name] = _parse_uint(tok, lineno)
    if len(lines) > len(_LAYOUT) + 1:
        raise KeyFileError(f"line {len(_LAYOUT) + 2}: unexpected trailing content")
    try:
        return KeyFile(**fields)
    except KeyFileError:
        lineno, message = KeyFile.problem(_Unchecked(**fields))
        raise KeyFileError(f"line {lineno}: {message}") from None


class _Unchecked:
    def __init__(self, **fields):
        self.__dict__.update(fields)

"""
Keys, scrambling, and file formats
==================================

The key file stores three seeds: one for bit scrambling, one for block
placement, and one for the random per-pixel offsets.
"""

import tempfile
from pathlib import Path

import numpy as np

from blockmark import descramble_bits, fisher_yates, keyfile_parse, scramble_bits
from blockmark.cli import main
from blockmark.fixtures import checkerboard_mark, gradient_host
from blockmark.pnm import save_pbm, save_pgm

print("fisher_yates(8, seed=42):", fisher_yates(8, 42).tolist())
bits = np.array([1, 1, 0, 0, 1, 0, 1, 0])
scrambled = scramble_bits(bits, 7)
print("scrambled:", scrambled.tolist(), "restored:", descramble_bits(scrambled, 7).tolist())

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    save_pgm(tmp / "host.pgm", gradient_host())
    save_pbm(tmp / "mark.pbm", checkerboard_mark())
    main(["keygen", "--host-size", "512x512", "--mark-size", "128x128", "--seed", "7",
          "--out", str(tmp / "key.wmk")])
    print((tmp / "key.wmk").read_text())
    assert keyfile_parse((tmp / "key.wmk").read_text()).block_size == 4
    main(["embed", "--host", str(tmp / "host.pgm"), "--mark", str(tmp / "mark.pbm"),
          "--key", str(tmp / "key.wmk"), "--out", str(tmp / "marked.pgm")])
    main(["extract", "--host", str(tmp / "host.pgm"), "--watermarked", str(tmp / "marked.pgm"),
          "--key", str(tmp / "key.wmk"), "--out", str(tmp / "rec.pbm"), "--reference", str(tmp / "mark.pbm")])

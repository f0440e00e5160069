"""Counter-based random streams with a fixed (sample, coefficient) layout.

All sampling in this package draws from a Philox counter-based generator.
Philox produces blocks of four 64-bit words per counter tick and numpy's
``Generator.random`` consumes one word per double, so ``advance(b)`` skips
exactly ``4 * b`` doubles.  We exploit this to give every sample row a
fixed, addressable region of the stream: results are identical whether an
ensemble is generated in one vectorised call, in row chunks, or row by
row, which is what makes parallel generation reproducible.

Layout: each (sample i, coefficient j) pair owns two doubles, stored at
row-local positions (2j, 2j + 1).  Rows are padded to a whole number of
Philox blocks, so row i starts at block offset ``i * blocks_per_row(n)``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "make_rng",
    "blocks_per_row",
    "uniform_block",
    "uniform_rows",
]

_WORDS_PER_BLOCK = 4  # Philox4x64: one counter tick -> four uint64 -> four doubles


def make_rng(seed) -> np.random.Generator:
    """Coerce ``seed`` into a generator.

    Accepts an integer key (Philox stream), an existing Generator, or any
    duck-typed object with the Generator drawing methods (the test seam
    for pinning individual draws).
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if hasattr(seed, "standard_normal") and hasattr(seed, "random"):
        return seed
    return np.random.Generator(np.random.Philox(key=seed))


def blocks_per_row(n_coefficients: int) -> int:
    """Philox counter blocks reserved per sample row (2 doubles per coefficient)."""
    doubles = 2 * n_coefficients
    return -(-doubles // _WORDS_PER_BLOCK)


def uniform_block(seed, n_samples: int, n_coefficients: int) -> np.ndarray:
    """Uniform[0,1) draws of shape (n_samples, n_coefficients, 2).

    Element (i, j, k) sits at a fixed counter position determined only by
    (seed, i, j, k); see `uniform_rows` for addressing a row range directly.
    """
    return uniform_rows(seed, 0, n_samples, n_coefficients)


def uniform_rows(seed, row_start: int, row_stop: int, n_coefficients: int) -> np.ndarray:
    """Uniforms for sample rows [row_start, row_stop), bitwise equal to the
    corresponding slice of `uniform_block`."""
    n_rows = row_stop - row_start
    if n_rows <= 0 or n_coefficients <= 0:
        return np.empty((max(n_rows, 0), max(n_coefficients, 0), 2))
    bpr = blocks_per_row(n_coefficients)
    stride = bpr * _WORDS_PER_BLOCK
    bg = np.random.Philox(key=seed)
    if row_start:
        bg.advance(row_start * bpr)
    raw = np.random.Generator(bg).random(n_rows * stride)
    raw = raw.reshape(n_rows, stride)[:, : 2 * n_coefficients]
    return np.ascontiguousarray(raw.reshape(n_rows, n_coefficients, 2))

"""Serialization of field ensembles.

Binary layout ("SFE1"): the 4 magic bytes, a little-endian uint32 header
length, a UTF-8 JSON header carrying spec hash, seed, and dimensions,
then the coefficient matrix and (if present) the grid matrix as
little-endian float64 in row-major order.

CSV layout: one row per sample, 17-significant-digit decimals, a header
row naming the columns, preceded by a comment line with the spec hash
and seed.
"""

from __future__ import annotations

import json
import struct
from typing import Optional

import numpy as np

from .errors import InvalidSpecError
from .series import FieldEnsemble

__all__ = ["MAGIC", "write_sfe1", "read_sfe1", "write_ensemble_csv", "write_matrix_csv"]

MAGIC = b"SFE1"
_FLOAT_FMT = "%.17g"


def write_sfe1(path, ensemble: FieldEnsemble) -> None:
    header = {
        "spec_hash": ensemble.spec_hash,
        "seed": ensemble.seed,
        "n_samples": int(ensemble.coefficients.shape[0]),
        "n_coefficients": int(ensemble.coefficients.shape[1]),
        "grid_size": int(ensemble.grid_values.shape[1]) if ensemble.grid_values is not None else 0,
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(ensemble.coefficients, dtype="<f8").tobytes())
        if ensemble.grid_values is not None:
            fh.write(np.ascontiguousarray(ensemble.grid_values, dtype="<f8").tobytes())


def read_sfe1(path) -> tuple[dict, np.ndarray, Optional[np.ndarray]]:
    """Read back (header, coefficients, grid-or-None)."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise InvalidSpecError(f"not an SFE1 file (magic {magic!r})")
        (hlen,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        n, m = header["n_samples"], header["n_coefficients"]
        coeffs = np.frombuffer(fh.read(8 * n * m), dtype="<f8").reshape(n, m).copy()
        grid = None
        g = header.get("grid_size", 0)
        if g:
            grid = np.frombuffer(fh.read(8 * n * g), dtype="<f8").reshape(n, g).copy()
    return header, coeffs, grid


def write_matrix_csv(path, matrix: np.ndarray, column_prefix: str,
                     comment: str) -> None:
    """Write a matrix as CSV: comment line, header row, one row per sample."""
    matrix = np.atleast_2d(matrix)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {comment}\n")
        fh.write(",".join(f"{column_prefix}{j}" for j in range(matrix.shape[1])) + "\n")
        for row in matrix:
            fh.write(",".join(_FLOAT_FMT % v for v in row) + "\n")


def write_ensemble_csv(path, ensemble: FieldEnsemble, which: str = "coefficients") -> None:
    if which == "coefficients":
        mat, prefix = ensemble.coefficients, "c"
    elif which == "grid":
        if ensemble.grid_values is None:
            raise InvalidSpecError("ensemble has no grid synthesis")
        mat, prefix = ensemble.grid_values, "x"
    else:
        raise InvalidSpecError(f"unknown section {which!r}")
    comment = f"spec_hash={ensemble.spec_hash} seed={ensemble.seed}"
    write_matrix_csv(path, mat, prefix, comment)

"""Matrix file ingestion and emission.

Reads MatrixMarket (array or coordinate, real or complex) and plain dense
CSV (real); always writes MatrixMarket array format with a "general"
symmetry header and full double precision.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .matrices import Matrix, as_matrix


class MatrixParseError(ValueError):
    """The file could not be parsed as a matrix."""


def read_matrix_market(path) -> Matrix:
    try:
        a = scipy.io.mmread(path)
    except Exception as exc:
        raise MatrixParseError(f"{path}: not a readable MatrixMarket file: {exc}") from exc
    if scipy.sparse.issparse(a):
        a = a.toarray()
    try:
        return as_matrix(a)
    except ValueError as exc:
        raise MatrixParseError(f"{path}: {exc}") from exc


def read_csv(path) -> Matrix:
    try:
        a = np.loadtxt(path, delimiter=",", ndmin=2)
    except Exception as exc:
        raise MatrixParseError(f"{path}: not a readable CSV matrix: {exc}") from exc
    try:
        return as_matrix(a)
    except ValueError as exc:
        raise MatrixParseError(f"{path}: {exc}") from exc


def read_matrix(path) -> Matrix:
    """Sniff the format: MatrixMarket when the header says so, else CSV."""
    path = Path(path)
    if not path.exists():
        raise MatrixParseError(f"{path}: no such file")
    with open(path, "rb") as fh:
        head = fh.read(14)
    if head.startswith(b"%%MatrixMarket") or path.suffix.lower() in (".mtx", ".mm"):
        return read_matrix_market(path)
    return read_csv(path)


def write_matrix_market(path, a: Matrix) -> None:
    a = as_matrix(a)
    scipy.io.mmwrite(str(path), a, symmetry="general", precision=17)


def matrix_to_market_string(a: Matrix) -> str:
    buf = io.BytesIO()
    scipy.io.mmwrite(buf, as_matrix(a), symmetry="general", precision=17)
    return buf.getvalue().decode()

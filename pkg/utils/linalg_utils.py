"""
Linear algebra helpers shared by the algebra oracles and the norm code.

Matrices with dtype=object hold exact scalars (int/Fraction) and are reduced
with Fraction Gaussian elimination up to Config.EXACT_RANK_MAX_DIM; everything
else goes through scipy.linalg with rank tolerance RANK_RTOL * sigma_max.
"""
from fractions import Fraction
from typing import List, Tuple

import numpy as np
import scipy.linalg

from config import Config
from utils.logging_utils import log_debug

_to_complex = np.vectorize(complex, otypes=[np.complex128])


def is_exact(m: np.ndarray) -> bool:
    return np.asarray(m).dtype == object


def as_complex(m) -> np.ndarray:
    m = np.asarray(m)
    if m.dtype == object:
        return _to_complex(m) if m.size else np.zeros(m.shape, dtype=np.complex128)
    return m.astype(np.complex128)


def exact_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def _use_exact(m: np.ndarray) -> bool:
    if not is_exact(m):
        return False
    if max(m.shape, default=0) > Config.EXACT_RANK_MAX_DIM:
        log_debug(f"exact elimination skipped for shape {m.shape}; using SVD")
        return False
    return True


def _rref(m: np.ndarray) -> Tuple[List[List[Fraction]], List[int]]:
    rows = [[Fraction(x) for x in row] for row in m.tolist()]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows[:r], pivots


def _float_rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    s = scipy.linalg.svdvals(as_complex(m))
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > Config.RANK_RTOL * s[0]))


def rank(m) -> int:
    m = np.asarray(m)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.size == 0:
        return 0
    if _use_exact(m):
        return len(_rref(m)[1])
    return _float_rank(m)


def row_basis(rows) -> np.ndarray:
    """A basis (as rows) of the row space."""
    m = np.asarray(rows)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.shape[0] == 0:
        return m
    if _use_exact(m):
        reduced, _ = _rref(m)
        out = exact_zeros((len(reduced), m.shape[1]))
        for i, row in enumerate(reduced):
            out[i, :] = row
        return out
    c = as_complex(m)
    if not np.any(np.abs(c) > 0):
        return np.zeros((0, m.shape[1]), dtype=np.complex128)
    return scipy.linalg.orth(c.T, rcond=Config.RANK_RTOL).T


def null_space(m) -> np.ndarray:
    """Basis (as rows) of {x : m x = 0}."""
    m = np.asarray(m)
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n, dtype=object if is_exact(m) else np.complex128)
    if _use_exact(m):
        reduced, pivots = _rref(m)
        free = [c for c in range(n) if c not in pivots]
        out = exact_zeros((len(free), n))
        for k, f in enumerate(free):
            out[k, f] = Fraction(1)
            for row, p in zip(reduced, pivots):
                out[k, p] = -row[f]
        return out
    return scipy.linalg.null_space(as_complex(m), rcond=Config.RANK_RTOL).T


def stack(*blocks) -> np.ndarray:
    """Vertically stack row blocks, promoting to complex when any block is inexact."""
    blocks = [np.atleast_2d(np.asarray(b)) for b in blocks if np.asarray(b).size]
    if not blocks:
        return np.zeros((0, 0))
    if all(is_exact(b) for b in blocks):
        return np.vstack(blocks).astype(object)
    return np.vstack([as_complex(b) for b in blocks])


def intersection_dim(a, b) -> int:
    """dim(span a ∩ span b) for row-spanning sets a and b."""
    a = np.atleast_2d(np.asarray(a))
    b = np.atleast_2d(np.asarray(b))
    if a.size == 0 or b.size == 0:
        return 0
    return rank(a) + rank(b) - rank(stack(a, b))


def in_span(basis, v) -> bool:
    basis = np.atleast_2d(np.asarray(basis))
    if basis.size == 0:
        return rank(np.atleast_2d(v)) == 0
    return rank(stack(basis, np.atleast_2d(v))) == rank(basis)



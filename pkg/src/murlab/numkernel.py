"""Small dense Hermitian linear algebra (n <= 16).

The eigen solver is a cyclic complex Jacobi iteration. A compiled version
lives in ``murlab._kernels``; if it is missing (or ``MURLAB_BACKEND=python``
is set) the numpy port in ``murlab._fallback`` is used instead. ``BACKEND``
records which one was picked.
"""
from __future__ import annotations

import os
from typing import Sequence

import numpy as np

if os.environ.get("MURLAB_BACKEND", "").lower() == "python":
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _fallback as _impl

        BACKEND = "python"

MAX_DIM = 16
HERMITIAN_TOL = 1e-12


class InvalidMatrixError(ValueError):
    """Raised for non-square, empty, oversized or non-Hermitian input."""


def _as_hermitian(M, *, batched: bool = False) -> np.ndarray:
    a = np.asarray(M, dtype=np.complex128)
    if a.ndim != (3 if batched else 2) or a.shape[-1] != a.shape[-2]:
        raise InvalidMatrixError(f"expected square matrix, got shape {a.shape}")
    n = a.shape[-1]
    if not 1 <= n <= MAX_DIM:
        raise InvalidMatrixError(f"dimension {n} outside 1..{MAX_DIM}")
    adj = np.conj(np.swapaxes(a, -1, -2))
    if a.size and np.max(np.abs(a - adj)) > HERMITIAN_TOL:
        raise InvalidMatrixError("matrix is not Hermitian within 1e-12")
    return (a + adj) / 2


def hermitian_eigmax(M) -> float:
    """Largest eigenvalue of a Hermitian matrix.

    The input is checked for Hermiticity (1e-12) and symmetrized before the
    Jacobi solve.
    """
    a = _as_hermitian(M)
    return float(_impl.eigmax_batch(a[None])[0])


def hermitian_eigmax_batch(mats) -> np.ndarray:
    """Vectorized :func:`hermitian_eigmax` over an ``(N, n, n)`` stack."""
    a = _as_hermitian(mats, batched=True)
    return np.asarray(_impl.eigmax_batch(a), dtype=np.float64)


def hermitian_eigpair(M) -> tuple[float, np.ndarray]:
    """Largest eigenvalue together with a unit eigenvector."""
    a = _as_hermitian(M)
    w, v = _impl.jacobi_eigh(a)
    vec = v[:, -1]
    return float(w[-1]), vec / np.linalg.norm(vec)


def largest_singular_value(M) -> float:
    """sigma_max(M) = sqrt(lambda_max(M^dagger M)), via the smaller Gram matrix."""
    a = np.asarray(M, dtype=np.complex128)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.size == 0:
        raise InvalidMatrixError(f"expected a non-empty matrix, got shape {a.shape}")
    gram = a.conj().T @ a if a.shape[1] <= a.shape[0] else a @ a.conj().T
    if gram.shape[0] > MAX_DIM:
        raise InvalidMatrixError(f"Gram dimension {gram.shape[0]} exceeds {MAX_DIM}")
    return float(np.sqrt(max(hermitian_eigmax(gram), 0.0)))


def min_slack_batch(rows, omega, skip_last: bool = False) -> np.ndarray:
    """Per-row min_k (omega_k - sum of the k largest entries)."""
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ValueError("rows must be two dimensional")
    return np.asarray(_impl.min_slack_batch(rows, np.asarray(omega, dtype=np.float64), skip_last))


def _vectors_of(basis) -> np.ndarray:
    return np.asarray(getattr(basis, "vectors", basis), dtype=np.complex128)


def projector_sum(bases: Sequence, selections: Sequence[Sequence[int]]) -> np.ndarray:
    """Sum of the rank-1 projectors |v_j><v_j| picked from each basis.

    ``bases`` holds :class:`~murlab.quantum.OrthonormalBasis` objects (or raw
    d x d column matrices); ``selections[l]`` indexes columns of ``bases[l]``.
    """
    if len(bases) != len(selections):
        raise ValueError("need exactly one index set per basis")
    mats = [_vectors_of(b) for b in bases]
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise ValueError("all bases must share the same dimension")
    out = np.zeros((d, d), dtype=np.complex128)
    for vecs, sel in zip(mats, selections):
        idx = list(sel)
        if any(not 0 <= j < d for j in idx):
            raise IndexError(f"selection {idx} out of range for dimension {d}")
        cols = vecs[:, idx]
        out += cols @ cols.conj().T
    return out

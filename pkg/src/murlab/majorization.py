"""Majorization order, direct product / direct sum, and profile utilities.

Bound profiles are handled in cumulative form (Omega_1 <= ... <= Omega_n).
A vector x is dominated by a profile when every partial sum of its sorted
entries stays below the matching Omega_k.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quantum import ProbabilityVector, as_entries, weight_of

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SortedProfile:
    sorted: np.ndarray
    cumulative: np.ndarray
    weight: float


def sorted_profile(x) -> SortedProfile:
    """Entries in nonincreasing order together with their partial sums."""
    s = np.sort(as_entries(x))[::-1]
    return SortedProfile(s, np.cumsum(s), weight_of(x))


def direct_product(p, q, *more) -> ProbabilityVector:
    """All products p_j q_k (row-major in j, k); weights multiply."""
    out = as_entries(p)
    w = weight_of(p)
    for r in (q, *more):
        out = np.outer(out, as_entries(r)).ravel()
        w *= weight_of(r)
    return ProbabilityVector(out, w)


def direct_sum(ps: Sequence) -> ProbabilityVector:
    """Concatenation of the distributions; weights add."""
    ps = list(ps)
    if not ps:
        raise ValueError("direct_sum needs at least one distribution")
    return ProbabilityVector(np.concatenate([as_entries(p) for p in ps]), sum(weight_of(p) for p in ps))


def _padded_cumsums(x, y):
    a = np.sort(as_entries(x))[::-1]
    b = np.sort(as_entries(y))[::-1]
    n = max(a.size, b.size)
    a = np.pad(a, (0, n - a.size))
    b = np.pad(b, (0, n - b.size))
    return np.cumsum(a), np.cumsum(b)


def majorizes(x, y, tol: float = DEFAULT_TOL) -> bool:
    """True when ``y`` majorizes ``x`` (x < y): equal totals and dominated partial sums.

    Shorter vectors are zero padded.
    """
    if abs(weight_of(x) - weight_of(y)) > tol:
        return False
    cx, cy = _padded_cumsums(x, y)
    return bool(np.all(cx <= cy + tol))


def _extended_omega(omega: np.ndarray, n: int) -> np.ndarray:
    if n <= omega.size:
        return omega
    return np.concatenate([omega, np.full(n - omega.size, omega[-1])])


def dominated_by_profile(x, profile, tol: float = DEFAULT_TOL) -> bool:
    """Check sum_{j<=k} x_j^(sorted) <= Omega_k + tol for every k."""
    if abs(weight_of(x) - profile.total) > tol:
        raise ValueError(f"weight {weight_of(x)} differs from profile total {profile.total}")
    c = np.cumsum(np.sort(as_entries(x))[::-1])
    omega = np.asarray(profile.omega, dtype=np.float64)
    n = max(c.size, omega.size)
    c = _extended_omega(c, n)
    return bool(np.all(c <= _extended_omega(omega, n) + tol))


def least_concave_majorant(values: np.ndarray) -> np.ndarray:
    """Smallest concave sequence above ``values`` on 1..n, anchored at (0, 0).

    Upper hull of the points (k, values[k-1]) plus the origin, read back at
    the integers.
    """
    y = np.concatenate([[0.0], np.asarray(values, dtype=np.float64)])
    hull = [0]
    for k in range(1, y.size):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # drop j when it lies on or below the chord i -> k
            if (y[j] - y[i]) * (k - i) <= (y[k] - y[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    xs = np.arange(y.size)
    return np.interp(xs, hull, y[hull])[1:]


def flatten(profile):
    """Replace the cumulative bound by its least concave majorant.

    The result has nonincreasing increments, i.e. it is a genuine sorted
    bound vector. Works on any dataclass profile with an ``omega`` field.
    """
    omega = least_concave_majorant(np.asarray(profile.omega, dtype=np.float64))
    omega[-1] = profile.omega[-1]
    changes = {"omega": omega}
    if hasattr(profile, "witnesses"):
        changes["witnesses"] = None
    return dataclasses.replace(profile, **changes)


def t_transform(x: np.ndarray, i: int, j: int, t: float) -> np.ndarray:
    """Mix entries i and j: x_i <- (1-t)x_i + t x_j, x_j <- t x_i + (1-t)x_j."""
    out = np.array(x, dtype=np.float64)
    xi, xj = out[i], out[j]
    out[i] = (1 - t) * xi + t * xj
    out[j] = t * xi + (1 - t) * xj
    return out


def random_majorized_pair(dim: int, seed: int, n_transforms: int | None = None):
    """Random distribution y and a T-transformed copy x with x < y.

    Between 1 and 3*dim T-transforms with t in [0, 1/2] are applied unless
    ``n_transforms`` fixes the count.
    """
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    rng = np.random.default_rng(seed)
    y = rng.dirichlet(np.ones(dim))
    if n_transforms is None:
        n_transforms = int(rng.integers(1, 3 * dim + 1))
    x = y.copy()
    for _ in range(n_transforms):
        i, j = rng.choice(dim, size=2, replace=False)
        x = t_transform(x, i, j, rng.uniform(0.0, 0.5))
    return ProbabilityVector(x, 1.0), ProbabilityVector(y, 1.0)


def uniform(dim: int, weight: float = 1.0) -> ProbabilityVector:
    return ProbabilityVector(np.full(dim, weight / dim), weight)

"""State-independent majorization bounds for L >= 2 projective measurements.

Every bound entry is a maximum of lambda_max over sums of rank-1 projectors
drawn from the measurement bases. For a selection family (I_1, ..., I_L)
the projector sum P satisfies, for any state rho,

    sum_l sum_{j in I_l} p_l(j) = tr(rho P) <= lambda_max(P).

Direct sum:      Omega_k = max_{sum |I_l| = k} lambda_max(P)
Direct product:  Omega_k = max_{sum |I_l| = k + L - 1, |I_l| >= 1} (lambda_max(P) / L)^L

The product form follows because the k largest cells of a product grid can
be taken as a down-set, whose side lengths sum to at most k + L - 1, and
AM-GM bounds the product of the side masses. Families are enumerated
exhaustively (lexicographic in the per-basis bitmasks), which restricts the
construction to d <= 8 and L <= 4.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from . import numkernel
from .majorization import dominated_by_profile, flatten
from .measures import shannon
from .quantum import OrthonormalBasis

__all__ = [
    "BoundComplexityError",
    "BoundWitness",
    "CumulativeBoundProfile",
    "dominated_by_profile",
    "dp_bound",
    "ds_bound",
    "flatten",
    "normalized_ds_bound",
    "pairwise_bound_report",
    "profile_from_omega",
]

MAX_DIM = 8
MAX_MEASUREMENTS = 4
MAX_FAMILIES = 2**24
TIE_TOL = 1e-12
_CHUNK = 1 << 15

DIRECT_PRODUCT = "direct_product"
DIRECT_SUM = "direct_sum"


class BoundComplexityError(ValueError):
    """The exhaustive family enumeration would be too large."""


@dataclass(frozen=True)
class BoundWitness:
    """Maximizing selection family for one Omega_k and its top eigenvector."""

    k: int
    selection: tuple[tuple[int, ...], ...]
    value: float
    state: np.ndarray


@dataclass(frozen=True)
class CumulativeBoundProfile:
    """Nondecreasing partial-sum bounds Omega_1 <= ... <= Omega_n = total."""

    kind: str
    num_measurements: int
    dim: int
    omega: np.ndarray
    total: float
    normalized: bool = False
    witnesses: Optional[tuple[BoundWitness, ...]] = None

    def __post_init__(self):
        om = np.array(self.omega, dtype=np.float64)
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)

    @property
    def increments(self) -> np.ndarray:
        """Omega_k - Omega_{k-1}; roundoff at the exact values 0 and 1 is snapped."""
        inc = np.diff(np.concatenate([[0.0], self.omega]))
        inc[np.abs(inc) < 1e-12] = 0.0
        inc[np.abs(inc - 1.0) < 1e-12] = 1.0
        return inc

    @property
    def printed_increments(self) -> np.ndarray:
        """Increments without trailing zeros.

        Two-measurement direct-sum bounds are conventionally quoted as
        {1} (+) W, so their leading unit increment is dropped as well.
        """
        inc = self.increments
        nz = np.nonzero(inc > 1e-12)[0]
        inc = inc[: nz[-1] + 1] if nz.size else inc[:0]
        if (
            self.kind == DIRECT_SUM
            and self.num_measurements == 2
            and not self.normalized
            and inc.size
            and abs(inc[0] - 1.0) < 1e-9
        ):
            inc = inc[1:]
        return inc

    @property
    def entropy_bits(self) -> float:
        return shannon(np.clip(self.increments, 0.0, None))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "L": self.num_measurements,
            "dim": self.dim,
            "normalized": self.normalized,
            "omega": [_sig(x) for x in self.omega],
            "increments": [_sig(x) for x in self.increments],
            "printed_increments": [_sig(x) for x in self.printed_increments],
            "entropy_bits": _sig(self.entropy_bits),
        }


def _sig(x: float) -> float:
    return float(f"{float(x):.10g}") + 0.0


def profile_from_omega(omega, kind: str, num_measurements: int, dim: int) -> CumulativeBoundProfile:
    """Wrap a user-supplied cumulative sequence (used for override hooks)."""
    om = np.asarray(omega, dtype=np.float64)
    return CumulativeBoundProfile(kind, num_measurements, dim, om, float(om[-1]))


def _check_bases(bases: Sequence[OrthonormalBasis]) -> tuple[int, int]:
    bases = list(bases)
    L = len(bases)
    if L < 2:
        raise ValueError("need at least two measurements")
    d = bases[0].dim
    if any(b.dim != d for b in bases):
        raise ValueError("all bases must share the same dimension")
    if d > MAX_DIM:
        raise BoundComplexityError(
            f"exhaustive enumeration over (2^{d})^{L} selection families is limited to d <= {MAX_DIM}"
        )
    if L > MAX_MEASUREMENTS:
        raise BoundComplexityError(f"at most {MAX_MEASUREMENTS} measurements are supported")
    if (1 << (d * L)) > MAX_FAMILIES:
        raise BoundComplexityError(f"(2^{d})^{L} selection families exceed the limit of {MAX_FAMILIES}")
    return L, d


_TABLE_CACHE: dict = {}


def clear_cache() -> None:
    """Forget memoized family tables (used by timing benchmarks)."""
    _TABLE_CACHE.clear()


def _family_table(bases: Sequence[OrthonormalBasis]):
    """lambda_max and per-basis sizes for every selection family, lex ordered.

    Family index f encodes bitmasks (m_1, ..., m_L) with m_1 most significant.
    """
    L, d = _check_bases(bases)
    key = tuple(b.vectors.tobytes() for b in bases)
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    nmask = 1 << d
    bits = (np.arange(nmask)[:, None] >> np.arange(d)) & 1
    stacks = []
    for b in bases:
        V = b.vectors
        rank1 = np.einsum("ij,kj->jik", V, V.conj())
        stacks.append(np.tensordot(bits, rank1, axes=(1, 0)))
    popcount = bits.sum(axis=1)

    n_fam = nmask**L
    lam = np.empty(n_fam)
    sizes = np.empty((n_fam, L), dtype=np.int64)
    shifts = [d * (L - 1 - l) for l in range(L)]
    for start in range(0, n_fam, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_fam))
        mats = np.zeros((idx.size, d, d), dtype=np.complex128)
        for l in range(L):
            digit = (idx >> shifts[l]) & (nmask - 1)
            mats += stacks[l][digit]
            sizes[idx, l] = popcount[digit]
        lam[idx] = numkernel.hermitian_eigmax_batch(mats)
    table = (lam, sizes)
    _TABLE_CACHE[key] = table
    return table


def _selection(f: int, L: int, d: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for l in range(L):
        mask = (f >> (d * (L - 1 - l))) & ((1 << d) - 1)
        out.append(tuple(j for j in range(d) if mask >> j & 1))
    return tuple(out)


def _argmax_first(values: np.ndarray, candidates: np.ndarray) -> int:
    best = values[candidates].max()
    return int(candidates[np.argmax(values[candidates] >= best - TIE_TOL)])


def _witness(bases, f: int, k: int, L: int, d: int, transform) -> BoundWitness:
    sel = _selection(f, L, d)
    lam, vec = numkernel.hermitian_eigpair(numkernel.projector_sum(bases, sel))
    return BoundWitness(k, sel, transform(lam), vec)


def ds_bound(bases: Sequence[OrthonormalBasis]) -> CumulativeBoundProfile:
    """Direct-sum bound: cumulative profile of length L*d with total L."""
    bases = list(bases)
    L, d = _check_bases(bases)
    lam, sizes = _family_table(bases)
    total = sizes.sum(axis=1)
    omega = np.empty(L * d)
    witnesses = []
    for k in range(1, L * d + 1):
        cand = np.nonzero(total == k)[0]
        f = _argmax_first(lam, cand)
        omega[k - 1] = lam[f]
        witnesses.append(_witness(bases, f, k, L, d, float))
    omega = np.minimum(np.maximum.accumulate(omega), float(L))
    omega[-1] = float(L)
    return CumulativeBoundProfile(DIRECT_SUM, L, d, omega, float(L), witnesses=tuple(witnesses))


def dp_bound(bases: Sequence[OrthonormalBasis]) -> CumulativeBoundProfile:
    """Direct-product bound: cumulative profile of length d^L with total 1."""
    bases = list(bases)
    L, d = _check_bases(bases)
    lam, sizes = _family_table(bases)
    total = sizes.sum(axis=1)
    full = np.all(sizes >= 1, axis=1)
    k_max = L * (d - 1) + 1
    raw = np.ones(d**L)
    witnesses = []
    for k in range(1, k_max + 1):
        cand = np.nonzero(full & (total == k + L - 1))[0]
        f = _argmax_first(lam, cand)
        raw[k - 1] = (lam[f] / L) ** L
        witnesses.append(_witness(bases, f, k, L, d, lambda v: (v / L) ** L))
    omega = np.minimum(np.maximum.accumulate(raw), 1.0)
    omega[-1] = 1.0
    return CumulativeBoundProfile(DIRECT_PRODUCT, L, d, omega, 1.0, witnesses=tuple(witnesses))


def normalized_ds_bound(bases: Sequence[OrthonormalBasis]) -> CumulativeBoundProfile:
    """Half-weighted two-measurement direct-sum bound: (1/2)p (+) (1/2)q."""
    bases = list(bases)
    if len(bases) != 2:
        raise ValueError("the normalized direct-sum bound is defined for exactly two measurements")
    prof = ds_bound(bases)
    return CumulativeBoundProfile(DIRECT_SUM, 2, prof.dim, prof.omega / 2, 1.0, normalized=True)


def pairwise_bound_report(bases: Sequence[OrthonormalBasis], labels: Optional[Sequence[str]] = None) -> dict:
    """Two-measurement bounds for every pair next to the joint L-measurement bounds."""
    bases = list(bases)
    if len(bases) < 3:
        raise ValueError("pairwise report needs at least three measurements")
    labels = list(labels) if labels is not None else [b.label or str(i) for i, b in enumerate(bases)]
    pairs = []
    for i, j in combinations(range(len(bases)), 2):
        dp = dp_bound([bases[i], bases[j]])
        ds = ds_bound([bases[i], bases[j]])
        pairs.append(
            {
                "pair": (labels[i], labels[j]),
                "dp": dp,
                "ds": ds,
                "dp_entropy": dp.entropy_bits,
                "ds_entropy": ds.entropy_bits,
            }
        )
    dp = dp_bound(bases)
    ds = ds_bound(bases)
    return {
        "pairs": pairs,
        "joint": {"dp": dp, "ds": ds, "dp_entropy": dp.entropy_bits, "ds_entropy": ds.entropy_bits},
    }

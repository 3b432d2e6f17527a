"""Qudit states, orthonormal measurement bases and Born-rule statistics."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Union

import numpy as np

ORTHONORMAL_TOL = 1e-10
NORM_TOL = 1e-10
CLAMP_TOL = 1e-12


class BasisFileError(ValueError):
    """A basis file could not be parsed or does not hold an orthonormal basis."""


@dataclass(frozen=True)
class ProbabilityVector:
    """Nonnegative entries with a declared total mass ``weight``.

    Entries down to -1e-12 are clamped to zero; anything more negative is an
    error. If ``weight`` is omitted it is taken from the entries.
    """

    entries: np.ndarray
    weight: float = None  # type: ignore[assignment]

    def __post_init__(self):
        x = np.array(self.entries, dtype=np.float64).ravel()
        if x.size and x.min() < -CLAMP_TOL:
            raise ValueError(f"negative probability {x.min():.3e}")
        x = np.clip(x, 0.0, None)
        x.setflags(write=False)
        object.__setattr__(self, "entries", x)
        total = float(x.sum())
        if self.weight is None:
            object.__setattr__(self, "weight", total)
        else:
            object.__setattr__(self, "weight", float(self.weight))
            if abs(total - self.weight) > 1e-9:
                raise ValueError(f"entries sum to {total}, declared weight {self.weight}")

    def __len__(self):
        return self.entries.size

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def as_entries(x) -> np.ndarray:
    if isinstance(x, ProbabilityVector):
        return x.entries
    return np.asarray(x, dtype=np.float64).ravel()


def weight_of(x) -> float:
    if isinstance(x, ProbabilityVector):
        return x.weight
    return float(np.sum(x))


@dataclass(frozen=True)
class OrthonormalBasis:
    """d orthonormal column vectors, labelled.

    Parameters
    ----------
    vectors : (d, d) complex array
        Column ``j`` is the j-th measurement eigenvector.
    label : str
    """

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.array(self.vectors, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 1:
            raise ValueError(f"basis must be a square d x d matrix, got {v.shape}")
        err = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0])))
        if err > ORTHONORMAL_TOL:
            raise ValueError(f"basis {self.label!r} not orthonormal (error {err:.2e})")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, j) -> np.ndarray:
        return self.vectors[:, j]

    def permuted(self, order) -> "OrthonormalBasis":
        return OrthonormalBasis(self.vectors[:, list(order)], self.label)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vectors": [[[float(z.real), float(z.imag)] for z in self.vectors[:, j]] for j in range(self.dim)],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj) -> "OrthonormalBasis":
        try:
            dim = int(obj["dim"])
            cols = [[complex(float(re), float(im)) for re, im in col] for col in obj["vectors"]]
            label = str(obj.get("label", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise BasisFileError(f"malformed basis object: {exc}") from exc
        if len(cols) != dim or any(len(c) != dim for c in cols):
            raise BasisFileError(f"expected {dim} vectors of length {dim}")
        try:
            return cls(np.array(cols).T, label)
        except ValueError as exc:
            raise BasisFileError(str(exc)) from exc


def load_basis(path: Union[str, Path]) -> OrthonormalBasis:
    """Read a basis from the JSON file format ``{"dim", "vectors", "label"}``."""
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BasisFileError(f"cannot read basis file {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise BasisFileError("basis file must contain a JSON object")
    basis = OrthonormalBasis.from_json(obj)
    if not basis.label:
        basis = OrthonormalBasis(basis.vectors, Path(path).stem)
    return basis


def save_basis(basis: OrthonormalBasis, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(basis.to_json(), indent=2) + "\n")


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128).ravel()
        norm = np.vdot(a, a).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm^2 is {norm}, expected 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        m = (m + m.conj().T) / 2
        if abs(np.trace(m).real - 1.0) > NORM_TOL:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(m)[0] < -NORM_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


State = Union[PureState, DensityMatrix]


def _clamp_probs(p: np.ndarray) -> np.ndarray:
    if p.min() < -CLAMP_TOL:
        raise ValueError(f"negative Born probability {p.min():.3e}")
    return np.clip(p, 0.0, 1.0)


def born_probabilities(state, basis: OrthonormalBasis) -> ProbabilityVector:
    """Outcome distribution p_j = <v_j|rho|v_j> of measuring ``state`` in ``basis``.

    ``state`` may be a :class:`PureState`, a :class:`DensityMatrix`, or a
    raw amplitude vector / density matrix.
    """
    if isinstance(state, PureState):
        psi, rho = state.amplitudes, None
    elif isinstance(state, DensityMatrix):
        psi, rho = None, state.matrix
    else:
        arr = np.asarray(state, dtype=np.complex128)
        psi, rho = (arr, None) if arr.ndim == 1 else (None, arr)
    size = psi.size if psi is not None else rho.shape[0]
    if size != basis.dim:
        raise ValueError(f"state dimension {size} does not match basis dimension {basis.dim}")
    V = basis.vectors
    if psi is not None:
        p = np.abs(V.conj().T @ psi) ** 2
    else:
        p = np.einsum("ij,ik,kj->j", V.conj(), rho, V).real
    return ProbabilityVector(_clamp_probs(p), 1.0)


def born_probabilities_batch(states: np.ndarray, basis: OrthonormalBasis) -> np.ndarray:
    """Rows of ``states`` (amplitude vectors) measured in ``basis``; returns (N, d)."""
    return np.abs(np.asarray(states) @ basis.vectors.conj()) ** 2


def state_family(theta: float, phi: float) -> PureState:
    """(cos t sin f, cos t cos f, sin t, 0), the four-level probe family."""
    c = np.cos(theta)
    return PureState(np.array([c * np.sin(phi), c * np.cos(phi), np.sin(theta), 0.0]))


@lru_cache(maxsize=None)
def builtin_bases() -> dict[str, OrthonormalBasis]:
    """The two-measurement pair A, B and the three-measurement triple C1, C2, C3."""
    e = np.eye(4)
    r2, r3, r6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)
    b = np.array(
        [
            [1, -1j, -1j, 1],
            [1, -1j, 1j, -1],
            [1, 1j, -1j, -1],
            [1, 1j, 1j, 1],
        ]
    ).T / 2
    c2 = np.column_stack([e[0], (e[2] + e[3]) / r2, (e[1] + e[2] - e[3]) / r3, (2 * e[1] - e[2] + e[3]) / r6])
    c3 = np.column_stack([(e[2] + e[3]) / r2, e[1], (e[0] + e[2] - e[3]) / r3, (2 * e[0] - e[2] + e[3]) / r6])
    return {
        "A": OrthonormalBasis(e, "A"),
        "B": OrthonormalBasis(b, "B"),
        "C1": OrthonormalBasis(e, "C1"),
        "C2": OrthonormalBasis(c2, "C2"),
        "C3": OrthonormalBasis(c3, "C3"),
    }


def overlap_matrix(b1: OrthonormalBasis, b2: OrthonormalBasis) -> np.ndarray:
    """Entry (j, k) is <v_j^(1)|v_k^(2)>; unitary for two orthonormal bases."""
    if b1.dim != b2.dim:
        raise ValueError("bases have different dimensions")
    return b1.vectors.conj().T @ b2.vectors


def haar_random_states(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random pure states as rows of an (n, dim) array."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random_state(dim: int, seed: int) -> PureState:
    return PureState(haar_random_states(dim, 1, np.random.default_rng(seed))[0])


def random_mixed_state(dim: int, seed: int) -> DensityMatrix:
    """Dirichlet-weighted mixture of 2 to 4 Haar-random pure states."""
    rng = np.random.default_rng(seed)
    r = int(rng.integers(2, 5))
    psis = haar_random_states(dim, r, rng)
    w = rng.dirichlet(np.ones(r))
    rho = np.einsum("i,ij,ik->jk", w, psis, psis.conj())
    return DensityMatrix(rho)

"""Numerical stand-ins for the photonic experiments.

Sweeps over the four-level state family, xi comparisons between the
direct-product and direct-sum bounds, multinomial shot noise at a given
count budget, and Monte Carlo soundness checks of the bounds.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import numkernel
from .bounds import CumulativeBoundProfile, dp_bound, ds_bound, normalized_ds_bound
from .majorization import direct_product, direct_sum
from .measures import UncertaintyMeasure, get_measure, shannon
from .quantum import (
    OrthonormalBasis,
    ProbabilityVector,
    born_probabilities,
    born_probabilities_batch,
    builtin_bases,
    haar_random_states,
    load_basis,
    state_family,
)

DEFAULT_SEED = 0x5EED
DEFAULT_COUNTS = 4000
DEFAULT_REPETITIONS = 100
DEFAULT_STEPS = 101
_PREFIXES = "pqrstuvw"


def resolve_basis(name: Union[str, OrthonormalBasis]) -> OrthonormalBasis:
    """Built-in basis by name (A, B, C1, C2, C3) or a JSON basis file path."""
    if isinstance(name, OrthonormalBasis):
        return name
    known = builtin_bases()
    if name in known:
        return known[name]
    return load_basis(name)


def resolve_bases(names) -> list[OrthonormalBasis]:
    return [resolve_basis(n) for n in names]


@dataclass(frozen=True)
class XiValues:
    xi_dp: float
    xi_ds: float
    xi: float


def _profiles(bases):
    return dp_bound(bases), ds_bound(bases)


def _bound_value(measure: UncertaintyMeasure, profile: CumulativeBoundProfile) -> float:
    return measure(np.clip(profile.increments, 0.0, None))


def xi_quantities(state, bases: Sequence[OrthonormalBasis], measure: UncertaintyMeasure, profiles=None) -> XiValues:
    """Gaps between joint uncertainties and their bounds.

    xi_ds = U(p1 (+) ... ) - U(omega_ds), xi_dp = U(p1 (x) ... ) - U(omega_dp),
    xi = U(omega_ds) - U(p1 (x) ...). Undefined measure values give NaN.
    """
    bases = list(bases)
    prof_dp, prof_ds = profiles if profiles is not None else _profiles(bases)
    ps = [born_probabilities(state, b) for b in bases]
    u_dp = measure(direct_product(*ps))
    u_ds = measure(direct_sum(ps))
    w_dp = _bound_value(measure, prof_dp)
    w_ds = _bound_value(measure, prof_ds)
    return XiValues(u_dp - w_dp, u_ds - w_ds, w_ds - u_dp)


# --------------------------------------------------------------------------
# shot noise


@dataclass(frozen=True)
class CountSample:
    counts: np.ndarray
    estimate: ProbabilityVector


def _normalized(p) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=np.float64), 0.0, None)
    return p / p.sum()


def simulate_counts(state, basis: OrthonormalBasis, n: int = DEFAULT_COUNTS, seed: int = DEFAULT_SEED) -> CountSample:
    """Multinomial draw of ``n`` detection events from the Born distribution."""
    if n < 1:
        raise ValueError("need at least one count")
    p = _normalized(born_probabilities(state, basis).entries)
    counts = np.random.default_rng(seed).multinomial(n, p)
    return CountSample(counts, ProbabilityVector(counts / n, 1.0))


def noisy_measure_sum(
    dists: Sequence[np.ndarray],
    measure: UncertaintyMeasure,
    n: int,
    repetitions: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Sum over measurements of the measure on count-estimated distributions.

    Returns one value per repetition.
    """
    totals = np.zeros(repetitions)
    for p in dists:
        est = rng.multinomial(n, _normalized(p), size=repetitions) / n
        totals += np.array([measure(row) for row in est])
    return totals


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class AxisRange:
    start: float
    stop: float
    steps: int = 1

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be at least 1")

    @classmethod
    def fixed(cls, value: float) -> "AxisRange":
        return cls(value, value, 1)

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class NoiseSpec:
    counts_per_setting: int = DEFAULT_COUNTS
    repetitions: int = DEFAULT_REPETITIONS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.counts_per_setting < 1 or self.repetitions < 2:
            raise ValueError("noise needs counts >= 1 and repetitions >= 2")


@dataclass(frozen=True)
class SweepSpec:
    theta: AxisRange
    phi: AxisRange
    bases: tuple = ("A", "B")
    measure: str = "shannon"
    noise: Optional[NoiseSpec] = None
    normalized: bool = False
    name: str = ""


@dataclass
class SweepPoint:
    theta: float
    phi: float
    distributions: list
    values: list
    measure_sum: float
    xi: XiValues
    noisy_mean: float = math.nan
    noisy_std: float = math.nan
    extras: dict = field(default_factory=dict)


@dataclass
class SweepResult:
    spec: SweepSpec
    labels: list
    symbol: str
    points: list

    def column(self, name: str) -> np.ndarray:
        idx = self.header().index(name)
        return np.array([row[idx] for row in self.rows()], dtype=np.float64)

    def header(self) -> list[str]:
        d = len(self.points[0].distributions[0]) if self.points else 0
        cols = ["theta", "phi"]
        for l in range(len(self.labels)):
            cols += [f"{_PREFIXES[l]}{j}" for j in range(d)]
        cols += [f"{self.symbol}_{lab}" for lab in self.labels] + [f"{self.symbol}_sum"]
        cols += ["xi_dp", "xi_ds", "xi", "noisy_mean", "noisy_std"]
        if self.spec.normalized:
            cols += [f"{self.symbol}_dp", f"{self.symbol}_nds", "bound_dp", "bound_nds", "margin_nds"]
        return cols

    def rows(self) -> list[list[float]]:
        out = []
        for pt in self.points:
            row = [pt.theta, pt.phi]
            for p in pt.distributions:
                row += list(p)
            row += list(pt.values) + [pt.measure_sum]
            row += [pt.xi.xi_dp, pt.xi.xi_ds, pt.xi.xi, pt.noisy_mean, pt.noisy_std]
            if self.spec.normalized:
                e = pt.extras
                row += [e["joint_dp"], e["joint_nds"], e["bound_dp"], e["bound_nds"], e["margin_nds"]]
            out.append(row)
        return out

    def to_csv(self, target=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        for row in self.rows():
            writer.writerow([_fmt(x) for x in row])
        text = buf.getvalue()
        if target is not None:
            Path(target).write_text(text)
        return text

    def summary(self) -> dict:
        """Min/max of the xi and measure columns plus the ordering counts."""
        out = {"preset": self.spec.name or None, "points": len(self.points)}
        names = ["xi_dp", "xi_ds", "xi", f"{self.symbol}_sum"]
        if self.spec.normalized:
            names.append("margin_nds")
        for name in names:
            col = self.column(name)
            out[f"min_{name}"] = _fmt_num(np.nanmin(col)) if np.isfinite(col).any() else None
            out[f"max_{name}"] = _fmt_num(np.nanmax(col)) if np.isfinite(col).any() else None
        gap = self.column("xi_dp") - self.column("xi_ds")
        if np.isfinite(gap).any():
            out["max_xi_dp_minus_xi_ds"] = _fmt_num(np.nanmax(gap))
            out["points_xi_dp_below_xi_ds"] = int(np.sum(gap < 0))
            out["points_xi_dp_above_xi_ds"] = int(np.sum(gap > 0))
        if self.spec.noise is not None:
            out["max_noisy_std"] = _fmt_num(np.nanmax(self.column("noisy_std")))
        return out


def _fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x + 0.0:.10g}"


def _fmt_num(x) -> float:
    return float(f"{float(x):.10g}") + 0.0


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate the state family on the (theta, phi) grid, theta-major order.

    Noise seeds are derived per grid point from (seed, point index), so the
    output does not depend on evaluation order.
    """
    bases = resolve_bases(spec.bases)
    measure = get_measure(spec.measure)
    profiles = _profiles(bases)
    if spec.normalized:
        if len(bases) != 2:
            raise ValueError("normalized sweeps need exactly two measurements")
        nds = normalized_ds_bound(bases)
        bound_dp = shannon(np.clip(profiles[0].increments, 0, None))
        bound_nds = nds.entropy_bits
    labels = [b.label or f"M{i + 1}" for i, b in enumerate(bases)]

    points = []
    index = 0
    for theta in spec.theta.values():
        for phi in spec.phi.values():
            state = state_family(theta, phi)
            dists = [born_probabilities(state, b).entries for b in bases]
            values = [measure(p) for p in dists]
            pt = SweepPoint(
                float(theta),
                float(phi),
                dists,
                values,
                float(np.sum(values)),
                xi_quantities(state, bases, measure, profiles),
            )
            if spec.noise is not None:
                rng = np.random.default_rng([spec.noise.seed, index])
                sample = noisy_measure_sum(
                    dists, measure, spec.noise.counts_per_setting, spec.noise.repetitions, rng
                )
                pt.noisy_mean = float(sample.mean())
                pt.noisy_std = float(sample.std(ddof=1))
            if spec.normalized:
                joint_nds = shannon(direct_sum([p / 2 for p in dists]))
                pt.extras = {
                    "joint_dp": shannon(direct_product(*dists)),
                    "joint_nds": joint_nds,
                    "bound_dp": bound_dp,
                    "bound_nds": bound_nds,
                    "margin_nds": joint_nds - bound_nds,
                }
            points.append(pt)
            index += 1
    return SweepResult(spec, labels, measure.symbol or measure.name, points)


_FULL_TURN = AxisRange(0.0, 2 * math.pi, DEFAULT_STEPS)
_PAIR = ("A", "B")
_TRIPLE = ("C1", "C2", "C3")


def _preset(name, theta, phi, bases, measure, normalized=False):
    return SweepSpec(theta, phi, bases, measure, None, normalized, name)


PRESETS: dict[str, SweepSpec] = {
    "2a": _preset("2a", AxisRange.fixed(math.pi / 4), _FULL_TURN, _PAIR, "s-minus-m"),
    "2b": _preset("2b", _FULL_TURN, AxisRange.fixed(math.pi / 4), _PAIR, "s-minus-m"),
    "2c": _preset("2c", AxisRange.fixed(math.pi), _FULL_TURN, _TRIPLE, "s-minus-m"),
    "2d": _preset("2d", _FULL_TURN, AxisRange.fixed(math.pi / 2), _TRIPLE, "s-minus-m"),
    "3a": _preset("3a", AxisRange.fixed(math.pi / 4), _FULL_TURN, _PAIR, "shannon"),
    "3b": _preset("3b", _FULL_TURN, AxisRange.fixed(math.pi / 4), _PAIR, "shannon"),
    "3c": _preset("3c", AxisRange.fixed(math.pi), _FULL_TURN, _TRIPLE, "shannon"),
    "3d": _preset("3d", _FULL_TURN, AxisRange.fixed(math.pi / 2), _TRIPLE, "shannon"),
    "appendixA": _preset("appendixA", AxisRange.fixed(math.pi / 4), _FULL_TURN, _PAIR, "shannon", True),
}


def preset(name: str, noise: Optional[NoiseSpec] = None) -> SweepSpec:
    try:
        spec = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return replace(spec, noise=noise)


# --------------------------------------------------------------------------
# Monte Carlo soundness


@dataclass(frozen=True)
class VerificationReport:
    kind: str
    trials: int
    mixed_trials: int
    violations: int
    worst_margin: float
    worst_state: Optional[np.ndarray]

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "trials": self.trials,
            "mixed_trials": self.mixed_trials,
            "violations": self.violations,
            "worst_margin": _fmt_num(self.worst_margin),
        }
        if self.violations and self.worst_state is not None:
            s = np.asarray(self.worst_state)
            out["worst_state"] = [[_fmt_num(z.real), _fmt_num(z.imag)] for z in s.ravel()]
            out["worst_state_shape"] = list(s.shape)
        return out


_KINDS = ("dp", "ds", "nds")


def bound_for(bases: Sequence[OrthonormalBasis], kind: str) -> CumulativeBoundProfile:
    if kind == "dp":
        return dp_bound(bases)
    if kind == "ds":
        return ds_bound(bases)
    if kind == "nds":
        return normalized_ds_bound(bases)
    raise ValueError(f"unknown bound kind {kind!r}; choose from {', '.join(_KINDS)}")


def joint_rows(prob_rows: Sequence[np.ndarray], kind: str) -> np.ndarray:
    """Batched joint distributions: row-wise direct product or direct sum."""
    if kind == "dp":
        out = prob_rows[0]
        for p in prob_rows[1:]:
            out = (out[:, :, None] * p[:, None, :]).reshape(out.shape[0], -1)
        return out
    out = np.concatenate(prob_rows, axis=1)
    return out / 2 if kind == "nds" else out


def _mixed_probabilities(bases, n, rng):
    d = bases[0].dim
    psis = haar_random_states(d, 4 * n, rng).reshape(n, 4, d)
    r = rng.integers(2, 5, size=n)
    w = rng.standard_exponential((n, 4)) * (np.arange(4)[None, :] < r[:, None])
    w /= w.sum(axis=1, keepdims=True)
    rows = [np.einsum("ni,nij->nj", w, np.abs(psis @ b.vectors.conj()) ** 2) for b in bases]
    return rows, psis, w


def monte_carlo_verify(
    bases: Sequence[OrthonormalBasis],
    kind: str,
    trials: int,
    seed: int = DEFAULT_SEED,
    mixed_trials: Optional[int] = None,
    profile: Optional[CumulativeBoundProfile] = None,
    tol: float = 1e-9,
    chunk: int = 20000,
) -> VerificationReport:
    """Check the bound on Haar-random pure states and random mixtures.

    ``worst_margin`` is the smallest slack Omega_k - (partial sum) seen over
    all samples and all k except the last, which only restates the totals.
    """
    bases = list(bases)
    if trials < 1:
        raise ValueError("trials must be positive")
    if mixed_trials is None:
        mixed_trials = trials // 10
    prof = profile if profile is not None else bound_for(bases, kind)
    rng = np.random.default_rng(seed)
    d = bases[0].dim

    violations = 0
    worst = math.inf
    worst_state = None

    def scan(rows, states):
        nonlocal violations, worst, worst_state
        joint = joint_rows(rows, kind)
        slack = numkernel.min_slack_batch(joint, prof.omega, skip_last=True)
        bad = (slack < -tol) | (np.abs(joint.sum(axis=1) - prof.total) > tol)
        violations += int(bad.sum())
        i = int(np.argmin(slack))
        if slack[i] < worst:
            worst = float(slack[i])
            worst_state = states(i)

    for start in range(0, trials, chunk):
        n = min(chunk, trials - start)
        psi = haar_random_states(d, n, rng)
        scan([born_probabilities_batch(psi, b) for b in bases], lambda i: psi[i])
    for start in range(0, mixed_trials, chunk):
        n = min(chunk, mixed_trials - start)
        rows, psis, w = _mixed_probabilities(bases, n, rng)
        scan(rows, lambda i: np.einsum("i,ij,ik->jk", w[i], psis[i], psis[i].conj()))

    return VerificationReport(kind, trials, mixed_trials, violations, worst, worst_state)


def _row_shannon(rows: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(rows > 0, -rows * np.log2(rows), 0.0)
    return terms.sum(axis=1)


@dataclass(frozen=True)
class ChainReport:
    """H(product) = H(sum) >= H(omega_ds) >= H(omega_dp) on random states."""

    trials: int
    max_additivity_gap: float
    min_floor_margin: float
    ds_entropy: float
    dp_entropy: float
    holds: bool

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "max_additivity_gap": _fmt_num(self.max_additivity_gap),
            "min_floor_margin": _fmt_num(self.min_floor_margin),
            "ds_entropy": _fmt_num(self.ds_entropy),
            "dp_entropy": _fmt_num(self.dp_entropy),
            "holds": self.holds,
        }


def shannon_chain_check(
    bases: Sequence[OrthonormalBasis], trials: int, seed: int = DEFAULT_SEED, tol: float = 1e-9
) -> ChainReport:
    bases = list(bases)
    rng = np.random.default_rng(seed)
    psi = haar_random_states(bases[0].dim, trials, rng)
    rows = [born_probabilities_batch(psi, b) for b in bases]
    h_dp = _row_shannon(joint_rows(rows, "dp"))
    h_ds = _row_shannon(joint_rows(rows, "ds"))
    ds_h = ds_bound(bases).entropy_bits
    dp_h = dp_bound(bases).entropy_bits
    gap = float(np.max(np.abs(h_dp - h_ds)))
    floor = float(np.min(h_ds - ds_h))
    return ChainReport(trials, gap, floor, ds_h, dp_h, gap <= tol and floor >= -tol and ds_h >= dp_h - tol)

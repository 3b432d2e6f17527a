"""Command line interface: ``murlab bound|sweep|verify|measures|simulate``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 semantic
error (dimension / arity / complexity violations).
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from .bounds import BoundComplexityError, flatten, profile_from_omega
from .experiments import (
    DEFAULT_COUNTS,
    DEFAULT_REPETITIONS,
    DEFAULT_SEED,
    DEFAULT_STEPS,
    PRESETS,
    AxisRange,
    NoiseSpec,
    SweepSpec,
    bound_for,
    monte_carlo_verify,
    noisy_measure_sum,
    preset,
    resolve_bases,
    run_sweep,
    shannon_chain_check,
    simulate_counts,
)
from .measures import REGISTRY, check_additivity, get_measure
from .quantum import BasisFileError, ProbabilityVector, born_probabilities, state_family

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_SEMANTIC = 0, 1, 2, 3


class InputError(Exception):
    pass


_ANGLE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text: str) -> float:
    """Parse ``1.2``, ``pi``, ``pi/4``, ``3pi/2`` or ``-2*pi``."""
    m = _ANGLE.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise InputError(f"cannot parse angle {text!r}")
    coef, has_pi, denom = m.groups()
    value = float(coef) if coef not in (None, "+", "-") else (-1.0 if coef == "-" else 1.0)
    if has_pi:
        value *= math.pi
    if denom:
        value /= float(denom)
    return value


def parse_axis(text: str, steps: int) -> AxisRange:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return AxisRange(parse_angle(lo), parse_angle(hi), steps)
    return AxisRange.fixed(parse_angle(text))


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse number list {text!r}") from None


def _bases(text: str):
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise InputError("no bases given")
    return resolve_bases(names)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --------------------------------------------------------------------------


def cmd_bound(args) -> int:
    bases = _bases(args.bases)
    kind = "nds" if args.normalized else args.kind
    if args.normalized and args.kind != "ds":
        raise InputError("--normalized applies to --kind ds only")
    profile = bound_for(bases, kind)
    if args.flatten:
        profile = flatten(profile)
    out = profile.to_json()
    out["bases"] = [b.label for b in bases]
    _emit(_dumps(out), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    noise = None
    if args.noise is not None:
        noise = NoiseSpec(args.noise, args.reps, args.seed)
    if args.figure:
        if args.figure not in PRESETS:
            raise InputError(f"unknown preset {args.figure!r}; choose from {', '.join(PRESETS)}")
        spec = preset(args.figure, noise)
    else:
        spec = SweepSpec(
            theta=parse_axis(args.theta, args.steps),
            phi=parse_axis(args.phi, args.steps),
            bases=tuple(s.strip() for s in args.bases.split(",")),
            measure=args.measure,
            noise=noise,
            normalized=args.normalized,
        )
    result = run_sweep(spec)
    text = result.to_csv()
    summary = _dumps(result.summary())
    if args.out:
        Path(args.out).write_text(text)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(text)
        sys.stderr.write(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    bases = _bases(args.bases)
    override = None
    if args.omega_override:
        true = bound_for(bases, args.kind)
        override = profile_from_omega(_floats(args.omega_override), true.kind, true.num_measurements, true.dim)
    report = monte_carlo_verify(
        bases, args.kind, args.trials, args.seed, args.mixed, profile=override, tol=args.tol
    )
    chain = shannon_chain_check(bases, min(args.trials, 10000), args.seed, tol=1e-9)
    out = {"bases": [b.label for b in bases], "monte_carlo": report.to_json(), "shannon_chain": chain.to_json()}
    _emit(_dumps(out), args.out)
    if report.violations or not chain.holds:
        if report.violations:
            sys.stderr.write(f"bound violated; worst offender state:\n{np.array2string(report.worst_state, precision=6)}\n")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_measures(args) -> int:
    if not args.all and not args.measure:
        raise InputError("give --measure NAME or --all")
    measures = list(REGISTRY.values()) if args.all else [get_measure(args.measure)]
    try:
        dist = ProbabilityVector(_floats(args.dist)) if args.dist else None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = {"values": {}, "additivity": {}}
    undefined = []
    for m in measures:
        if dist is not None:
            v = m(dist)
            result["values"][m.name] = None if math.isnan(v) else float(f"{v:.10g}") + 0.0
            if math.isnan(v):
                undefined.append(m.name)
        rep = check_additivity(m, args.trials, args.seed)
        result["additivity"][m.name] = {
            "dp_additive": rep.dp_additive,
            "ds_additive": rep.ds_additive,
            "super_additive": rep.super_additive,
            "dp_violation": float(f"{rep.dp_violation:.4g}"),
            "ds_violation": float(f"{rep.ds_violation:.4g}"),
        }
    if args.json:
        text = _dumps(result)
    else:
        lines = []
        if dist is not None:
            lines.append(f"{'measure':<14}{'value':>16}")
            for name, v in result["values"].items():
                lines.append(f"{name:<14}{'undefined' if v is None else format(v, '.10g'):>16}")
            lines.append("")
        lines.append(f"{'measure':<14}{'dp-additive':>13}{'ds-additive':>13}{'verdict':>17}")
        for name, r in result["additivity"].items():
            verdict = "super-additive" if r["super_additive"] else (
                "dp-additive" if r["dp_additive"] else "ds-additive" if r["ds_additive"] else "neither"
            )
            lines.append(f"{name:<14}{str(r['dp_additive']):>13}{str(r['ds_additive']):>13}{verdict:>17}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.strict and undefined:
        sys.stderr.write(f"undefined value for: {', '.join(undefined)}\n")
        return EXIT_INPUT
    return EXIT_OK


def cmd_simulate(args) -> int:
    bases = _bases(args.basis)
    state = state_family(parse_angle(args.theta), parse_angle(args.phi))
    out = {"theta": parse_angle(args.theta), "phi": parse_angle(args.phi), "counts_per_setting": args.counts, "measurements": []}
    for i, b in enumerate(bases):
        sample = simulate_counts(state, b, args.counts, args.seed + i)
        entry = {
            "basis": b.label,
            "probabilities": [float(f"{x:.10g}") for x in born_probabilities(state, b).entries],
            "counts": [int(c) for c in sample.counts],
            "estimate": [float(f"{x:.10g}") for x in sample.estimate.entries],
        }
        if args.reps > 1:
            rng = np.random.default_rng([args.seed, i])
            vals = noisy_measure_sum([born_probabilities(state, b).entries], get_measure("shannon"), args.counts, args.reps, rng)
            entry["shannon_mean"] = float(f"{vals.mean():.10g}")
            entry["shannon_std"] = float(f"{vals.std(ddof=1):.10g}")
        out["measurements"].append(entry)
    _emit(_dumps(out), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED, help="RNG seed (default 0x5EED)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tol", type=float, default=1e-9, help="order-check tolerance")

    parser = argparse.ArgumentParser(prog="murlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="compute a bound profile")
    p.add_argument("--bases", required=True, help="comma list of A,B,C1,C2,C3 or basis JSON paths")
    p.add_argument("--kind", choices=["dp", "ds"], required=True)
    p.add_argument("--normalized", action="store_true", help="half-weighted direct sum (two bases)")
    p.add_argument("--flatten", action="store_true", help="least concave majorant of the profile")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", parents=[common], help="evaluate the state family on a grid")
    p.add_argument("--figure", help=f"preset: {', '.join(PRESETS)}")
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--phi", default="0:2pi")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--measure", choices=list(REGISTRY), default="shannon")
    p.add_argument("--bases", default="A,B")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--noise", type=int, metavar="N", help="counts per setting")
    p.add_argument("--reps", type=int, default=DEFAULT_REPETITIONS)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="Monte Carlo soundness check")
    p.add_argument("--bases", required=True)
    p.add_argument("--kind", choices=["dp", "ds", "nds"], required=True)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--mixed", type=int, default=None, help="mixed-state trials (default trials/10)")
    p.add_argument("--omega-override", help="comma list of cumulative Omega values (test hook)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("measures", parents=[common], help="evaluate measures and additivity")
    p.add_argument("--measure", choices=list(REGISTRY))
    p.add_argument("--all", action="store_true")
    p.add_argument("--dist", help="comma list of entries")
    p.add_argument("--strict", action="store_true", help="exit 2 on undefined values")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("simulate", parents=[common], help="multinomial count simulation")
    p.add_argument("--basis", default="A", help="comma list of bases")
    p.add_argument("--theta", default="pi/4")
    p.add_argument("--phi", default="pi/4")
    p.add_argument("--counts", type=int, default=DEFAULT_COUNTS)
    p.add_argument("--reps", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, BasisFileError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (BoundComplexityError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SEMANTIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

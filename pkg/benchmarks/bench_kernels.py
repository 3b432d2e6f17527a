"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--batch 4096]

Times the batched eigen solver, the batched slack scan and a full bound
construction under each backend, and checks that both give the same answers.
"""
import argparse
import timeit

import numpy as np

from murlab import _fallback, bounds, numkernel
from murlab.quantum import builtin_bases

try:
    from murlab import _kernels
except ImportError:
    _kernels = None


def _hermitian_stack(rng, count, n):
    x = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    return (x + np.conj(np.swapaxes(x, 1, 2))) / 2


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _bound(impl, bases):
    saved = numkernel._impl
    numkernel._impl = impl
    try:
        bounds.clear_cache()
        return bounds.dp_bound(bases).omega, bounds.ds_bound(bases).omega
    finally:
        numkernel._impl = saved
        bounds.clear_cache()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--batch", type=int, default=4096)
    args = parser.parse_args(argv)

    backends = [("python", _fallback)] + ([("compiled", _kernels)] if _kernels is not None else [])
    rng = np.random.default_rng(0)
    b = builtin_bases()
    triple = [b["C1"], b["C2"], b["C3"]]
    rows = rng.dirichlet(np.ones(64), size=20 * args.batch)
    omega = np.cumsum(np.sort(rng.dirichlet(np.ones(64)))[::-1])

    cases = []
    for n in (4, 8, 16):
        mats = _hermitian_stack(rng, args.batch, n)
        cases.append((f"eigmax_batch n={n} x{args.batch}", lambda impl, m=mats: impl.eigmax_batch(m)))
    cases.append((f"min_slack_batch 64 x{rows.shape[0]}", lambda impl: impl.min_slack_batch(rows, omega, True)))
    cases.append(("dp+ds bound (C1,C2,C3)", lambda impl: _bound(impl, triple)))

    print(f"{'case':<34}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for label, fn in cases:
        results = [fn(impl) for _, impl in backends]
        for r in results[1:]:
            a = np.concatenate([np.ravel(x) for x in (r if isinstance(r, tuple) else (r,))])
            ref = np.concatenate([np.ravel(x) for x in (results[0] if isinstance(results[0], tuple) else (results[0],))])
            assert np.max(np.abs(a - ref)) < 1e-10, label
        times = [_best(lambda impl=impl: fn(impl), args.repeat) for _, impl in backends]
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{label:<34}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()

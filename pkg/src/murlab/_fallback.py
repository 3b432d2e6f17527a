"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

The Jacobi sweep is vectorized over the batch axis: every matrix in the
stack sees the same cyclic pivot order, matrices that have already
converged (or whose pivot is zero) get an identity rotation.
"""
import numpy as np

MAX_SWEEPS = 64


def _sweep_all(a, v=None):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return _sweep(a, v)


def _sweep(a, v):
    n = a.shape[-1]
    fro = np.sum(np.abs(a) ** 2, axis=(1, 2))
    iu = np.triu_indices(n, 1)
    for _ in range(MAX_SWEEPS):
        off = np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1)
        active = off > 1e-32 * fro
        if not active.any():
            break
        for p in range(n):
            for q in range(p + 1, n):
                b = a[:, p, q]
                babs = np.hypot(b.real, b.imag)
                live = active & (babs > 1e-300)
                if not live.any():
                    continue
                safe = np.where(live, babs, 1.0)
                ph = np.where(live, b / safe, 1.0)
                theta = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
                t = np.where(
                    theta >= 0.0,
                    1.0 / (theta + np.sqrt(theta * theta + 1.0)),
                    -1.0 / (-theta + np.sqrt(theta * theta + 1.0)),
                )
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                jpp = c.astype(complex)
                jpq = s.astype(complex)
                jqp = -s * ph.conj()
                jqq = c * ph.conj()

                x = a[:, :, p].copy()
                y = a[:, :, q].copy()
                a[:, :, p] = x * jpp[:, None] + y * jqp[:, None]
                a[:, :, q] = x * jpq[:, None] + y * jqq[:, None]
                x = a[:, p, :].copy()
                y = a[:, q, :].copy()
                a[:, p, :] = jpp.conj()[:, None] * x + jqp.conj()[:, None] * y
                a[:, q, :] = jpq.conj()[:, None] * x + jqq.conj()[:, None] * y
                a[live, p, q] = 0.0
                a[live, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real
                if v is not None:
                    x = v[:, :, p].copy()
                    y = v[:, :, q].copy()
                    v[:, :, p] = x * jpp[:, None] + y * jqp[:, None]
                    v[:, :, q] = x * jpq[:, None] + y * jqq[:, None]
    return a


def eigmax_batch(mats):
    a = np.array(mats, dtype=np.complex128, copy=True)
    if a.shape[0] == 0:
        return np.empty(0)
    _sweep_all(a)
    return np.max(np.real(np.diagonal(a, axis1=1, axis2=2)), axis=1)


def jacobi_eigh(mat):
    a = np.array(mat, dtype=np.complex128, copy=True)[None]
    n = a.shape[-1]
    v = np.eye(n, dtype=np.complex128)[None].copy()
    _sweep_all(a, v)
    w = np.real(np.diagonal(a[0])).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[0][:, order]


def min_slack_batch(rows, omega, skip_last=False):
    x = np.asarray(rows, dtype=np.float64)
    om = np.asarray(omega, dtype=np.float64)
    m, nb = x.shape[1], om.shape[0]
    length = max(m, nb)
    cum = np.cumsum(-np.sort(-x, axis=1), axis=1)
    if length > m:
        cum = np.concatenate([cum, np.repeat(cum[:, -1:], length - m, axis=1)], axis=1)
    if length > nb:
        om = np.concatenate([om, np.full(length - nb, om[-1])])
    if skip_last and length > 1:
        length -= 1
    return np.min(om[None, :length] - cum[:, :length], axis=1)

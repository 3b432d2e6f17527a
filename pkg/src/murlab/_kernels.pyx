# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: cyclic complex Jacobi and sorted partial-sum slack.

Same pivot order and rotations as ``murlab._fallback``; both backends agree
to rounding. Complex matrices are handled as interleaved (re, im) doubles.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot

cnp.import_array()

cdef int MAX_SWEEPS = 64


cdef int _jacobi(double* a, double* v, int n) noexcept nogil:
    """Diagonalize the Hermitian n x n row-major matrix ``a`` in place.

    ``a`` holds interleaved complex entries. If ``v`` is not NULL it must hold
    the identity on entry and receives the eigenvectors as columns. Only the
    columns p, q are rotated; rows follow by Hermitian symmetry. Returns the
    number of sweeps used.
    """
    cdef int sweep, p, q, k, ip, iq
    cdef double off, fro, app, aqq, br, bi, babs, theta, t, c, s, pr, pi
    cdef double xr, xi, yr, yi, sr, si

    fro = 0.0
    for k in range(2 * n * n):
        fro += a[k] * a[k]
    if fro == 0.0:
        return 0

    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                k = 2 * (p * n + q)
                off += a[k] * a[k] + a[k + 1] * a[k + 1]
        if off <= 1e-32 * fro:
            return sweep
        for p in range(n):
            for q in range(p + 1, n):
                k = 2 * (p * n + q)
                br = a[k]
                bi = a[k + 1]
                babs = hypot(br, bi)
                if babs <= 1e-300:
                    continue
                app = a[2 * (p * n + p)]
                aqq = a[2 * (q * n + q)]
                # ph = b / |b|; J = diag(1, conj(ph)) . [[c, s], [-s, c]]
                pr = br / babs
                pi = bi / babs
                theta = (aqq - app) / (2.0 * babs)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                sr = s * pr
                si = s * pi
                for k in range(n):
                    if k == p or k == q:
                        continue
                    ip = 2 * (k * n + p)
                    iq = 2 * (k * n + q)
                    xr = a[ip]
                    xi = a[ip + 1]
                    yr = a[iq]
                    yi = a[iq + 1]
                    # new a_kp = c x - s conj(ph) y ; new a_kq = s x + c conj(ph) y
                    a[ip] = c * xr - (sr * yr + si * yi)
                    a[ip + 1] = c * xi - (sr * yi - si * yr)
                    a[iq] = s * xr + c * (pr * yr + pi * yi)
                    a[iq + 1] = s * xi + c * (pr * yi - pi * yr)
                    a[2 * (p * n + k)] = a[ip]
                    a[2 * (p * n + k) + 1] = -a[ip + 1]
                    a[2 * (q * n + k)] = a[iq]
                    a[2 * (q * n + k) + 1] = -a[iq + 1]
                a[2 * (p * n + p)] = app - t * babs
                a[2 * (p * n + p) + 1] = 0.0
                a[2 * (q * n + q)] = aqq + t * babs
                a[2 * (q * n + q) + 1] = 0.0
                a[2 * (p * n + q)] = 0.0
                a[2 * (p * n + q) + 1] = 0.0
                a[2 * (q * n + p)] = 0.0
                a[2 * (q * n + p) + 1] = 0.0
                if v != NULL:
                    for k in range(n):
                        ip = 2 * (k * n + p)
                        iq = 2 * (k * n + q)
                        xr = v[ip]
                        xi = v[ip + 1]
                        yr = v[iq]
                        yi = v[iq + 1]
                        v[ip] = c * xr - (sr * yr + si * yi)
                        v[ip + 1] = c * xi - (sr * yi - si * yr)
                        v[iq] = s * xr + c * (pr * yr + pi * yi)
                        v[iq + 1] = s * xi + c * (pr * yi - pi * yr)
    return MAX_SWEEPS


def eigmax_batch(mats):
    """Largest eigenvalue of each Hermitian matrix in an (N, n, n) stack."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] work = np.array(mats, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t N = work.shape[0]
    cdef int n = <int>work.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(N, dtype=np.float64)
    cdef double* base = <double*>work.data
    cdef double* m
    cdef Py_ssize_t i
    cdef int j
    cdef double best
    with nogil:
        for i in range(N):
            m = base + 2 * i * n * n
            _jacobi(m, NULL, n)
            best = m[0]
            for j in range(1, n):
                if m[2 * (j * n + j)] > best:
                    best = m[2 * (j * n + j)]
            out[i] = best
    return out


def jacobi_eigh(mat):
    """Eigenvalues (ascending) and eigenvector columns of one Hermitian matrix."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] work = np.array(mat, dtype=np.complex128, order="C", copy=True)
    cdef int n = <int>work.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] vecs = np.eye(n, dtype=np.complex128)
    with nogil:
        _jacobi(<double*>work.data, <double*>vecs.data, n)
    w = np.real(np.diagonal(work)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], vecs[:, order]


def min_slack_batch(rows, omega, bint skip_last=False):
    """Per row of ``rows``: min over k of omega[k] - (sum of k largest entries).

    Both sides are zero padded / extended by their totals to a common length.
    With ``skip_last`` the final (total-vs-total) comparison is left out.
    """
    # numpy's vectorized sort beats a scalar one; the fused scan is compiled
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x = np.ascontiguousarray(
        np.sort(np.asarray(rows, dtype=np.float64), axis=1)[:, ::-1]
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=1] om = np.ascontiguousarray(omega, dtype=np.float64)
    cdef Py_ssize_t N = x.shape[0]
    cdef Py_ssize_t m = x.shape[1]
    cdef Py_ssize_t nb = om.shape[0]
    cdef Py_ssize_t length = m if m > nb else nb
    if skip_last and length > 1:
        length -= 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(N, dtype=np.float64)
    cdef Py_ssize_t i, k
    cdef double acc, bound, slack, worst
    with nogil:
        for i in range(N):
            acc = 0.0
            worst = 1e300
            for k in range(length):
                if k < m:
                    acc = acc + x[i, k]
                bound = om[k] if k < nb else om[nb - 1]
                slack = bound - acc
                if slack < worst:
                    worst = slack
            out[i] = worst
    return out

# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Wigner-transform kernels.

Both kernels work column by column: a column is one ``(k, l)`` pair of the
Fourier cube, and every column is written by exactly one thread, so the
result does not depend on the thread count.

``dz`` is the flat table of d^n_{j,k}(0) (degree blocks, row-major), and the
row ``dz[off(n) + (k+n)(2n+1) : ...]`` holds d^n_{k,j}(0) for j = -n..n.
"""
from cython.parallel cimport parallel, prange
from libc.math cimport sqrt
from libc.stdlib cimport free, malloc

import numpy as np


cdef inline Py_ssize_t _off(Py_ssize_t n) noexcept nogil:
    return n * (2 * n - 1) * (2 * n + 1) / 3


cdef inline Py_ssize_t _iabs(Py_ssize_t x) noexcept nogil:
    return -x if x < 0 else x


cdef inline void _phase(Py_ssize_t m, double* re, double* im) noexcept nogil:
    # i**m
    m = m % 4
    if m < 0:
        m += 4
    if m == 0:
        re[0] = 1.0; im[0] = 0.0
    elif m == 1:
        re[0] = 0.0; im[0] = 1.0
    elif m == 2:
        re[0] = -1.0; im[0] = 0.0
    else:
        re[0] = 0.0; im[0] = -1.0


def forward_columns(const double[::1] dz, const double complex[::1] fhat, Py_ssize_t N,
                    const long long[::1] ks, const long long[::1] ls, bint half,
                    double complex[:, :, ::1] out, int nthreads=1):
    """ghat[k, j, l] = i^(k-l) (-1)^(k+l) sum_n sqrt(2n+1) d^n_{k,j} d^n_{l,j} fhat_n^{-k,-l}.

    With ``half`` only j >= 0 is written.
    """
    cdef Py_ssize_t P = ks.shape[0]
    cdef Py_ssize_t L = 2 * N + 1
    cdef Py_ssize_t p, k, l, n, n0, j, j0, w, base, rk, rl, fi
    cdef double cr, ci, pr, pi_, t, sg
    cdef double* acc
    if ls.shape[0] != P:
        raise ValueError("ks and ls differ in length")
    if out.shape[0] != L or out.shape[1] != L or out.shape[2] != L:
        raise ValueError("output cube has the wrong shape")
    with nogil, parallel(num_threads=nthreads):
        acc = <double*> malloc(2 * L * sizeof(double))
        for p in prange(P, schedule="dynamic"):
            k = ks[p]
            l = ls[p]
            n0 = _iabs(k) if _iabs(k) > _iabs(l) else _iabs(l)
            for j in range(2 * L):
                acc[j] = 0.0
            for n in range(n0, N + 1):
                w = 2 * n + 1
                fi = _off(n) + (-k + n) * w + (-l + n)
                t = sqrt(<double> w)
                cr = t * fhat[fi].real
                ci = t * fhat[fi].imag
                base = _off(n)
                rk = base + (k + n) * w + n
                rl = base + (l + n) * w + n
                j0 = 0 if half else -n
                for j in range(j0, n + 1):
                    t = dz[rk + j] * dz[rl + j]
                    acc[2 * (j + N)] += cr * t
                    acc[2 * (j + N) + 1] += ci * t
            _phase(k - l, &pr, &pi_)
            sg = -1.0 if (k + l) % 2 else 1.0
            pr = pr * sg
            pi_ = pi_ * sg
            j0 = 0 if half else -N
            for j in range(j0, N + 1):
                out[k + N, j + N, l + N] = (pr * acc[2 * (j + N)] - pi_ * acc[2 * (j + N) + 1]) + \
                    1j * (pr * acc[2 * (j + N) + 1] + pi_ * acc[2 * (j + N)])
        free(acc)


def adjoint_columns(const double[::1] dz, const double complex[:, :, ::1] ghat, Py_ssize_t N,
                    const long long[::1] ks, const long long[::1] ls,
                    double complex[::1] out, int nthreads=1):
    """fhat_n^{-k,-l} = sqrt(2n+1) i^(l-k) (-1)^(k+l) sum_j d^n_{k,j} d^n_{l,j} ghat[k, j, l]."""
    cdef Py_ssize_t P = ks.shape[0]
    cdef Py_ssize_t L = 2 * N + 1
    cdef Py_ssize_t p, k, l, n, n0, j, w, base, rk, rl, fi
    cdef double sr, si, pr, pi_, t, sg
    if ls.shape[0] != P:
        raise ValueError("ks and ls differ in length")
    if ghat.shape[0] != L or ghat.shape[1] != L or ghat.shape[2] != L:
        raise ValueError("input cube has the wrong shape")
    with nogil:
        for p in prange(P, schedule="dynamic", num_threads=nthreads):
            k = ks[p]
            l = ls[p]
            n0 = _iabs(k) if _iabs(k) > _iabs(l) else _iabs(l)
            _phase(l - k, &pr, &pi_)
            sg = -1.0 if (k + l) % 2 else 1.0
            for n in range(n0, N + 1):
                w = 2 * n + 1
                base = _off(n)
                rk = base + (k + n) * w + n
                rl = base + (l + n) * w + n
                sr = 0.0
                si = 0.0
                for j in range(-n, n + 1):
                    t = dz[rk + j] * dz[rl + j]
                    sr = sr + t * ghat[k + N, j + N, l + N].real
                    si = si + t * ghat[k + N, j + N, l + N].imag
                t = sg * sqrt(<double> w)
                sr = sr * t
                si = si * t
                fi = base + (-k + n) * w + (-l + n)
                out[fi] = (pr * sr - pi_ * si) + 1j * (pr * si + pi_ * sr)

"""NumPy implementation of the Wigner-transform kernels.

Same signatures and results as the compiled ``_kernels`` module.  The loop
runs over degrees ``n`` and vectorizes over the requested columns, which is
the cheapest arrangement when the inner work has to be NumPy calls.
"""
import numpy as np

from .core import block_offset


def _phases(m):
    return np.array([1.0, 1j, -1.0, -1j])[np.mod(m, 4)]


def _check(ks, ls, shape, L):
    if ks.shape != ls.shape:
        raise ValueError("ks and ls differ in length")
    if shape != (L, L, L):
        raise ValueError("cube has the wrong shape")


def forward_columns(dz, fhat, N, ks, ls, half, out, nthreads=1):
    ks = np.asarray(ks, dtype=np.int64)
    ls = np.asarray(ls, dtype=np.int64)
    L = 2 * N + 1
    _check(ks, ls, out.shape, L)
    n0 = np.maximum(np.abs(ks), np.abs(ls))
    acc = np.zeros((len(ks), L), dtype=complex)
    for n in range(N + 1):
        sel = np.flatnonzero(n0 <= n)
        if sel.size == 0:
            continue
        w = 2 * n + 1
        s = block_offset(n)
        B = dz[s : s + w * w].reshape(w, w)
        k, l = ks[sel], ls[sel]
        c = np.sqrt(w) * fhat[s + (-k + n) * w + (-l + n)]
        j0 = n if half else 0
        prod = B[k + n, j0:] * B[l + n, j0:]
        acc[sel, N - n + j0 : N + n + 1] += c[:, None] * prod
    ph = _phases(ks - ls) * np.where((ks + ls) % 2, -1.0, 1.0)
    j0 = N if half else 0
    out[ks + N, j0:, ls + N] = ph[:, None] * acc[:, j0:]


def adjoint_columns(dz, ghat, N, ks, ls, out, nthreads=1):
    ks = np.asarray(ks, dtype=np.int64)
    ls = np.asarray(ls, dtype=np.int64)
    L = 2 * N + 1
    _check(ks, ls, ghat.shape, L)
    n0 = np.maximum(np.abs(ks), np.abs(ls))
    ph = _phases(ls - ks) * np.where((ks + ls) % 2, -1.0, 1.0)
    cols = ghat[ks + N, :, ls + N]  # (P, L)
    for n in range(N + 1):
        sel = np.flatnonzero(n0 <= n)
        if sel.size == 0:
            continue
        w = 2 * n + 1
        s = block_offset(n)
        B = dz[s : s + w * w].reshape(w, w)
        k, l = ks[sel], ls[sel]
        acc = np.einsum("pj,pj,pj->p", B[k + n], B[l + n], cols[sel, N - n : N + n + 1])
        out[s + (-k + n) * w + (-l + n)] = np.sqrt(w) * ph[sel] * acc

"""Jacobi polynomials, Wigner-d / Wigner-D functions and the table of d^n_{j,k}(0).

The Wigner-d function follows the Jacobi-polynomial definition

    d^n_{k,l}(x) = (-1)^nu sqrt(C(2n-s, s+a) / C(s+b, b))
                   ((1-x)/2)^(a/2) ((1+x)/2)^(b/2) P_s^{(a,b)}(x)

with ``a = |k-l|``, ``b = |k+l|``, ``s = n - max(|k|, |l|)`` and
``nu = k + l`` if ``k > l`` else ``0``.  Under this sign convention the
special values at ``x = 0`` obey

    d^n_{k,j}(0)  = (-1)^(k+j) d^n_{j,k}(0)
    d^n_{-j,k}(0) = (-1)^(n+k) d^n_{j,k}(0)
    d^n_{j,-k}(0) = (-1)^(n+j) d^n_{j,k}(0)

which is what :func:`build_zero_table` uses to reflect its fundamental
triangle.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import EulerAngles, block_offset, dimension, harmonic_index

# recurrence values beyond this magnitude are recomputed from the closed form
_GUARD = 1.0 + 1e-9


def _check_orders(n: int, k: int, l: int) -> None:
    if n < 0 or abs(k) > n or abs(l) > n:
        raise IndexError(f"invalid Wigner indices n={n}, k={k}, l={l}")


def _jacobi_coeffs(s: int, a: int, b: int) -> tuple[float, float, float, float]:
    """Coefficients of ``P_s = (c1 x + c0) P_{s-1} - c2 P_{s-2}`` divided by ``den``.

    Computed in exact integer arithmetic and rounded once.
    """
    t = 2 * s + a + b
    den = 2 * s * (s + a + b) * (t - 2)
    c1 = (t - 1) * t * (t - 2)
    c0 = (t - 1) * (a * a - b * b)
    c2 = 2 * (s + a - 1) * (s + b - 1) * t
    return c1 / den, c0 / den, c2 / den, 1.0


def jacobi_poly(s: int, a: int, b: int, x):
    """Jacobi polynomial ``P_s^{(a,b)}(x)`` by the three-term recurrence in ``s``.

    ``x`` may be a scalar or an array.
    """
    if s < 0 or a < 0 or b < 0:
        raise ValueError("jacobi_poly needs nonnegative s, a, b")
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if s == 0:
        return p0 if p0.ndim else float(p0)
    p1 = (a + 1) + (a + b + 2) * (x - 1.0) / 2.0
    for m in range(2, s + 1):
        c1, c0, c2, _ = _jacobi_coeffs(m, a, b)
        p0, p1 = p1, (c1 * x + c0) * p1 - c2 * p0
    return p1 if p1.ndim else float(p1)


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@functools.lru_cache(maxsize=1 << 16)
def _prefactor(n: int, k: int, l: int) -> float:
    a, b = abs(k - l), abs(k + l)
    s = n - max(abs(k), abs(l))
    try:
        # int / int is correctly rounded, so this is accurate to an ulp at any degree
        return math.sqrt(math.comb(2 * n - s, s + a) / math.comb(s + b, b))
    except OverflowError:
        return math.exp(0.5 * (_log_binom(2 * n - s, s + a) - _log_binom(s + b, b)))


def _sign(k: int, l: int) -> int:
    nu = (k + l) if k > l else 0
    return -1 if nu % 2 else 1


def wigner_d(n: int, k: int, l: int, x):
    """Wigner-d function ``d^n_{k,l}(x)`` for ``x`` in ``[-1, 1]`` (scalar or array)."""
    _check_orders(n, k, l)
    a, b = abs(k - l), abs(k + l)
    s = n - max(abs(k), abs(l))
    xa = np.asarray(x, dtype=float)
    val = (
        _sign(k, l)
        * _prefactor(n, k, l)
        * np.power((1.0 - xa) / 2.0, a / 2.0)
        * np.power((1.0 + xa) / 2.0, b / 2.0)
        * jacobi_poly(s, a, b, xa)
    )
    return val if np.ndim(val) else float(val)


def wigner_D(n: int, k: int, l: int, R: EulerAngles) -> complex:
    """L2-normalized Wigner-D function ``sqrt(2n+1) e^{-ik alpha} d^n_{k,l}(cos beta) e^{-il gamma}``."""
    _check_orders(n, k, l)
    return complex(
        math.sqrt(2 * n + 1)
        * np.exp(-1j * (k * R.alpha + l * R.gamma))
        * wigner_d(n, k, l, math.cos(R.beta))
    )


def wigner_d_block(n: int, x) -> np.ndarray:
    """All ``d^n_{k,l}(x)`` of one degree, shape ``(2n+1, 2n+1, len(x))``, indexed ``[k+n, l+n]``.

    Vectorized form of :func:`wigner_d` (same definition, same recurrence).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    r = np.arange(-n, n + 1)
    K, L = np.meshgrid(r, r, indexing="ij")
    K, L = K.ravel(), L.ravel()
    a = np.abs(K - L)
    b = np.abs(K + L)
    s = n - np.maximum(np.abs(K), np.abs(L))
    af, bf = a[:, None].astype(float), b[:, None].astype(float)
    X = x[None, :]
    p_prev = np.ones((len(K), len(x)))
    p = p_prev.copy()
    if n >= 1:
        p1 = (af + 1) + (af + bf + 2) * (X - 1.0) / 2.0
        p = np.where((s >= 1)[:, None], p1, p_prev)
        for m in range(2, n + 1):
            act = s >= m
            if not act.any():
                break
            t = 2 * m + a[act] + b[act]
            den = (2 * m * (m + a[act] + b[act]) * (t - 2)).astype(float)
            c1 = ((t - 1) * t * (t - 2)) / den
            c0 = ((t - 1) * (a[act] ** 2 - b[act] ** 2)) / den
            c2 = (2 * (m + a[act] - 1) * (m + b[act] - 1) * t) / den
            new = (c1[:, None] * X + c0[:, None]) * p[act] - c2[:, None] * p_prev[act]
            p_prev[act] = p[act]
            p[act] = new
    pref = np.array([_sign(k, l) * _prefactor(n, k, l) for k, l in zip(K, L)])
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (
            pref[:, None]
            * np.power((1.0 - X) / 2.0, af / 2.0)
            * np.power((1.0 + X) / 2.0, bf / 2.0)
            * p
        )
    return val.reshape(2 * n + 1, 2 * n + 1, len(x))


def wigner_D_matrix(n: int, R: EulerAngles, normalized: bool = False) -> np.ndarray:
    """Degree-``n`` matrix ``U[k+n, l+n]`` of the unitary representation at ``R``.

    With ``normalized=True`` the entries carry the ``sqrt(2n+1)`` factor of
    :func:`wigner_D`.
    """
    r = np.arange(-n, n + 1)
    d = wigner_d_block(n, [math.cos(R.beta)])[:, :, 0]
    U = np.exp(-1j * r * R.alpha)[:, None] * d * np.exp(-1j * r * R.gamma)[None, :]
    return U * math.sqrt(2 * n + 1) if normalized else U


@dataclass(frozen=True)
class WignerDZeroTable:
    """The special values ``d^n_{j,k}(0)`` for ``|j|, |k| <= n <= N``.

    ``values`` is flat, one ``(2n+1) x (2n+1)`` row-major block per degree,
    addressed like harmonic coefficients: ``values[harmonic_index(n, j, k)]``.
    """

    bandwidth: int
    values: np.ndarray = field(repr=False)
    guarded: int = 0

    def block(self, n: int) -> np.ndarray:
        s = block_offset(n)
        return self.values[s : s + (2 * n + 1) ** 2].reshape(2 * n + 1, 2 * n + 1)

    def value(self, n: int, j: int, k: int) -> float:
        return float(self.values[harmonic_index(n, j, k)])


def _seed(n: int, j: int, k: int) -> float:
    # closed form at n = max(|j|, |k|): s = 0, a + b = 2n
    return wigner_d(n, j, k, 0.0)


def build_zero_table(N: int) -> WignerDZeroTable:
    """Tabulate ``d^n_{j,k}(0)`` for ``n <= N``.

    The triangle ``0 <= k <= j`` is filled for every ``n`` by the upward
    three-term recurrence in the degree, seeded at ``n = j`` from the closed
    form; the remaining entries are exact sign reflections.
    """
    if N < 0:
        raise ValueError(f"bandwidth must be nonnegative, got {N}")
    # pairs (j, k) of the fundamental triangle
    J, K = np.tril_indices(N + 1)
    jj = J.astype(float) ** 2
    kk = K.astype(float) ** 2
    jk = (J * K).astype(float)
    prev = np.zeros(len(J))
    cur = np.zeros(len(J))
    tri = np.zeros((N + 1, len(J)))  # tri[n, p] = d^n_{J[p], K[p]}(0)
    guarded = 0
    for n in range(N + 1):
        # pairs whose degree starts now
        start = J == n
        if n >= 2:
            grown = J < n
            if grown.any():
                m = n - 1
                num = -(2 * m + 1) * jk[grown] * cur[grown] - (m + 1) * np.sqrt(
                    np.maximum((m * m - jj[grown]) * (m * m - kk[grown]), 0.0)
                ) * prev[grown]
                den = m * np.sqrt((n * n - jj[grown]) * (n * n - kk[grown]))
                nxt = num / den
                bad = np.flatnonzero(np.abs(nxt) > _GUARD)
                if bad.size:
                    idx = np.flatnonzero(grown)[bad]
                    for p, q in zip(idx, bad):
                        nxt[q] = wigner_d(n, int(J[p]), int(K[p]), 0.0)
                    guarded += bad.size
                prev[grown] = cur[grown]
                cur[grown] = nxt
        for p in np.flatnonzero(start):
            prev[p] = 0.0
            cur[p] = _seed(n, int(J[p]), int(K[p]))
        if n == 1:
            # d^1_{00}: the recurrence divides by n - 1 = 0 at the first step
            prev[0] = cur[0]
            cur[0] = wigner_d(1, 0, 0, 0.0)
        tri[n] = cur

    values = np.empty(dimension(N))
    for n in range(N + 1):
        L = 2 * n + 1
        B = np.empty((L, L))
        sel = J <= n
        q = np.zeros((n + 1, n + 1))
        q[J[sel], K[sel]] = tri[n, sel]
        # upper part of the quadrant: d_{k,j} = (-1)^{k+j} d_{j,k}
        jq, kq = np.triu_indices(n + 1, 1)
        q[jq, kq] = np.where((jq + kq) % 2, -1.0, 1.0) * q[kq, jq]
        B[n:, n:] = q
        r = np.arange(1, n + 1)
        # negative j from positive j: d_{-j,k} = (-1)^{n+k} d_{j,k}, k >= 0
        sk = np.where((n + np.arange(0, n + 1)) % 2, -1.0, 1.0)
        B[n - r, n:] = q[r, :] * sk[None, :]
        # negative k from positive k: d_{j,-k} = (-1)^{n+j} d_{j,k}, all j
        sj = np.where((n + np.arange(-n, n + 1)) % 2, -1.0, 1.0)
        B[:, n - r] = B[:, n + r] * sj[:, None]
        values[block_offset(n) : block_offset(n) + L * L] = B.ravel()
    values.flags.writeable = False
    return WignerDZeroTable(N, values, guarded)

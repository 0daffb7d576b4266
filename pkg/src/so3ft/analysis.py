"""Sobolev norms, the DFS lift, and the regularity counterexample.

The counterexample is ``f(R(alpha, beta, gamma)) = 1 / sqrt(sin beta)``.  It
lies in ``H^s(SO(3))`` for ``s < 1/2`` while its DFS lift is not square
integrable on the torus.  Its only nonzero coefficients are

    fhat_n^{0,0} = sqrt(2n+1) / 2 * I_n,   I_n = int_{-1}^{1} P_n(t) (1-t^2)^{-1/4} dt,

and ``I_n`` has a closed form in Gamma functions (zero for odd ``n``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, gammasgn

from .core import TWO_PI, FourierCube, HarmonicCoefficients, RotationList, dimension, harmonic_index
from .fourier import GridSpec
from .nsoft import direct_forward
from .special import WignerDZeroTable, build_zero_table

SERIES_BOUND_CONSTANT = 151.0
XI_INTERVAL = (7.0 / 8.0, 1.0)


@dataclass(frozen=True)
class SobolevWeight:
    s: float

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("Sobolev exponent must be nonnegative")

    def __call__(self, n):
        return (1.0 + np.asarray(n, dtype=float) * (np.asarray(n, dtype=float) + 1.0)) ** self.s


def _degree_of_entries(N: int) -> np.ndarray:
    return np.repeat(np.arange(N + 1), [(2 * n + 1) ** 2 for n in range(N + 1)])


def sobolev_norm(fhat: HarmonicCoefficients, s: float) -> float:
    w = SobolevWeight(s)(_degree_of_entries(fhat.bandwidth))
    return float(math.sqrt(np.sum(w * np.abs(fhat.data) ** 2)))


# ---------------------------------------------------------------------------
# counterexample

_G34 = gammaln(0.75)


def counterexample_I(n) -> np.ndarray:
    """``I_n = int_{-1}^{1} P_n(t) (1-t^2)^{-1/4} dt`` from the Gamma-function form."""
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    out = np.zeros(n.shape)
    even = n % 2 == 0
    h = n[even] / 2.0
    # pi G(3/4)^2 / (G(h+5/4) G(3/4-h) G(h+1) G(1/2-h)); the two negative
    # arguments are never poles for even n and contribute signs only
    logv = math.log(math.pi) + 2 * _G34 - gammaln(h + 1.25) - gammaln(0.75 - h) - gammaln(h + 1.0) - gammaln(0.5 - h)
    sgn = gammasgn(0.75 - h) * gammasgn(0.5 - h)
    out[even] = sgn * np.exp(logv)
    out[n == 0] = math.sqrt(math.pi) * math.gamma(0.75) / math.gamma(1.25)
    return out


def counterexample_coefficients(N: int) -> HarmonicCoefficients:
    data = np.zeros(dimension(N), dtype=complex)
    n = np.arange(N + 1)
    vals = np.sqrt(2 * n + 1) / 2.0 * counterexample_I(n)
    for m in range(N + 1):
        data[harmonic_index(m, 0, 0)] = vals[m]
    return HarmonicCoefficients(N, data)


def counterexample_xi(n) -> np.ndarray:
    """``xi_n = I_n pi sqrt(n) (n + 1/2) / (2 Gamma(3/4)^2)`` (meaningful for even ``n >= 2``)."""
    n = np.asarray(n, dtype=float)
    return counterexample_I(n.astype(np.int64)) * math.pi * np.sqrt(n) * (n + 0.5) / (2.0 * math.exp(2 * _G34))


@dataclass
class RegularityReport:
    N: int
    xi_degrees: np.ndarray
    xi: np.ndarray
    # smallest even n from which every xi_n up to N lies in (7/8, 1)
    xi_inside_from: int | None
    partial_norms: dict[float, np.ndarray] = field(default_factory=dict)
    terms: dict[float, np.ndarray] = field(default_factory=dict)

    @property
    def xi_all_inside(self) -> bool:
        lo, hi = XI_INTERVAL
        return bool(np.all((self.xi > lo) & (self.xi < hi)))

    def term_ratio(self, s: float, n: int) -> float:
        """``term_{2n} / term_n`` (``n`` even), expected near ``2^{2s-2}``."""
        t = self.terms[s]
        return float(t[2 * n] / t[n])

    def rows(self):
        for s, pn in self.partial_norms.items():
            for n in range(0, self.N + 1, 2):
                xi = float(self.xi[n // 2 - 1]) if n >= 2 else float("nan")
                yield (s, n, float(self.terms[s][n]), float(pn[n]), xi)


def counterexample_regularity_report(N: int, s_values) -> RegularityReport:
    n = np.arange(N + 1)
    f00 = np.sqrt(2 * n + 1) / 2.0 * counterexample_I(n)
    deg = np.arange(2, N + 1, 2)
    xi = counterexample_xi(deg)
    lo, hi = XI_INTERVAL
    ok = (xi > lo) & (xi < hi)
    inside_from = None
    if ok.size and ok[-1]:
        bad = np.flatnonzero(~ok)
        inside_from = int(deg[bad[-1] + 1]) if bad.size else int(deg[0])
    rep = RegularityReport(N, deg, xi, inside_from)
    for s in s_values:
        term = SobolevWeight(float(s))(n) * f00**2
        rep.terms[float(s)] = term
        rep.partial_norms[float(s)] = np.sqrt(np.cumsum(term))
    return rep


def counterexample_lift_norms(levels: int = 4, base: int = 16) -> np.ndarray:
    """Discrete torus L2 norms of the counterexample's DFS lift ``1/sqrt|sin beta|``.

    Level ``i`` uses ``base 2^i`` midpoint nodes in beta over ``(0, 2 pi)``;
    the norms grow without bound (logarithmically) as the grid approaches
    the poles.
    """
    out = []
    for i in range(levels):
        B = base * 2**i
        beta = TWO_PI * (np.arange(B) + 0.5) / B
        out.append(math.sqrt(np.mean(1.0 / np.abs(np.sin(beta)))))
    return np.array(out)


def counterexample_cube_norms(N_list, table: WignerDZeroTable | None = None) -> np.ndarray:
    """``||W_N fhat_N||_2`` for the truncated counterexample, one entry per ``N``."""
    from .wigner import WignerTransformPlan, forward

    N_list = list(N_list)
    table = table or build_zero_table(max(N_list))
    out = []
    for N in N_list:
        plan = WignerTransformPlan(N, table, backend=None)
        out.append(float(np.linalg.norm(forward(plan, counterexample_coefficients(N)).data)))
    return np.array(out)


# ---------------------------------------------------------------------------
# series estimate


def series_terms(n: int, table: WignerDZeroTable) -> np.ndarray:
    """``I_n(k, l) = sum_j (d^n_{j,k}(0) d^n_{j,l}(0))^2`` as a ``(2n+1, 2n+1)`` array."""
    B2 = table.block(n) ** 2
    return B2.T @ B2


def series_bound(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return SERIES_BOUND_CONSTANT * np.log(2 * n + 1) / np.sqrt(2 * n + 1)


@dataclass
class SeriesReport:
    k: int
    l: int
    s: float
    degrees: np.ndarray
    values: np.ndarray
    bound: np.ndarray
    partial_sums: np.ndarray

    @property
    def bound_holds(self) -> bool:
        m = self.degrees > 1
        return bool(np.all(self.values[m] <= self.bound[m]))

    @property
    def max_ratio(self) -> float:
        m = self.degrees > 1
        return float((self.values[m] / self.bound[m]).max()) if m.any() else 0.0

    @property
    def constant(self) -> float:
        return float(self.partial_sums[-1]) if self.partial_sums.size else 0.0


def series_estimate_check(k: int, l: int, n_max: int, s: float,
                          table: WignerDZeroTable | None = None) -> SeriesReport:
    """Per-degree ``I_n(k, l)`` against ``151 ln(2n+1)/sqrt(2n+1)`` and the sums ``sum (2n+1)^{1-2s} I_n``."""
    table = table or build_zero_table(n_max)
    n0 = max(abs(k), abs(l))
    deg = np.arange(n0, n_max + 1)
    vals = np.array([table.block(n)[:, k + n] ** 2 @ table.block(n)[:, l + n] ** 2 for n in deg])
    terms = (2.0 * deg + 1) ** (1 - 2 * s) * vals
    return SeriesReport(k, l, s, deg, vals, series_bound(deg), np.cumsum(terms))


def boundedness_constant(N: int, s: float, table: WignerDZeroTable | None = None) -> float:
    """``C`` with ``||W_N fhat||_2 <= C ||fhat||_{H^s}`` for every ``fhat`` of bandwidth ``N``.

    Cauchy-Schwarz over the degree gives
    ``C^2 = max_{k,l} sum_n (2n+1) (1+n(n+1))^{-s} I_n(k, l)``.
    """
    table = table or build_zero_table(N)
    acc = np.zeros((2 * N + 1, 2 * N + 1))
    w = SobolevWeight(s)
    for n in range(N + 1):
        acc[N - n : N + n + 1, N - n : N + n + 1] += (2 * n + 1) / w(n) * series_terms(n, table)
    return float(math.sqrt(acc.max()))


# ---------------------------------------------------------------------------
# DFS lift


def dfs_lift_sample(fhat: HarmonicCoefficients, grid: GridSpec) -> np.ndarray:
    """``g(a, b, c) = f(R(a, b, c))`` on a torus grid with beta anywhere in ``[0, 2 pi)``.

    Points with ``beta > pi`` are mapped through ``g(a, b, c) = g(a + pi, 2 pi - b, c + pi)``
    and evaluated on SO(3) by direct summation.
    """
    pts = grid.torus_points()
    b = np.mod(pts[:, 1], TWO_PI)
    upper = b > math.pi
    ang = pts.copy()
    ang[:, 1] = b
    ang[upper, 0] += math.pi
    ang[upper, 1] = TWO_PI - b[upper]
    ang[upper, 2] += math.pi
    return direct_forward(fhat, RotationList(ang)).reshape(grid.shape)

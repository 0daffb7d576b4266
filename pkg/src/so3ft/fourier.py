"""Trivariate Fourier series on the 3-torus: exact synthesis and grid analysis.

Synthesis uses ``e^{+i(k a + j b + l c)}`` and analysis ``e^{-i(...)}``.
Nonequispaced evaluation is exact separable summation, not an approximate
NFFT.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import TWO_PI, FourierCube, RotationList
from .symmetry import SymmetryError

# work units of the j-summation, for checking the half-spectrum saving
counters: Counter = Counter()

# bound on the intermediate (L*L x chunk) array in synthesis
_CHUNK_ELEMS = 1 << 22


def _modes(N: int) -> np.ndarray:
    return np.arange(-N, N + 1)


def _chunks(M: int, L: int):
    step = max(1, _CHUNK_ELEMS // (L * L))
    for s in range(0, M, step):
        yield slice(s, min(M, s + step))


def _angles(nodes) -> np.ndarray:
    if isinstance(nodes, RotationList):
        return nodes.angles
    a = np.asarray(nodes, dtype=float)
    if a.ndim != 2 or a.shape[1] != 3:
        raise ValueError("torus points must have shape (M, 3)")
    return a


def synthesize_at(ghat: FourierCube, nodes) -> np.ndarray:
    """``g(a, b, c) = sum ghat[k,j,l] e^{i(k a + j b + l c)}`` at every node.

    ``nodes`` is a RotationList or an ``(M, 3)`` array of torus points.
    """
    N = ghat.bandwidth
    L = 2 * N + 1
    r = _modes(N)
    G = ghat.data.reshape(L * L, L)
    A = _angles(nodes)
    M = len(A)
    out = np.empty(M, dtype=complex)
    for sl in _chunks(M, L):
        a, b, c = A[sl, 0], A[sl, 1], A[sl, 2]
        t = (G @ np.exp(1j * np.outer(r, c))).reshape(L, L, -1)  # (k, j, m)
        t = np.einsum("kjm,jm->km", t, np.exp(1j * np.outer(r, b)))
        out[sl] = np.einsum("km,km->m", t, np.exp(1j * np.outer(r, a)))
    counters["j_terms"] += M * L * L * L
    return out


def adjoint_synthesize_at(values, nodes, N: int) -> FourierCube:
    """Conjugate transpose of :func:`synthesize_at`: ``sum_m v_m e^{-i(k a_m + j b_m + l c_m)}``."""
    v = np.asarray(values, dtype=complex).ravel()
    A = _angles(nodes)
    M = len(A)
    if v.size != M:
        raise ValueError(f"expected {M} values, got {v.size}")
    L = 2 * N + 1
    r = _modes(N)
    acc = np.zeros((L * L, L), dtype=complex)
    for sl in _chunks(M, L):
        a, b, c = A[sl, 0], A[sl, 1], A[sl, 2]
        ka = np.exp(-1j * np.outer(a, r)) * v[sl, None]
        kj = (ka[:, :, None] * np.exp(-1j * np.outer(b, r))[:, None, :]).reshape(-1, L * L)
        acc += kj.T @ np.exp(-1j * np.outer(c, r))
    counters["j_terms"] += M * L * L * L
    return FourierCube(N, acc.reshape(L, L, L))


def conjugate_symmetry_error(ghat: FourierCube) -> float:
    g = ghat.data
    return float(np.abs(g - np.conj(g[::-1, ::-1, ::-1])).max()) if g.size else 0.0


def synthesize_real_at(ghat: FourierCube, nodes, tol: float = 1e-10) -> np.ndarray:
    """Real-valued synthesis summing only ``j >= 0``.

    Requires ``ghat[k,j,l] = conj(ghat[-k,-j,-l])`` to within ``tol``.
    """
    err = conjugate_symmetry_error(ghat)
    if err > tol:
        raise SymmetryError(f"cube is not conjugate symmetric (max deviation {err:.3g})")
    N = ghat.bandwidth
    L = 2 * N + 1
    r = _modes(N)
    jr = np.arange(N + 1)
    half = np.array(ghat.data[:, N:, :])  # j = 0..N
    half[:, 1:, :] *= 2.0
    G = half.reshape(L * (N + 1), L)
    A = _angles(nodes)
    M = len(A)
    out = np.empty(M)
    for sl in _chunks(M, L):
        a, b, c = A[sl, 0], A[sl, 1], A[sl, 2]
        t = (G @ np.exp(1j * np.outer(r, c))).reshape(L, N + 1, -1)
        t = np.einsum("kjm,jm->km", t, np.exp(1j * np.outer(jr, b)))
        out[sl] = np.einsum("km,km->m", t, np.exp(1j * np.outer(r, a))).real
    counters["j_terms"] += M * L * (N + 1) * L
    return out


@dataclass(frozen=True)
class GridSpec:
    """Product grid ``alpha x beta x gamma`` (gamma fastest in flat order).

    ``alpha`` and ``gamma`` are equispaced on ``[0, 2 pi)``.  If the beta
    nodes all lie on the equispaced lattice ``2 pi b / beta_period`` the
    analysis uses an FFT along beta, otherwise a dense sum.
    """

    alpha_count: int
    beta_nodes: np.ndarray
    gamma_count: int
    beta_period: int | None = None

    def __post_init__(self):
        b = np.array(self.beta_nodes, dtype=float).ravel()
        b.flags.writeable = False
        object.__setattr__(self, "beta_nodes", b)
        if self.beta_period is not None:
            pos = b * self.beta_period / TWO_PI
            if np.abs(pos - np.round(pos)).max(initial=0.0) > 1e-9:
                raise ValueError("beta nodes are not on the stated equispaced lattice")

    @classmethod
    def torus(cls, A: int, B: int, C: int) -> "GridSpec":
        """Fully equispaced grid on the 3-torus (beta over ``[0, 2 pi)``)."""
        return cls(A, TWO_PI * np.arange(B) / B, C, B)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.alpha_count, len(self.beta_nodes), self.gamma_count)

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.shape

    @property
    def size(self) -> int:
        A, B, C = self.shape
        return A * B * C

    @property
    def alpha_nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.alpha_count) / self.alpha_count

    @property
    def gamma_nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.gamma_count) / self.gamma_count

    def torus_points(self) -> np.ndarray:
        """All grid points as an ``(size, 3)`` array (beta not reduced to ``[0, pi]``)."""
        a, b, c = np.meshgrid(self.alpha_nodes, self.beta_nodes, self.gamma_nodes, indexing="ij")
        return np.column_stack([a.ravel(), b.ravel(), c.ravel()])

    def nodes(self) -> RotationList:
        """Grid points as rotations; requires every beta node in ``[0, pi]``."""
        return RotationList(self.torus_points())

    def check_bandwidth(self, N: int) -> None:
        L = 2 * N + 1
        if self.alpha_count < L or self.gamma_count < L:
            raise ValueError(f"grid {self.shape} too small for bandwidth {N}")
        if self.beta_period is not None and self.beta_period < L:
            raise ValueError(f"beta period {self.beta_period} too small for bandwidth {N}")


def _beta_slots(grid: GridSpec) -> np.ndarray:
    return np.round(grid.beta_nodes * grid.beta_period / TWO_PI).astype(np.int64) % grid.beta_period


def grid_analysis(samples, grid: GridSpec, N: int, weights=None) -> FourierCube:
    """``c[k,j,l] = sum w s e^{-i(k a + j b + l c)}`` over the grid.

    ``weights`` broadcasts against the ``(A, B, C)`` sample array; the
    default is the uniform weight ``1 / size``, under which this inverts
    synthesis on a fully equispaced torus grid.
    """
    grid.check_bandwidth(N)
    s = np.asarray(samples, dtype=complex)
    if s.size != grid.size:
        raise ValueError(f"expected {grid.size} samples for grid {grid.shape}, got {s.size}")
    s = s.reshape(grid.shape)
    s = s * (1.0 / grid.size if weights is None else np.asarray(weights, dtype=float).reshape(
        np.broadcast_shapes(np.shape(weights), (1, 1, 1))))
    r = _modes(N)
    A, B, C = grid.shape
    x = np.fft.fft(s, axis=0)[np.mod(r, A)]
    x = np.fft.fft(x, axis=2)[:, :, np.mod(r, C)]
    if grid.beta_period is not None:
        P = grid.beta_period
        pad = np.zeros((x.shape[0], P, x.shape[2]), dtype=complex)
        np.add.at(pad, (slice(None), _beta_slots(grid), slice(None)), x)
        x = np.fft.fft(pad, axis=1)[:, np.mod(r, P), :]
    else:
        E = np.exp(-1j * np.outer(r, grid.beta_nodes))  # (j, b)
        x = np.einsum("kbl,jb->kjl", x, E)
    return FourierCube(N, x)


def synthesize_grid(ghat: FourierCube, grid: GridSpec) -> np.ndarray:
    """Evaluate the Fourier series on every grid point; returns ``(A, B, C)``."""
    N = ghat.bandwidth
    grid.check_bandwidth(N)
    r = _modes(N)
    A, B, C = grid.shape
    g = ghat.data
    x = np.zeros((A, g.shape[1], g.shape[2]), dtype=complex)
    x[np.mod(r, A)] = g
    x = np.fft.ifft(x, axis=0) * A
    y = np.zeros((A, g.shape[1], C), dtype=complex)
    y[:, :, np.mod(r, C)] = x
    y = np.fft.ifft(y, axis=2) * C
    if grid.beta_period is not None:
        P = grid.beta_period
        z = np.zeros((A, P, C), dtype=complex)
        z[:, np.mod(r, P), :] = y
        z = np.fft.ifft(z, axis=1) * P
        return z[:, _beta_slots(grid), :]
    E = np.exp(1j * np.outer(grid.beta_nodes, r))  # (b, j)
    return np.einsum("kjl,bj->kbl", y, E)


def naive_synthesize(ghat: FourierCube, nodes) -> np.ndarray:
    """Literal triple sum over the cube, one node at a time (reference only)."""
    N = ghat.bandwidth
    r = _modes(N)
    K, J, L = np.meshgrid(r, r, r, indexing="ij")
    g = ghat.data
    A = _angles(nodes)
    out = np.empty(len(A), dtype=complex)
    for m, (a, b, c) in enumerate(A):
        out[m] = np.sum(g * np.exp(1j * (K * a + J * b + L * c)))
    return out


def equispaced_nodes(N: int, count: int | None = None) -> RotationList:
    """About ``count`` rotations on an equispaced product grid (for benchmarks)."""
    n = max(1, round((count or N**3) ** (1.0 / 3.0)))
    a = TWO_PI * np.arange(n) / n
    b = math.pi * (np.arange(n) + 0.5) / n
    A, Bb, C = np.meshgrid(a, b, a, indexing="ij")
    return RotationList(np.column_stack([A.ravel(), Bb.ravel(), C.ravel()]))

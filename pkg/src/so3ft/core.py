"""Coefficient containers, index linearizations and Euler-angle types.

All containers are immutable: their arrays are copied on construction and
marked read-only, so they can be shared between threads freely.

Conventions used across the package:

* Euler angles are ZYZ, ``R(alpha, beta, gamma) = Rz(alpha) Ry(beta) Rz(gamma)``.
* Harmonic coefficients are stored degree-major, ``(n, k, l)`` with ``l``
  fastest, so truncation to a lower bandwidth is a prefix slice.
* Fourier cubes are stored as ``data[k + N, j + N, l + N]`` and represent
  ``g(a, b, c) = sum ghat[k, j, l] exp(+i (k a + j b + l c))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

TWO_PI = 2.0 * math.pi
# slack accepted on beta before it is treated as out of range
_BETA_SLACK = 1e-12


def dimension(N: int) -> int:
    """Number of harmonic coefficients of bandwidth ``N``."""
    if N < 0:
        raise ValueError(f"bandwidth must be nonnegative, got {N}")
    return (N + 1) * (2 * N + 1) * (2 * N + 3) // 3


def block_offset(n: int) -> int:
    """Linear index of the first coefficient of degree ``n``."""
    return n * (2 * n - 1) * (2 * n + 1) // 3


def harmonic_index(n: int, k: int, l: int) -> int:
    """Linear index of ``(n, k, l)`` in degree-major order."""
    if n < 0 or abs(k) > n or abs(l) > n:
        raise IndexError(f"(n, k, l) = ({n}, {k}, {l}) is not a valid harmonic index")
    return block_offset(n) + (k + n) * (2 * n + 1) + (l + n)


def iter_harmonic(N: int) -> Iterator[tuple[int, int, int]]:
    """Yield every ``(n, k, l)`` with ``n <= N`` in storage order."""
    for n in range(N + 1):
        for k in range(-n, n + 1):
            for l in range(-n, n + 1):
                yield n, k, l


def harmonic_triples(N: int) -> np.ndarray:
    """All ``(n, k, l)`` of bandwidth ``N`` as an ``(dim, 3)`` int array, in storage order."""
    out = np.empty((dimension(N), 3), dtype=np.int64)
    for n in range(N + 1):
        r = np.arange(-n, n + 1)
        kk, ll = np.meshgrid(r, r, indexing="ij")
        s = block_offset(n)
        e = s + (2 * n + 1) ** 2
        out[s:e, 0] = n
        out[s:e, 1] = kk.ravel()
        out[s:e, 2] = ll.ravel()
    return out


def cube_index(N: int, k: int, j: int, l: int) -> int:
    """Linear index of ``(k, j, l)`` in a bandwidth-``N`` Fourier cube."""
    if max(abs(k), abs(j), abs(l)) > N:
        raise IndexError(f"(k, j, l) = ({k}, {j}, {l}) outside cube of bandwidth {N}")
    L = 2 * N + 1
    return (k + N) * L * L + (j + N) * L + (l + N)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


# ---------------------------------------------------------------------------
# rotations


def rot_z(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_axis(axis, omega: float) -> np.ndarray:
    """Rotation by ``omega`` about ``axis`` (Rodrigues formula)."""
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    K = np.array([[0.0, -u[2], u[1]], [u[2], 0.0, -u[0]], [-u[1], u[0], 0.0]])
    return np.eye(3) + math.sin(omega) * K + (1.0 - math.cos(omega)) * (K @ K)


def euler_matrices(angles: np.ndarray) -> np.ndarray:
    """Rotation matrices for an ``(M, 3)`` array of ZYZ Euler angles."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    a, b, c = angles[:, 0], angles[:, 1], angles[:, 2]
    ca, sa = np.cos(a), np.sin(a)
    cb, sb = np.cos(b), np.sin(b)
    cc, sc = np.cos(c), np.sin(c)
    R = np.empty((len(a), 3, 3))
    R[:, 0, 0] = ca * cb * cc - sa * sc
    R[:, 0, 1] = -ca * cb * sc - sa * cc
    R[:, 0, 2] = ca * sb
    R[:, 1, 0] = sa * cb * cc + ca * sc
    R[:, 1, 1] = -sa * cb * sc + ca * cc
    R[:, 1, 2] = sa * sb
    R[:, 2, 0] = -sb * cc
    R[:, 2, 1] = sb * sc
    R[:, 2, 2] = cb
    return R


def euler_from_matrices(R: np.ndarray) -> np.ndarray:
    """ZYZ Euler angles ``(M, 3)`` of rotation matrices ``(M, 3, 3)``.

    At the poles (``sin beta == 0``) gamma is set to zero.
    """
    R = np.asarray(R, dtype=float).reshape(-1, 3, 3)
    sb = np.hypot(R[:, 0, 2], R[:, 1, 2])
    beta = np.arctan2(sb, R[:, 2, 2])
    alpha = np.arctan2(R[:, 1, 2], R[:, 0, 2])
    gamma = np.arctan2(R[:, 2, 1], -R[:, 2, 0])
    pole = sb < 1e-12
    north = pole & (R[:, 2, 2] > 0)
    south = pole & (R[:, 2, 2] < 0)
    alpha[north] = np.arctan2(R[north, 1, 0], R[north, 0, 0])
    alpha[south] = np.arctan2(-R[south, 1, 0], R[south, 1, 1])
    gamma[pole] = 0.0
    beta[north] = 0.0
    beta[south] = math.pi
    return np.stack([np.mod(alpha, TWO_PI), beta, np.mod(gamma, TWO_PI)], axis=1)


@dataclass(frozen=True)
class EulerAngles:
    """A rotation ``Rz(alpha) Ry(beta) Rz(gamma)``.

    ``alpha`` and ``gamma`` are reduced modulo 2*pi; ``beta`` must lie in
    ``[0, pi]``.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        b = float(self.beta)
        if not (-_BETA_SLACK <= b <= math.pi + _BETA_SLACK) or math.isnan(b):
            raise ValueError(f"beta = {b} outside [0, pi]")
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)
        object.__setattr__(self, "beta", min(max(b, 0.0), math.pi))
        object.__setattr__(self, "gamma", float(self.gamma) % TWO_PI)

    def matrix(self) -> np.ndarray:
        return euler_matrices([[self.alpha, self.beta, self.gamma]])[0]

    @classmethod
    def from_matrix(cls, R) -> "EulerAngles":
        a, b, c = euler_from_matrices(R)[0]
        return cls(a, b, c)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


class RotationList:
    """An ordered set of rotations, stored as an ``(M, 3)`` Euler-angle array."""

    __slots__ = ("_angles",)

    def __init__(self, entries):
        if isinstance(entries, RotationList):
            arr = entries.angles
        elif isinstance(entries, np.ndarray):
            arr = np.asarray(entries, dtype=float).reshape(-1, 3)
        else:
            entries = list(entries)
            arr = np.array(
                [e.as_tuple() if isinstance(e, EulerAngles) else tuple(e) for e in entries],
                dtype=float,
            ).reshape(-1, 3)
        b = arr[:, 1]
        if np.any(np.isnan(arr)) or np.any(b < -_BETA_SLACK) or np.any(b > math.pi + _BETA_SLACK):
            raise ValueError("beta outside [0, pi] in rotation list")
        arr = np.column_stack(
            [np.mod(arr[:, 0], TWO_PI), np.clip(b, 0.0, math.pi), np.mod(arr[:, 2], TWO_PI)]
        )
        self._angles = _frozen(arr)

    @classmethod
    def from_matrices(cls, R) -> "RotationList":
        return cls(euler_from_matrices(R))

    @property
    def angles(self) -> np.ndarray:
        return self._angles

    @property
    def alpha(self) -> np.ndarray:
        return self._angles[:, 0]

    @property
    def beta(self) -> np.ndarray:
        return self._angles[:, 1]

    @property
    def gamma(self) -> np.ndarray:
        return self._angles[:, 2]

    def matrices(self) -> np.ndarray:
        return euler_matrices(self._angles)

    def __len__(self) -> int:
        return self._angles.shape[0]

    def __getitem__(self, i) -> EulerAngles:
        a, b, c = self._angles[i]
        return EulerAngles(a, b, c)

    def __iter__(self) -> Iterator[EulerAngles]:
        for i in range(len(self)):
            yield self[i]

    def __repr__(self) -> str:
        return f"RotationList(M={len(self)})"


def random_rotations(M: int, rng: np.random.Generator) -> RotationList:
    """Haar-distributed random rotations."""
    alpha = rng.uniform(0.0, TWO_PI, M)
    beta = np.arccos(rng.uniform(-1.0, 1.0, M))
    gamma = rng.uniform(0.0, TWO_PI, M)
    return RotationList(np.column_stack([alpha, beta, gamma]))


class HarmonicCoefficients:
    """Dense harmonic (Wigner-D) coefficients over ``J_N``."""

    __slots__ = ("_N", "_data")

    def __init__(self, N: int, data=None):
        if N < 0:
            raise ValueError(f"bandwidth must be nonnegative, got {N}")
        dim = dimension(N)
        if data is None:
            data = np.zeros(dim, dtype=complex)
        data = np.asarray(data, dtype=complex).ravel()
        if data.shape[0] != dim:
            raise ValueError(f"bandwidth {N} needs {dim} coefficients, got {data.shape[0]}")
        self._N = int(N)
        self._data = _frozen(data)

    @property
    def bandwidth(self) -> int:
        return self._N

    @property
    def data(self) -> np.ndarray:
        return self._data

    def __len__(self) -> int:
        return self._data.shape[0]

    def __getitem__(self, nkl: tuple[int, int, int]) -> complex:
        return complex(self._data[harmonic_index(*nkl)])

    def block(self, n: int) -> np.ndarray:
        """Degree-``n`` coefficients as a ``(2n+1, 2n+1)`` array indexed ``[k + n, l + n]``."""
        if not 0 <= n <= self._N:
            raise IndexError(f"degree {n} outside 0..{self._N}")
        s = block_offset(n)
        return self._data[s : s + (2 * n + 1) ** 2].reshape(2 * n + 1, 2 * n + 1)

    def truncate(self, M: int) -> "HarmonicCoefficients":
        if not 0 <= M <= self._N:
            raise ValueError(f"truncation bandwidth {M} outside 0..{self._N}")
        return HarmonicCoefficients(M, self._data[: dimension(M)])

    def padded(self, M: int) -> "HarmonicCoefficients":
        """Zero-extend to a larger bandwidth ``M``."""
        if M < self._N:
            raise ValueError("use truncate() to lower the bandwidth")
        out = np.zeros(dimension(M), dtype=complex)
        out[: len(self)] = self._data
        return HarmonicCoefficients(M, out)

    @classmethod
    def unit(cls, N: int, n: int, k: int, l: int) -> "HarmonicCoefficients":
        data = np.zeros(dimension(N), dtype=complex)
        data[harmonic_index(n, k, l)] = 1.0
        return cls(N, data)

    @classmethod
    def from_blocks(cls, blocks: Iterable[np.ndarray]) -> "HarmonicCoefficients":
        blocks = list(blocks)
        return cls(len(blocks) - 1, np.concatenate([np.asarray(b).ravel() for b in blocks]))

    def __repr__(self) -> str:
        return f"HarmonicCoefficients(N={self._N})"


class FourierCube:
    """Fourier coefficients ``ghat[k, j, l]`` of a trigonometric polynomial on the 3-torus."""

    __slots__ = ("_N", "_data")

    def __init__(self, N: int, data=None):
        if N < 0:
            raise ValueError(f"bandwidth must be nonnegative, got {N}")
        L = 2 * N + 1
        if data is None:
            data = np.zeros((L, L, L), dtype=complex)
        data = np.asarray(data, dtype=complex)
        if data.size != L**3:
            raise ValueError(f"bandwidth {N} needs {L ** 3} cube entries, got {data.size}")
        self._N = int(N)
        self._data = _frozen(data.reshape(L, L, L))

    @property
    def bandwidth(self) -> int:
        return self._N

    @property
    def data(self) -> np.ndarray:
        """``(2N+1, 2N+1, 2N+1)`` array indexed ``[k + N, j + N, l + N]``."""
        return self._data

    def __getitem__(self, kjl: tuple[int, int, int]) -> complex:
        k, j, l = kjl
        N = self._N
        if max(abs(k), abs(j), abs(l)) > N:
            raise IndexError(f"(k, j, l) = {kjl} outside cube of bandwidth {N}")
        return complex(self._data[k + N, j + N, l + N])

    def __repr__(self) -> str:
        return f"FourierCube(N={self._N})"

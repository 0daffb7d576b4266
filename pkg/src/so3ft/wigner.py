"""The direct Wigner transform: harmonic coefficients to Fourier coefficients.

With the synthesis convention ``g = sum ghat[k,j,l] e^{+i(k a + j b + l c)}``
the DFS lift ``g(a, b, c) = f(R(a, b, c))`` of a bandwidth-N series has

    ghat[k, j, l] = i^(k-l) sum_{n >= max(|k|,|j|,|l|)} sqrt(2n+1)
                    d^n_{j,k}(0) d^n_{j,l}(0) fhat_n^{-k,-l}

and the exact adjoint is

    fhat_n^{k,l} = sqrt(2n+1) i^(k-l) sum_{|j|<=n} d^n_{j,k}(0) d^n_{j,l}(0) ghat[-k, j, -l].

Both are evaluated column by column over ``(k, l)`` with the degree loop
innermost; cost is O(N^4).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .core import FourierCube, HarmonicCoefficients, block_offset, dimension
from .special import WignerDZeroTable, build_zero_table
from .symmetry import SymmetryError, SymmetrySpec, check_pattern, column_classes

# materialize_matrix refuses larger bandwidths
MAX_DENSE_BANDWIDTH = 16


@dataclass(frozen=True)
class WignerTransformPlan:
    """Precomputed data for the Wigner transform of bandwidth ``N``.

    Only the table of ``d^n_{j,k}(0)`` is stored (O(N^3) memory).
    """

    bandwidth: int
    zero_table: WignerDZeroTable = None
    symmetry: SymmetrySpec | None = None
    backend: str | None = None
    threads: int | None = None
    _columns: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.bandwidth < 0:
            raise ValueError("bandwidth must be nonnegative")
        if self.zero_table is None:
            object.__setattr__(self, "zero_table", build_zero_table(self.bandwidth))
        elif self.zero_table.bandwidth < self.bandwidth:
            raise ValueError("zero table bandwidth is smaller than the plan bandwidth")
        N = self.bandwidth
        r = np.arange(-N, N + 1, dtype=np.int64)
        K, L = np.meshgrid(r, r, indexing="ij")
        object.__setattr__(self, "_columns", (np.ascontiguousarray(K.ravel()), np.ascontiguousarray(L.ravel())))

    @property
    def kernels(self):
        return _backend.get(self.backend)

    @property
    def nthreads(self) -> int:
        return self.threads or _backend.default_threads()


def make_plan(N: int, symmetry: SymmetrySpec | None = None, backend: str | None = None,
              threads: int | None = None) -> WignerTransformPlan:
    return WignerTransformPlan(N, build_zero_table(N), symmetry, backend, threads)


def _check_bw(plan: WignerTransformPlan, N: int, what: str) -> None:
    if N != plan.bandwidth:
        raise ValueError(f"{what} bandwidth {N} does not match plan bandwidth {plan.bandwidth}")


def _forward_raw(plan, fhat_data: np.ndarray, N: int) -> np.ndarray:
    L = 2 * N + 1
    out = np.zeros((L, L, L), dtype=complex)
    if plan.bandwidth == N:
        ks, ls = plan._columns
    else:
        r = np.arange(-N, N + 1, dtype=np.int64)
        K, L_ = np.meshgrid(r, r, indexing="ij")
        ks, ls = np.ascontiguousarray(K.ravel()), np.ascontiguousarray(L_.ravel())
    plan.kernels.forward_columns(
        plan.zero_table.values, np.ascontiguousarray(fhat_data, dtype=complex), N, ks, ls, False, out,
        plan.nthreads,
    )
    return out


def forward(plan: WignerTransformPlan, fhat: HarmonicCoefficients) -> FourierCube:
    """Fourier coefficients of the DFS lift of ``fhat``."""
    _check_bw(plan, fhat.bandwidth, "coefficient")
    return FourierCube(plan.bandwidth, _forward_raw(plan, fhat.data, plan.bandwidth))


def adjoint(plan: WignerTransformPlan, ghat: FourierCube) -> HarmonicCoefficients:
    """Conjugate transpose of :func:`forward`."""
    _check_bw(plan, ghat.bandwidth, "cube")
    N = plan.bandwidth
    out = np.zeros(dimension(N), dtype=complex)
    ks, ls = plan._columns
    plan.kernels.adjoint_columns(
        plan.zero_table.values, np.ascontiguousarray(ghat.data), N, ks, ls, out, plan.nthreads
    )
    return HarmonicCoefficients(N, out)


def forward_symmetric(plan: WignerTransformPlan, fhat: HarmonicCoefficients, check: bool = True) -> FourierCube:
    """:func:`forward` for symmetric input, computing one column per symmetry class.

    Only nonnegative ``j`` are computed for each representative column; the
    rest of the cube follows from BMC and the pattern relations of
    ``plan.symmetry``.  With ``check`` the input pattern is verified first.
    """
    spec = plan.symmetry
    if spec is None:
        raise ValueError("plan carries no symmetry specification")
    _check_bw(plan, fhat.bandwidth, "coefficient")
    if check:
        core = SymmetrySpec(spec.right.dihedral_core, spec.left.dihedral_core, spec.real_valued, spec.inversion)
        rep = check_pattern(fhat, core, tol=1e-10)
        if not rep.passed:
            name, v = next(iter(rep.failures().items()))
            where = rep.first_violation.get(name)
            raise SymmetryError(f"coefficients violate the {name} pattern at (n,k,l)={where} (|dev|={v:.3g})")
    N = plan.bandwidth
    cls = column_classes(N, spec)
    L = 2 * N + 1
    out = np.zeros((L, L, L), dtype=complex)
    ks = np.ascontiguousarray(cls.reps[:, 0])
    ls = np.ascontiguousarray(cls.reps[:, 1])
    plan.kernels.forward_columns(
        plan.zero_table.values, np.ascontiguousarray(fhat.data), N, ks, ls, True, out, plan.nthreads
    )
    # BMC: g[k,-j,l] = (-1)^(k+l) g[k,j,l]
    sg = np.where((ks + ls) % 2, -1.0, 1.0)
    out[ks + N, :N, ls + N] = sg[:, None] * out[ks + N, L - 1 : N : -1, ls + N]
    if cls.derived:
        d = np.array([row[:4] for row in cls.derived], dtype=np.int64)
        ops = np.array([row[4:] for row in cls.derived], dtype=float)
        src = out[d[:, 2] + N, :, d[:, 3] + N]  # (P, L)
        flip = ops[:, 2].astype(bool)
        src = np.where(flip[:, None], src[:, ::-1], src)
        src = np.where(ops[:, 3].astype(bool)[:, None], np.conj(src), src)
        jsign = np.where(np.arange(-N, N + 1) % 2, -1.0, 1.0)
        fac = ops[:, 0][:, None] * np.where(ops[:, 1].astype(bool)[:, None], jsign[None, :], 1.0)
        out[d[:, 0] + N, :, d[:, 1] + N] = fac * src
    return FourierCube(N, out)


def extended_forward(plan: WignerTransformPlan, fhat: HarmonicCoefficients, N_trunc: int) -> FourierCube:
    """Forward transform of the degree-``<= N_trunc`` part of ``fhat``, on the cube of bandwidth ``N_trunc``."""
    if not 0 <= N_trunc <= fhat.bandwidth:
        raise ValueError(f"truncation bandwidth {N_trunc} outside 0..{fhat.bandwidth}")
    if plan.zero_table.bandwidth < N_trunc:
        raise ValueError("plan zero table too small for this truncation")
    return FourierCube(N_trunc, _forward_raw(plan, fhat.data[: dimension(N_trunc)], N_trunc))


def materialize_matrix(plan: WignerTransformPlan) -> np.ndarray:
    """Dense ``(2N+1)^3 x dim(J_N)`` matrix of :func:`forward`."""
    N = plan.bandwidth
    if N > MAX_DENSE_BANDWIDTH:
        raise ValueError(f"dense Wigner matrix limited to N <= {MAX_DENSE_BANDWIDTH}")
    L = 2 * N + 1
    W = np.zeros((L, L, L, dimension(N)), dtype=complex)
    ph4 = np.array([1.0, 1j, -1.0, -1j])
    for n in range(N + 1):
        w = 2 * n + 1
        B = plan.zero_table.block(n)  # B[j+n, k+n] = d^n_{j,k}(0)
        r = np.arange(-n, n + 1)
        k, j, l = np.meshgrid(r, r, r, indexing="ij")
        val = ph4[np.mod(k - l, 4)] * math.sqrt(w) * B[j + n, k + n] * B[j + n, l + n]
        col = block_offset(n) + (-k + n) * w + (-l + n)
        W[k + N, j + N, l + N, col] = val
    return W.reshape(L**3, dimension(N))


def singular_values(plan: WignerTransformPlan) -> np.ndarray:
    """Singular values of the Wigner transform, from its ``(k, l)`` column blocks."""
    N = plan.bandwidth
    sv = []
    for k in range(-N, N + 1):
        for l in range(-N, N + 1):
            n0 = max(abs(k), abs(l))
            blk = np.zeros((2 * N + 1, N + 1 - n0))
            for c, n in enumerate(range(n0, N + 1)):
                B = plan.zero_table.block(n)
                blk[N - n : N + n + 1, c] = math.sqrt(2 * n + 1) * B[:, k + n] * B[:, l + n]
            sv.append(np.linalg.svd(blk, compute_uv=False))
    return np.concatenate(sv)


def condition_number(plan: WignerTransformPlan, dense: bool = True) -> float:
    """``sigma_max / sigma_min`` of the Wigner transform."""
    if dense:
        s = np.linalg.svd(materialize_matrix(plan), compute_uv=False)
    else:
        s = singular_values(plan)
    return float(s.max() / s.min())

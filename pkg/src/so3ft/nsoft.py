"""Nonequispaced SO(3) Fourier transform ``D = F W`` and its adjoint.

``W`` is the Wigner transform (harmonic to torus Fourier coefficients) and
``F`` the trivariate Fourier synthesis at the nodes.  A plan targets either
an arbitrary node list or a quadrature rule grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FourierCube, HarmonicCoefficients, RotationList, block_offset
from .fourier import adjoint_synthesize_at, grid_analysis, synthesize_at, synthesize_grid, synthesize_real_at
from .quadrature import QuadratureRule, weighted_analysis
from .special import wigner_d_block
from .symmetry import SymmetrySpec, check_pattern
from .wigner import WignerTransformPlan, adjoint, forward, forward_symmetric, make_plan

_REAL_SPEC = SymmetrySpec(real_valued=True)
_DIRECT_CHUNK = 1 << 21


@dataclass(frozen=True)
class NsoftPlan:
    bandwidth: int
    wigner: WignerTransformPlan
    nodes: RotationList | None = None
    rule: QuadratureRule | None = None

    def __post_init__(self):
        if (self.nodes is None) == (self.rule is None):
            raise ValueError("an NSOFT plan needs exactly one of nodes or rule")
        if self.wigner.bandwidth != self.bandwidth:
            raise ValueError("Wigner plan bandwidth differs from NSOFT bandwidth")
        if self.rule is not None and self.rule.bandwidth != self.bandwidth:
            raise ValueError("rule bandwidth differs from NSOFT bandwidth")
        if self.nodes is not None and len(self.nodes) < 1:
            raise ValueError("node list is empty")

    @property
    def size(self) -> int:
        return len(self.nodes) if self.nodes is not None else self.rule.size


def make_nsoft_plan(N: int, nodes: RotationList | None = None, rule: QuadratureRule | None = None,
                    symmetry: SymmetrySpec | None = None, backend: str | None = None,
                    threads: int | None = None) -> NsoftPlan:
    return NsoftPlan(N, make_plan(N, symmetry, backend, threads), nodes, rule)


def _check_bw(plan: NsoftPlan, N: int) -> None:
    if N != plan.bandwidth:
        raise ValueError(f"coefficient bandwidth {N} does not match plan bandwidth {plan.bandwidth}")


def wigner_stage(plan: NsoftPlan, fhat: HarmonicCoefficients) -> FourierCube:
    """The ``W`` factor, using the symmetric kernel when the plan carries a spec."""
    _check_bw(plan, fhat.bandwidth)
    if plan.wigner.symmetry is not None and not plan.wigner.symmetry.is_trivial:
        return forward_symmetric(plan.wigner, fhat)
    return forward(plan.wigner, fhat)


def synthesis_stage(plan: NsoftPlan, ghat: FourierCube, real: bool = False) -> np.ndarray:
    """The ``F`` factor at the plan's nodes or grid."""
    if plan.rule is not None:
        return synthesize_grid(ghat, plan.rule.grid).ravel()
    if real:
        return synthesize_real_at(ghat, plan.nodes).astype(complex)
    return synthesize_at(ghat, plan.nodes)


def is_real_pattern(fhat: HarmonicCoefficients, tol: float = 1e-12) -> bool:
    return check_pattern(fhat, _REAL_SPEC, tol).passed


def nsoft_forward(plan: NsoftPlan, fhat: HarmonicCoefficients, real: bool | None = None) -> np.ndarray:
    """``f(R_m) = sum fhat_n^{k,l} D^n_{k,l}(R_m)`` at every node.

    ``real=None`` picks the half-spectrum synthesis whenever ``fhat`` has
    the real-valued coefficient pattern.
    """
    if real is None:
        real = plan.nodes is not None and is_real_pattern(fhat)
    return synthesis_stage(plan, wigner_stage(plan, fhat), real)


def nsoft_forward_staged(plan: NsoftPlan, fhat: HarmonicCoefficients) -> tuple[FourierCube, np.ndarray]:
    ghat = wigner_stage(plan, fhat)
    return ghat, synthesis_stage(plan, ghat)


def nsoft_adjoint(plan: NsoftPlan, values, weights=None) -> HarmonicCoefficients:
    """``W^H F^H (w * values)``; without ``weights`` this is the bare adjoint."""
    v = np.asarray(values, dtype=complex).ravel()
    if v.size != plan.size:
        raise ValueError(f"expected {plan.size} values, got {v.size}")
    if weights is not None:
        v = v * np.asarray(weights, dtype=float).ravel()
    N = plan.bandwidth
    if plan.rule is not None:
        ghat = grid_analysis(v, plan.rule.grid, N, weights=1.0)
    else:
        ghat = adjoint_synthesize_at(v, plan.nodes, N)
    return adjoint(plan.wigner, ghat)


def quadrature_analyze(plan: NsoftPlan, values) -> HarmonicCoefficients:
    """Coefficient recovery from samples on the plan's rule grid."""
    if plan.rule is None:
        raise ValueError("plan has no quadrature rule")
    return adjoint(plan.wigner, weighted_analysis(plan.rule, values))


def direct_forward(fhat: HarmonicCoefficients, nodes: RotationList) -> np.ndarray:
    """Unfactorized ``sum_{n,k,l} fhat_n^{k,l} D^n_{k,l}(R_m)`` (reference, O(M dim))."""
    N = fhat.bandwidth
    A = nodes.angles
    M = len(nodes)
    out = np.zeros(M, dtype=complex)
    for n in range(N + 1):
        w = 2 * n + 1
        r = np.arange(-n, n + 1)
        F = fhat.block(n)
        step = max(1, _DIRECT_CHUNK // (w * w))
        for s in range(0, M, step):
            sl = slice(s, min(M, s + step))
            d = wigner_d_block(n, np.cos(A[sl, 1]))  # (k, l, m)
            ea = np.exp(-1j * np.outer(r, A[sl, 0]))
            ec = np.exp(-1j * np.outer(r, A[sl, 2]))
            t = np.einsum("kl,klm,lm->km", F, d, ec)
            out[sl] += math.sqrt(w) * np.einsum("km,km->m", t, ea)
    return out


def direct_adjoint(values, nodes: RotationList, N: int) -> HarmonicCoefficients:
    """Unfactorized ``sum_m v_m conj(D^n_{k,l}(R_m))`` (reference)."""
    v = np.asarray(values, dtype=complex).ravel()
    A = nodes.angles
    out = []
    for n in range(N + 1):
        r = np.arange(-n, n + 1)
        d = wigner_d_block(n, np.cos(A[:, 1]))
        ea = np.exp(1j * np.outer(r, A[:, 0]))
        ec = np.exp(1j * np.outer(r, A[:, 2]))
        out.append(math.sqrt(2 * n + 1) * np.einsum("km,klm,lm,m->kl", ea, d, ec, v).ravel())
    data = np.concatenate(out) if out else np.zeros(0)
    assert data.size == block_offset(N + 1)
    return HarmonicCoefficients(N, data)

"""Exact product quadrature on SO(3) and coefficient recovery from samples.

Both rules use ``2N+2`` equispaced points along alpha and gamma.  Along beta
the Clenshaw-Curtis rule takes ``beta_b = pi b / (2N+1)``, ``b = 0..2N+1``,
with the classical Clenshaw-Curtis weights in ``t = cos(beta)``; the
Gauss-Legendre rule takes the ``N+1`` arccosines of the roots of ``P_{N+1}``.
Weights are scaled to total mass one (normalized Haar measure).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import FourierCube, HarmonicCoefficients, RotationList
from .fourier import GridSpec, grid_analysis, synthesize_grid
from .wigner import WignerTransformPlan, adjoint, forward, make_plan

FLAVORS = ("cc", "gl")
_NEWTON_MAX = 100


class ConvergenceError(RuntimeError):
    pass


def legendre_roots(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Roots of ``P_n`` (ascending) and the Gauss-Legendre weights.

    Newton's method from Chebyshev-type initial guesses, all roots at once.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    i = np.arange(1, n + 1)
    x = np.cos(math.pi * (i - 0.25) / (n + 0.5))
    for it in range(_NEWTON_MAX + 1):
        p0, p1 = np.ones_like(x), x.copy()
        for m in range(2, n + 1):
            p0, p1 = p1, ((2 * m - 1) * x * p1 - (m - 1) * p0) / m
        if n == 1:
            p0, p1 = np.ones_like(x), x
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.abs(dx).max() <= 1e-15:
            break
    else:
        raise ConvergenceError(f"Newton iteration for the roots of P_{n} did not converge")
    # derivative at the final iterate for the weights
    p0, p1 = np.ones_like(x), x.copy()
    for m in range(2, n + 1):
        p0, p1 = p1, ((2 * m - 1) * x * p1 - (m - 1) * p0) / m
    if n == 1:
        p0 = np.ones_like(x)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # enforce the exact reflection symmetry of the rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def clenshaw_curtis_weights(M: int) -> np.ndarray:
    """Weights for nodes ``cos(pi b / M)``, ``b = 0..M``, on ``[-1, 1]``."""
    if M == 0:
        return np.array([2.0])
    theta = math.pi * np.arange(M + 1) / M
    w = np.ones(M + 1)
    for j in range(1, M // 2 + 1):
        bj = 1.0 if 2 * j == M else 2.0
        w -= bj * np.cos(2 * j * theta) / (4 * j * j - 1)
    c = np.full(M + 1, 2.0)
    c[0] = c[-1] = 1.0
    return c * w / M


@dataclass(frozen=True)
class QuadratureRule:
    """Product rule: ``alpha`` x ``beta`` x ``gamma``, gamma fastest.

    ``beta_weights`` sum to one; the weight of grid point ``(a, b, c)`` is
    ``beta_weights[b] / (A C)``.
    """

    bandwidth: int
    flavor: str
    grid: GridSpec
    beta_weights: np.ndarray

    @property
    def alpha(self) -> np.ndarray:
        return self.grid.alpha_nodes

    @property
    def beta(self) -> np.ndarray:
        return self.grid.beta_nodes

    @property
    def gamma(self) -> np.ndarray:
        return self.grid.gamma_nodes

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.grid.shape

    @cached_property
    def nodes(self) -> RotationList:
        return self.grid.nodes()

    def weight_grid(self) -> np.ndarray:
        A, _, C = self.grid.shape
        return (self.beta_weights / (A * C))[None, :, None]

    @property
    def weights(self) -> np.ndarray:
        """Per-node weights in node order."""
        return np.broadcast_to(self.weight_grid(), self.grid.shape).ravel()


def _angular_count(N: int) -> int:
    return 2 * N + 2


def clenshaw_curtis_rule(N: int) -> QuadratureRule:
    if N < 0:
        raise ValueError("bandwidth must be nonnegative")
    M = 2 * N + 1
    beta = math.pi * np.arange(M + 1) / M
    w = clenshaw_curtis_weights(M) / 2.0
    A = _angular_count(N)
    return QuadratureRule(N, "cc", GridSpec(A, beta, A, 2 * M), w)


def gauss_legendre_rule(N: int) -> QuadratureRule:
    if N < 0:
        raise ValueError("bandwidth must be nonnegative")
    x, w = legendre_roots(N + 1)
    # ascending beta means descending x
    beta = np.arccos(x[::-1])
    A = _angular_count(N)
    return QuadratureRule(N, "gl", GridSpec(A, beta, A, None), w[::-1] / 2.0)


def make_rule(N: int, flavor: str = "cc") -> QuadratureRule:
    flavor = flavor.lower()
    if flavor == "cc":
        return clenshaw_curtis_rule(N)
    if flavor == "gl":
        return gauss_legendre_rule(N)
    raise ValueError(f"unknown quadrature flavor {flavor!r}; expected one of {FLAVORS}")


def _plan_for(rule: QuadratureRule, plan: WignerTransformPlan | None) -> WignerTransformPlan:
    if plan is None:
        return make_plan(rule.bandwidth)
    if plan.bandwidth != rule.bandwidth:
        raise ValueError(f"plan bandwidth {plan.bandwidth} does not match rule bandwidth {rule.bandwidth}")
    return plan


def weighted_analysis(rule: QuadratureRule, samples) -> FourierCube:
    """``F^H Lambda samples`` on the rule grid."""
    s = np.asarray(samples)
    if s.size != rule.size:
        raise ValueError(f"expected {rule.size} samples, got {s.size}")
    return grid_analysis(s.reshape(rule.shape), rule.grid, rule.bandwidth, rule.weight_grid())


def analyze(rule: QuadratureRule, samples, plan: WignerTransformPlan | None = None) -> HarmonicCoefficients:
    """Harmonic coefficients ``sum_m w_m f(R_m) conj(D^n_{k,l}(R_m))``."""
    plan = _plan_for(rule, plan)
    return adjoint(plan, weighted_analysis(rule, samples))


def sample(rule: QuadratureRule, fhat: HarmonicCoefficients, plan: WignerTransformPlan | None = None) -> np.ndarray:
    """Values of the harmonic series at the rule nodes (node order)."""
    plan = _plan_for(rule, plan)
    return synthesize_grid(forward(plan, fhat), rule.grid).ravel()

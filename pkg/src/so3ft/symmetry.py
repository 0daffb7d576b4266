"""Finite point groups, symmetric projections and coefficient patterns.

A function with right group ``S_R`` and left group ``S_L`` satisfies
``f(R) = f(s_R R s_L)``; the right group therefore acts by multiplication
from the left, which ties it to the first order index ``k``.

Harmonic-side patterns (cyclic groups give zeros, the rest are linkages)::

    real        f_n^{k,l} = (-1)^(k+l) conj(f_n^{-k,-l})
    inversion   f_n^{k,l} = (-1)^(k+l) f_n^{-l,-k}
    C_r right   f_n^{k,l} = 0 unless r | k        (left: r | l)
    D_r right   f_n^{k,l} = (-1)^(n+k) f_n^{-k,l} (left: (-1)^(n+l) f_n^{k,-l})

Fourier-cube patterns::

    BMC         g[k,j,l] = (-1)^(k+l) g[k,-j,l]   (always)
    real        g[k,j,l] = conj(g[-k,-j,-l])
    inversion   g[k,j,l] = g[-l,-j,-k]
    C_r right   g[k,j,l] = 0 unless r | k         (left: r | l)
    D_r right   g[k,j,l] = (-1)^j g[-k,j,l]       (left: (-1)^j g[k,j,-l])
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .core import (
    EulerAngles,
    HarmonicCoefficients,
    FourierCube,
    RotationList,
    block_offset,
    dimension,
    euler_from_matrices,
    harmonic_index,
    rot_axis,
    rot_y,
    rot_z,
)
from .special import wigner_D_matrix

_CLOSURE_TOL = 1e-10
_GROUP_RE = re.compile(r"^\s*([CD])(\d+)\s*$|^\s*([TOI])\s*$")


class SymmetryError(ValueError):
    """Coefficients violate the pattern required by a symmetry specification."""


def _dedupe(mats: list[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for m in mats:
        if all(np.abs(m - o).max() > 1e-8 for o in out):
            out.append(m)
    return out


def _cyclic(r: int) -> list[np.ndarray]:
    return [rot_z(2 * math.pi * s / r) for s in range(r)]


def _dihedral(r: int) -> list[np.ndarray]:
    return [c @ rot_y(math.pi * t) for t in (0, 1) for c in _cyclic(r)]


def _three_fold(s: int) -> np.ndarray:
    return rot_axis([1.0, 1.0, 1.0], 2 * math.pi * s / 3)


def _icosahedral() -> list[np.ndarray]:
    phi = (1 + math.sqrt(5)) / 2
    eta = [phi**2, 0.0, phi + math.sqrt(1 + phi**2) * math.sin(2 * math.pi / 5)]
    D5 = _dihedral(5)
    mats = [
        rot_axis(eta, 2 * math.pi * s / 3) @ d @ rot_axis(eta, 2 * math.pi * t / 3)
        for s in range(3)
        for t in range(3)
        for d in D5
    ]
    return _dedupe(mats)


@dataclass(frozen=True)
class PointGroup:
    """One of the finite rotation groups ``C_r``, ``D_r``, ``T``, ``O``, ``I``."""

    kind: str
    order: int = 1

    def __post_init__(self):
        if self.kind not in ("C", "D", "T", "O", "I"):
            raise ValueError(f"unknown point group kind {self.kind!r}")
        if self.kind in ("C", "D") and self.order < 1:
            raise ValueError("cyclic/dihedral order must be positive")
        if self.kind in ("T", "O", "I"):
            object.__setattr__(self, "order", {"T": 2, "O": 4, "I": 5}[self.kind])
        mats = self.matrices  # noqa: F841  (validated on first access)

    @classmethod
    def parse(cls, label: str) -> "PointGroup":
        m = _GROUP_RE.match(label.upper())
        if not m:
            raise ValueError(f"cannot parse point group {label!r} (expected Cr, Dr, T, O or I)")
        if m.group(3):
            return cls(m.group(3))
        return cls(m.group(1), int(m.group(2)))

    @property
    def label(self) -> str:
        return self.kind if self.kind in ("T", "O", "I") else f"{self.kind}{self.order}"

    @property
    def cardinality(self) -> int:
        return {"C": self.order, "D": 2 * self.order, "T": 12, "O": 24, "I": 60}[self.kind]

    @property
    def is_trivial(self) -> bool:
        return self.kind == "C" and self.order == 1

    @property
    def has_pattern(self) -> bool:
        return self.kind in ("C", "D")

    @property
    def dihedral_core(self) -> "PointGroup":
        """Largest cyclic/dihedral subgroup along the z/y axes (the group itself for C/D)."""
        if self.kind in ("C", "D"):
            return self
        return PointGroup("D", self.order)

    @cached_property
    def matrices(self) -> np.ndarray:
        if self.kind == "C":
            mats = _cyclic(self.order)
        elif self.kind == "D":
            mats = _dihedral(self.order)
        elif self.kind == "T":
            mats = [d @ _three_fold(s) for s in range(3) for d in _dihedral(2)]
        elif self.kind == "O":
            mats = [d @ _three_fold(s) for s in range(3) for d in _dihedral(4)]
        else:
            mats = _icosahedral()
        mats = np.array(_dedupe(mats))
        if len(mats) != self.cardinality:
            raise RuntimeError(f"{self.label}: built {len(mats)} elements, expected {self.cardinality}")
        _check_closure(mats, self.label)
        return mats

    def elements(self) -> RotationList:
        return RotationList(euler_from_matrices(self.matrices))

    def __str__(self) -> str:
        return self.label


def _check_closure(mats: np.ndarray, label: str) -> None:
    flat = mats.reshape(len(mats), 9)
    for a in mats:
        prod = np.einsum("ij,mjk->mik", a, mats).reshape(len(mats), 9)
        dist = np.abs(prod[:, None, :] - flat[None, :, :]).max(axis=2).min(axis=1)
        if dist.max() > _CLOSURE_TOL:
            raise RuntimeError(f"{label}: element set is not closed under composition")


def group_elements(g: PointGroup) -> RotationList:
    """Euler angles of every element of ``g``."""
    return g.elements()


TRIVIAL = PointGroup("C", 1)


@dataclass(frozen=True)
class SymmetrySpec:
    """Right/left point groups plus real-valuedness and inversion flags."""

    right: PointGroup = TRIVIAL
    left: PointGroup = TRIVIAL
    real_valued: bool = False
    inversion: bool = False

    def __post_init__(self):
        if isinstance(self.right, str):
            object.__setattr__(self, "right", PointGroup.parse(self.right))
        if isinstance(self.left, str):
            object.__setattr__(self, "left", PointGroup.parse(self.left))
        if self.inversion and self.right != self.left:
            raise ValueError("inversion symmetry requires identical left and right groups")

    @property
    def is_trivial(self) -> bool:
        return self.right.is_trivial and self.left.is_trivial and not (self.real_valued or self.inversion)

    @property
    def has_pattern(self) -> bool:
        return self.right.has_pattern and self.left.has_pattern

    def __str__(self) -> str:
        parts = [f"right={self.right}", f"left={self.left}"]
        if self.real_valued:
            parts.append("real")
        if self.inversion:
            parts.append("inversion")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# projections


def _averaging_matrix(g: PointGroup, n: int) -> np.ndarray:
    """Mean of the transposed degree-n representation matrices over ``g``."""
    acc = np.zeros((2 * n + 1, 2 * n + 1), dtype=complex)
    for R in g.elements():
        acc += wigner_D_matrix(n, R).T
    return acc / g.cardinality


def symmetrize(fhat: HarmonicCoefficients, spec: SymmetrySpec) -> HarmonicCoefficients:
    """Orthogonal projection onto coefficient vectors with symmetry ``spec``.

    Group invariance is imposed by averaging with the Wigner-D matrices of
    the group elements, degree by degree; then the real-valued and inversion
    projections are applied.
    """
    blocks = []
    for n in range(fhat.bandwidth + 1):
        F = np.array(fhat.block(n))
        if not spec.right.is_trivial:
            F = _averaging_matrix(spec.right, n) @ F
        if not spec.left.is_trivial:
            F = F @ _averaging_matrix(spec.left, n)
        sgn = _parity_sign(n)
        if spec.real_valued:
            F = 0.5 * (F + sgn * np.conj(F[::-1, ::-1]))
        if spec.inversion:
            F = 0.5 * (F + sgn * F[::-1, ::-1].T)
        blocks.append(F)
    return HarmonicCoefficients.from_blocks(blocks)


def _parity_sign(n: int) -> np.ndarray:
    r = np.arange(-n, n + 1)
    return np.where((r[:, None] + r[None, :]) % 2, -1.0, 1.0)


# ---------------------------------------------------------------------------
# pattern checks


@dataclass
class PatternReport:
    """Maximum violation per pattern clause."""

    tol: float
    violations: dict[str, float] = field(default_factory=dict)
    first_violation: dict[str, tuple[int, int, int]] = field(default_factory=dict)
    unavailable: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.violations.values())

    def failures(self) -> dict[str, float]:
        return {k: v for k, v in self.violations.items() if v > self.tol}

    def __bool__(self) -> bool:
        return self.passed


def _record(report: PatternReport, name: str, dev: np.ndarray, triples) -> None:
    if dev.size == 0:
        report.violations[name] = 0.0
        return
    report.violations[name] = float(dev.max())
    bad = np.flatnonzero(dev > report.tol)
    if bad.size:
        report.first_violation[name] = tuple(int(v) for v in triples[bad[0]])


def _harmonic_tables(N: int):
    from .core import harmonic_triples

    t = harmonic_triples(N)
    n, k, l = t[:, 0], t[:, 1], t[:, 2]
    off = np.array([block_offset(int(m)) for m in range(N + 1)])[n]

    def idx(kk, ll):
        return off + (kk + n) * (2 * n + 1) + (ll + n)

    return t, n, k, l, idx


def check_pattern(fhat: HarmonicCoefficients, spec: SymmetrySpec, tol: float = 1e-12) -> PatternReport:
    """Check the harmonic coefficient pattern implied by ``spec``."""
    rep = PatternReport(tol)
    f = fhat.data
    t, n, k, l, idx = _harmonic_tables(fhat.bandwidth)
    sg = np.where((k + l) % 2, -1.0, 1.0)
    if spec.real_valued:
        _record(rep, "real", np.abs(f - sg * np.conj(f[idx(-k, -l)])), t)
    if spec.inversion:
        _record(rep, "inversion", np.abs(f - sg * f[idx(-l, -k)]), t)
    for side, g, first in (("right", spec.right, k), ("left", spec.left, l)):
        if g.is_trivial:
            continue
        if not g.has_pattern:
            rep.unavailable.append(f"{side}:{g.label} (pattern not available; use pointwise check)")
            continue
        zero = np.mod(first, g.order) != 0
        _record(rep, f"{side}_cyclic", np.abs(f[zero]), t[zero])
        if g.kind == "D":
            s = np.where((n + first) % 2, -1.0, 1.0)
            other = idx(-k, l) if side == "right" else idx(k, -l)
            _record(rep, f"{side}_dihedral", np.abs(f - s * f[other]), t)
    return rep


def check_cube_pattern(ghat: FourierCube, spec: SymmetrySpec, tol: float = 1e-12) -> PatternReport:
    """Check the Fourier-cube pattern implied by ``spec``, including BMC."""
    rep = PatternReport(tol)
    N = ghat.bandwidth
    g = ghat.data
    r = np.arange(-N, N + 1)
    K, J, L = np.meshgrid(r, r, r, indexing="ij")
    trip = np.stack([K.ravel(), J.ravel(), L.ravel()], axis=1)
    sg = np.where((K + L) % 2, -1.0, 1.0)
    flip = g[:, ::-1, :]
    _record(rep, "bmc", np.abs(g - sg * flip).ravel(), trip)
    if spec.real_valued:
        _record(rep, "real", np.abs(g - np.conj(g[::-1, ::-1, ::-1])).ravel(), trip)
    if spec.inversion:
        _record(rep, "inversion", np.abs(g - np.transpose(g, (2, 1, 0))[::-1, ::-1, ::-1]).ravel(), trip)
    sj = np.where(J % 2, -1.0, 1.0)
    for side, grp, first in (("right", spec.right, K), ("left", spec.left, L)):
        if grp.is_trivial:
            continue
        if not grp.has_pattern:
            rep.unavailable.append(f"{side}:{grp.label} (pattern not available; use pointwise check)")
            continue
        zero = (np.mod(first, grp.order) != 0).ravel()
        _record(rep, f"{side}_cyclic", np.abs(g.ravel()[zero]), trip[zero])
        if grp.kind == "D":
            other = g[::-1, :, :] if side == "right" else g[:, :, ::-1]
            _record(rep, f"{side}_dihedral", np.abs(g - sj * other).ravel(), trip)
    return rep


def compression_factor_of(right, left, real_valued: bool = False, inversion: bool = False) -> Fraction:
    """``(1+real)(1+inversion)|S_L||S_R|`` from its ingredients (cyclic/dihedral groups only).

    Unlike :class:`SymmetrySpec` this does not require equal groups when
    ``inversion`` is set; it only evaluates the counting formula.
    """
    right = PointGroup.parse(right) if isinstance(right, str) else right
    left = PointGroup.parse(left) if isinstance(left, str) else left
    if not (right.has_pattern and left.has_pattern):
        raise ValueError("compression factor is defined for cyclic and dihedral groups only")
    return Fraction((1 + bool(real_valued)) * (1 + bool(inversion)) * left.cardinality * right.cardinality)


def compression_factor(spec: SymmetrySpec) -> Fraction:
    """Storage reduction ``(1+real)(1+inversion)|S_L||S_R|`` for cyclic/dihedral groups."""
    return compression_factor_of(spec.right, spec.left, spec.real_valued, spec.inversion)


# ---------------------------------------------------------------------------
# equivalence classes of harmonic indices
#
# An op (sign, conj) relates a member to its class representative:
# f[member] = sign * (conj(f[rep]) if conj else f[rep]).


def _harmonic_generators(spec: SymmetrySpec):
    gens = []  # (map (n,k,l) -> (n,k',l'), sign(n,k,l), conj)
    if spec.real_valued:
        gens.append((lambda n, k, l: (n, -k, -l), lambda n, k, l: (-1) ** (k + l), True))
    if spec.inversion:
        gens.append((lambda n, k, l: (n, -l, -k), lambda n, k, l: (-1) ** (k + l), False))
    if spec.right.kind == "D":
        gens.append((lambda n, k, l: (n, -k, l), lambda n, k, l: (-1) ** (n + k), False))
    if spec.left.kind == "D":
        gens.append((lambda n, k, l: (n, k, -l), lambda n, k, l: (-1) ** (n + l), False))
    return gens


@dataclass(frozen=True)
class IndexClasses:
    """Partition of ``J_N`` into symmetry classes.

    ``rep[i]`` is the linear index of the representative of coefficient
    ``i`` (``-1`` for coefficients forced to zero), and ``sign[i]``,
    ``conj[i]`` give ``f[i] = sign * C^conj(f[rep[i]])``.  ``halved[i]``
    marks classes whose relations confine the representative to a real
    line (one real degree of freedom instead of two).
    """

    N: int
    rep: np.ndarray
    sign: np.ndarray
    conj: np.ndarray
    halved: np.ndarray = None

    @property
    def real_dof(self) -> int:
        """Real dimension of the space of coefficient vectors with this pattern."""
        reps = self.representatives
        return int(2 * reps.size - np.count_nonzero(self.halved[reps]))

    @property
    def representatives(self) -> np.ndarray:
        return np.unique(self.rep[self.rep >= 0])

    def expand(self, rep_values) -> np.ndarray:
        """Full coefficient vector from values at the representatives."""
        reps = self.representatives
        full = np.zeros(dimension(self.N), dtype=complex)
        full[reps] = rep_values
        ok = self.rep >= 0
        src = full[self.rep[ok]]
        full[ok] = self.sign[ok] * np.where(self.conj[ok], np.conj(src), src)
        return full


def index_classes(N: int, spec: SymmetrySpec) -> IndexClasses:
    if not spec.has_pattern:
        raise ValueError("index classes are defined for cyclic and dihedral groups only")
    dim = dimension(N)
    rep = np.full(dim, -2, dtype=np.int64)
    sign = np.ones(dim)
    conj = np.zeros(dim, dtype=bool)
    halved = np.zeros(dim, dtype=bool)
    gens = _harmonic_generators(spec)
    rR, rL = spec.right.order, spec.left.order
    for n in range(N + 1):
        for k in range(-n, n + 1):
            for l in range(-n, n + 1):
                i0 = harmonic_index(n, k, l)
                if rep[i0] != -2:
                    continue
                if k % rR or l % rL:
                    rep[i0] = -1
                    continue
                members = {(n, k, l): (1.0, False)}
                stack = [(n, k, l)]
                zero = half = False
                while stack:
                    m = stack.pop()
                    s0, c0 = members[m]
                    for fmap, fsign, fconj in gens:
                        t = fmap(*m)
                        st, ct = s0 * fsign(*m), c0 ^ fconj
                        if t not in members:
                            members[t] = (st, ct)
                            stack.append(t)
                        else:
                            s1, c1 = members[t]
                            if c1 == ct and s1 != st:
                                zero = True
                            elif c1 != ct:
                                half = True
                idx = {harmonic_index(*m): v for m, v in members.items()}
                r0 = min(idx)
                sr, cr = idx[r0]
                for i, (s, c) in idx.items():
                    if zero:
                        rep[i] = -1
                        continue
                    # express relative to the smallest index instead of the first visited
                    rep[i] = r0
                    sign[i] = s * sr
                    conj[i] = c ^ cr
                    halved[i] = half
    return IndexClasses(N, rep, sign, conj, halved)


def reduced_index_set(N: int, spec: SymmetrySpec) -> list[tuple[int, int, int]]:
    """One representative ``(n, k, l)`` per free symmetry class (smallest linear index)."""
    from .core import harmonic_triples

    t = harmonic_triples(N)
    return [tuple(int(v) for v in t[i]) for i in index_classes(N, spec).representatives]


# ---------------------------------------------------------------------------
# cube column classes, used by the symmetric Wigner transform
#
# Column op (sign, pj, fj, conj): v_target[j] = sign (-1)^(pj j) C^conj(v_rep[(-1)^fj j]).


@dataclass(frozen=True)
class ColumnClasses:
    N: int
    reps: np.ndarray  # (P, 2) representative (k, l) columns
    zero: np.ndarray  # (Z, 2) columns that vanish
    derived: list  # [(k, l, rk, rl, sign, pj, fj, conj)]


def _column_generators(spec: SymmetrySpec):
    gens = []
    if spec.real_valued:
        gens.append((lambda k, l: (-k, -l), (1.0, 0, 1, 1)))
    if spec.inversion:
        gens.append((lambda k, l: (-l, -k), (1.0, 0, 1, 0)))
    if spec.right.dihedral_core.kind == "D":
        gens.append((lambda k, l: (-k, l), (1.0, 1, 0, 0)))
    if spec.left.dihedral_core.kind == "D":
        gens.append((lambda k, l: (k, -l), (1.0, 1, 0, 0)))
    return gens


def _compose(a, b):
    # b applied after a
    return (a[0] * b[0], a[1] ^ b[1], a[2] ^ b[2], a[3] ^ b[3])


def column_classes(N: int, spec: SymmetrySpec) -> ColumnClasses:
    rR, rL = spec.right.dihedral_core.order, spec.left.dihedral_core.order
    gens = _column_generators(spec)
    seen: set[tuple[int, int]] = set()
    reps, zero, derived = [], [], []
    for k in range(-N, N + 1):
        for l in range(-N, N + 1):
            if (k, l) in seen:
                continue
            if k % rR or l % rL:
                seen.add((k, l))
                zero.append((k, l))
                continue
            ops = {(k, l): (1.0, 0, 0, 0)}
            stack = [(k, l)]
            while stack:
                c = stack.pop()
                for fmap, op in gens:
                    t = fmap(*c)
                    if t not in ops:
                        ops[t] = _compose(ops[c], op)
                        stack.append(t)
            reps.append((k, l))
            for t, op in ops.items():
                seen.add(t)
                if t != (k, l):
                    derived.append((t[0], t[1], k, l) + op)
    return ColumnClasses(
        N,
        np.array(reps, dtype=np.int64).reshape(-1, 2),
        np.array(zero, dtype=np.int64).reshape(-1, 2),
        derived,
    )


def pointwise_invariance_error(values_fn, spec: SymmetrySpec, nodes: RotationList) -> float:
    """Max ``|f(s_R R s_L) - f(R)|`` over group elements and ``nodes``.

    ``values_fn`` maps a RotationList to function values.
    """
    base = values_fn(nodes)
    Rm = nodes.matrices()
    err = 0.0
    for P in spec.right.matrices:
        for Q in spec.left.matrices:
            moved = RotationList.from_matrices(np.einsum("ij,mjk,kl->mil", P, Rm, Q))
            err = max(err, float(np.abs(values_fn(moved) - base).max()))
    if spec.inversion:
        inv = RotationList.from_matrices(np.transpose(Rm, (0, 2, 1)))
        err = max(err, float(np.abs(values_fn(inv) - base).max()))
    if spec.real_valued:
        err = max(err, float(np.abs(np.imag(base)).max()))
    return err

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from so3ft.core import EulerAngles, HarmonicCoefficients, RotationList, dimension, iter_harmonic, random_rotations
from so3ft.nsoft import (
    NsoftPlan,
    direct_adjoint,
    direct_forward,
    is_real_pattern,
    make_nsoft_plan,
    nsoft_adjoint,
    nsoft_forward,
    nsoft_forward_staged,
    quadrature_analyze,
)
from so3ft.quadrature import analyze, make_rule
from so3ft.special import wigner_D
from so3ft.symmetry import SymmetrySpec, symmetrize

from conftest import cached_plan, random_harmonic


def _plan(N, nodes=None, rule=None, symmetry=None):
    return NsoftPlan(N, cached_plan(N) if symmetry is None else make_nsoft_plan(N, symmetry=symmetry, nodes=nodes).wigner,
                     nodes, rule)


def test_unit_coefficients(rng):
    nodes = random_rotations(7, rng)
    v = nsoft_forward(_plan(2, nodes), HarmonicCoefficients.unit(2, 0, 0, 0))
    assert np.allclose(v, 1.0, atol=1e-14)
    v = nsoft_forward(_plan(2, nodes), HarmonicCoefficients.unit(2, 2, 1, -1))
    ref = [wigner_D(2, 1, -1, EulerAngles(*a)) for a in nodes.angles]
    assert np.allclose(v, ref, atol=1e-13)


@pytest.mark.parametrize("N", [0, 1, 3, 8, 16])
def test_matches_direct(N, rng):
    nodes = random_rotations(60, rng)
    f = random_harmonic(N, rng)
    ref = direct_forward(f, nodes)
    v = nsoft_forward(_plan(N, nodes), f)
    assert np.abs(v - ref).max() <= 1e-11 * np.abs(ref).max()


def test_direct_forward_is_pointwise_sum(rng):
    N = 2
    nodes = random_rotations(5, rng)
    f = random_harmonic(N, rng)
    ref = [sum(f[(n, k, l)] * wigner_D(n, k, l, EulerAngles(*a)) for n, k, l in iter_harmonic(N)) for a in nodes.angles]
    assert np.allclose(direct_forward(f, nodes), ref, atol=1e-13)


def test_real_path(rng):
    N = 6
    nodes = random_rotations(40, rng)
    f = symmetrize(random_harmonic(N, rng), SymmetrySpec(real_valued=True))
    assert is_real_pattern(f)
    v = nsoft_forward(_plan(N, nodes), f)
    assert np.abs(v.imag).max() == 0.0
    full = nsoft_forward(_plan(N, nodes), f, real=False)
    assert np.abs(v - full).max() <= 1e-12 * np.abs(full).max()
    assert np.abs(full.imag).max() <= 1e-12 * np.abs(full).max()


def test_symmetric_plan(rng):
    N = 6
    spec = SymmetrySpec("D3", "C2")
    nodes = random_rotations(30, rng)
    f = symmetrize(random_harmonic(N, rng), spec)
    v = nsoft_forward(make_nsoft_plan(N, nodes=nodes, symmetry=spec), f)
    assert np.allclose(v, direct_forward(f, nodes), atol=1e-11 * np.abs(v).max())


def test_adjoint_at_identity():
    N = 4
    plan = _plan(N, RotationList(np.zeros((1, 3))))
    f = nsoft_adjoint(plan, [1.0])
    for n, k, l in iter_harmonic(N):
        assert f[(n, k, l)] == pytest.approx(math.sqrt(2 * n + 1) * (k == l), abs=1e-13)


@given(st.integers(0, 2**32 - 1), st.integers(0, 8))
def test_adjointness(seed, N):
    rng = np.random.default_rng(seed)
    nodes = random_rotations(25, rng)
    plan = _plan(N, nodes)
    x = random_harmonic(N, rng)
    y = rng.standard_normal(25) + 1j * rng.standard_normal(25)
    lhs = np.vdot(y, nsoft_forward(plan, x, real=False))
    rhs = np.vdot(nsoft_adjoint(plan, y).data, x.data)
    assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(x.data) * np.linalg.norm(y) * len(nodes)


def test_adjoint_matches_direct(rng):
    N = 5
    nodes = random_rotations(30, rng)
    y = rng.standard_normal(30) + 1j * rng.standard_normal(30)
    a = nsoft_adjoint(_plan(N, nodes), y)
    assert np.allclose(a.data, direct_adjoint(y, nodes, N).data, atol=1e-11)


@pytest.mark.parametrize("flavor", ["cc", "gl"])
def test_rule_plan(flavor, rng):
    N = 7
    rule = make_rule(N, flavor)
    plan = _plan(N, rule=rule)
    f = random_harmonic(N, rng)
    ghat, v = nsoft_forward_staged(plan, f)
    assert np.allclose(v, direct_forward(f, rule.nodes), atol=1e-11 * np.abs(v).max())
    weighted = nsoft_adjoint(plan, v, rule.weights)
    assert np.allclose(weighted.data, f.data, atol=1e-12)
    assert np.allclose(weighted.data, analyze(rule, v, plan.wigner).data, atol=1e-13)
    assert np.allclose(quadrature_analyze(plan, v).data, f.data, atol=1e-12)
    # scattered-node plan on the same nodes agrees with the grid plan
    scattered = nsoft_adjoint(_plan(N, rule.nodes), v, rule.weights)
    assert np.allclose(scattered.data, weighted.data, atol=1e-12)


def test_plan_validation(rng):
    nodes = random_rotations(3, rng)
    with pytest.raises(ValueError):
        NsoftPlan(2, cached_plan(2))
    with pytest.raises(ValueError):
        NsoftPlan(2, cached_plan(2), nodes, make_rule(2))
    with pytest.raises(ValueError):
        NsoftPlan(3, cached_plan(2), nodes)
    with pytest.raises(ValueError):
        NsoftPlan(2, cached_plan(2), rule=make_rule(3))
    plan = _plan(2, nodes)
    with pytest.raises(ValueError):
        nsoft_forward(plan, random_harmonic(3, rng))
    with pytest.raises(ValueError):
        nsoft_adjoint(plan, np.ones(4))
    with pytest.raises(ValueError):
        quadrature_analyze(plan, np.ones(3))

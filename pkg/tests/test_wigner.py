import math

import numpy as np
import pytest

from so3ft import _backend
from so3ft.core import FourierCube, HarmonicCoefficients, dimension, harmonic_index, random_rotations
from so3ft.fourier import synthesize_at
from so3ft.nsoft import direct_forward
from so3ft.symmetry import SymmetryError, SymmetrySpec, check_cube_pattern, symmetrize
from so3ft.wigner import (
    MAX_DENSE_BANDWIDTH,
    WignerTransformPlan,
    adjoint,
    condition_number,
    extended_forward,
    forward,
    forward_symmetric,
    make_plan,
    materialize_matrix,
    singular_values,
)

from conftest import cached_plan, random_harmonic

BACKENDS = sorted(_backend.BACKENDS)


def _rel(a, b):
    return np.abs(a - b).max() / np.abs(b).max()


def test_bandwidth_zero():
    plan = make_plan(0)
    g = forward(plan, HarmonicCoefficients(0, [2.5 - 1j]))
    assert g.data.shape == (1, 1, 1) and g.data[0, 0, 0] == 2.5 - 1j
    f = adjoint(plan, FourierCube(0, [[[3.0]]]))
    assert f.data[0] == 3.0


def test_unit_degree_one():
    plan = make_plan(1)
    g = forward(plan, HarmonicCoefficients.unit(1, 1, 0, 0))
    s3 = math.sqrt(3)
    assert g[(0, 1, 0)] == pytest.approx(s3 / 2)
    assert g[(0, -1, 0)] == pytest.approx(s3 / 2)
    assert g[(0, 0, 0)] == 0
    assert np.count_nonzero(g.data) == 2


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("N", [1, 3, 8, 12])
def test_pointwise_oracle(N, backend, rng):
    plan = cached_plan(N, backend)
    f = random_harmonic(N, rng)
    nodes = random_rotations(50, rng)
    via_torus = synthesize_at(forward(plan, f), nodes)
    assert _rel(via_torus, direct_forward(f, nodes)) <= 1e-11


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("N", [2, 7, 16])
def test_adjointness(N, backend, rng):
    plan = cached_plan(N, backend)
    L = 2 * N + 1
    for _ in range(5):
        x = random_harmonic(N, rng)
        y = FourierCube(N, rng.standard_normal((L, L, L)) + 1j * rng.standard_normal((L, L, L)))
        lhs = np.vdot(y.data, forward(plan, x).data)
        rhs = np.vdot(adjoint(plan, y).data, x.data)
        assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(x.data) * np.linalg.norm(y.data)


def test_backends_agree(rng):
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    N = 10
    f = random_harmonic(N, rng)
    a, b = (forward(cached_plan(N, be), f).data for be in BACKENDS)
    assert np.abs(a - b).max() <= 1e-14 * np.abs(a).max()
    g = forward(cached_plan(N), f)
    a, b = (adjoint(cached_plan(N, be), g).data for be in BACKENDS)
    assert np.abs(a - b).max() <= 1e-14 * np.abs(a).max()


@pytest.mark.parametrize("backend", BACKENDS)
def test_result_independent_of_thread_count(backend, rng):
    N = 9
    table = cached_plan(N).zero_table
    f = random_harmonic(N, rng)
    outs = [forward(WignerTransformPlan(N, table, backend=backend, threads=t), f).data for t in (1, 2, 3)]
    assert all(np.array_equal(outs[0], o) for o in outs[1:])


def test_bandwidth_mismatch_raises(rng):
    plan = cached_plan(3)
    with pytest.raises(ValueError):
        forward(plan, random_harmonic(4, rng))
    with pytest.raises(ValueError):
        adjoint(plan, FourierCube(2))
    with pytest.raises(ValueError):
        WignerTransformPlan(5, cached_plan(3).zero_table)


@pytest.mark.parametrize("N", [0, 4, 11, 20])
def test_bmc_is_structural(N, rng):
    g = forward(cached_plan(N), random_harmonic(N, rng)).data
    r = np.arange(-N, N + 1)
    sign = np.where((r[:, None, None] + r[None, None, :]) % 2, -1.0, 1.0)
    assert np.array_equal(g, sign * g[:, ::-1, :])


@pytest.mark.parametrize("N", [1, 2, 4])
def test_degree_locality(N):
    plan = cached_plan(N)
    for n0 in range(N + 1):
        for k0 in range(-n0, n0 + 1):
            for l0 in range(-n0, n0 + 1):
                g = forward(plan, HarmonicCoefficients.unit(N, n0, k0, l0))
                k, j, l = np.nonzero(np.abs(g.data) > 0)
                assert set(k - N) <= {-k0} and set(l - N) <= {-l0}
                assert np.abs(j - N).max(initial=0) <= n0


def test_materialized_matrix_matches_forward(rng):
    assert np.array_equal(materialize_matrix(make_plan(0)), np.ones((1, 1)))
    for N in (1, 4, 8):
        plan = cached_plan(N)
        W = materialize_matrix(plan)
        assert W.shape == ((2 * N + 1) ** 3, dimension(N))
        for _ in range(20 if N < 8 else 5):
            x = random_harmonic(N, rng)
            assert np.abs(W @ x.data - forward(plan, x).data.ravel()).max() <= 1e-13 * np.abs(x.data).sum()


def test_materialize_refuses_large_bandwidth():
    with pytest.raises(ValueError):
        materialize_matrix(make_plan(MAX_DENSE_BANDWIDTH + 1))


@pytest.mark.parametrize("N", [2, 4, 8])
def test_blockwise_singular_values_match_dense(N):
    plan = cached_plan(N)
    dense = np.sort(np.linalg.svd(materialize_matrix(plan), compute_uv=False))
    block = np.sort(singular_values(plan))
    assert np.allclose(dense, block, atol=1e-12)
    assert condition_number(plan) == pytest.approx(condition_number(plan, dense=False), rel=1e-10)


def test_extended_forward(rng):
    N = 6
    plan = cached_plan(N)
    f = random_harmonic(N, rng)
    assert np.array_equal(extended_forward(plan, f, N).data, forward(plan, f).data)
    g0 = extended_forward(plan, f, 0)
    assert g0.bandwidth == 0 and g0.data[0, 0, 0] == f.data[0]
    # degree-2 prefix equals the transform of the truncated vector
    g2 = extended_forward(plan, f, 2)
    assert np.allclose(g2.data, forward(cached_plan(2), f.truncate(2)).data, atol=1e-15)
    with pytest.raises(ValueError):
        extended_forward(plan, f, N + 1)


def test_extended_forward_differences_decrease():
    M = 64
    n = np.repeat(np.arange(M + 1), [(2 * m + 1) ** 2 for m in range(M + 1)])
    f = HarmonicCoefficients(M, (1.0 + n * (n + 1.0)) ** -3.0)
    plan = make_plan(M)
    diffs = []
    for N in (8, 16, 32):
        a = extended_forward(plan, f, N).data
        b = np.zeros_like(a)
        h = N // 2
        b[N - h : N + h + 1, N - h : N + h + 1, N - h : N + h + 1] = extended_forward(plan, f, h).data
        diffs.append(np.linalg.norm(a - b))
    assert diffs[0] > diffs[1] > diffs[2]


SPECS = [
    SymmetrySpec(real_valued=True),
    SymmetrySpec(inversion=True),
    SymmetrySpec("C3"),
    SymmetrySpec(left="D2"),
    SymmetrySpec("D4", "D4", True, True),
    SymmetrySpec("C2", "D3", real_valued=True),
    SymmetrySpec("T", "C1", real_valued=True),
    SymmetrySpec("O", "O", inversion=True),
]


@pytest.mark.parametrize("spec", SPECS, ids=str)
@pytest.mark.parametrize("backend", BACKENDS)
def test_symmetric_forward_equals_generic(spec, backend, rng):
    N = 8
    f = symmetrize(random_harmonic(N, rng), spec)
    plan = WignerTransformPlan(N, cached_plan(N).zero_table, spec, backend)
    ref = forward(plan, f).data
    got = forward_symmetric(plan, f).data
    assert np.abs(got - ref).max() <= 1e-13 * max(1.0, np.abs(ref).max())


def test_symmetric_forward_c2_zeros(rng):
    N = 8
    spec = SymmetrySpec("C2")
    f = symmetrize(random_harmonic(N, rng), spec)
    g = forward_symmetric(WignerTransformPlan(N, cached_plan(N).zero_table, spec), f)
    r = np.arange(-N, N + 1)
    assert np.all(g.data[r % 2 == 1] == 0)
    assert check_cube_pattern(g, spec, 1e-13).passed


def test_symmetric_forward_rejects_violations(rng):
    N = 4
    spec = SymmetrySpec("C2")
    f = random_harmonic(N, rng)
    plan = WignerTransformPlan(N, cached_plan(N).zero_table, spec)
    with pytest.raises(SymmetryError, match=r"\(n,k,l\)"):
        forward_symmetric(plan, f)
    with pytest.raises(ValueError):
        forward_symmetric(cached_plan(N), f)


def test_symmetric_forward_touches_fewer_columns():
    from so3ft.symmetry import column_classes

    N = 16
    cls = column_classes(N, SymmetrySpec("D2", "D2", True, True))
    assert len(cls.reps) * 16 < (2 * N + 1) ** 2 * 1.4

import numpy as np
import pytest

from so3ft import _backend
from so3ft.experiments import median_time, random_coefficients
from so3ft.fourier import equispaced_nodes, naive_synthesize, synthesize_at
from so3ft.core import RotationList
from so3ft.wigner import forward, make_plan


@pytest.fixture(scope="module")
def cube32():
    return forward(make_plan(32), random_coefficients(32, np.random.default_rng(3)))


def test_synthesis_beats_naive(cube32):
    nodes = equispaced_nodes(32, 32**3)
    M = len(nodes)
    fast = median_time(lambda: synthesize_at(cube32, nodes), 3)
    # naive cost is linear in M; time a subset and scale up
    sub = RotationList(nodes.angles[:64])
    naive = median_time(lambda: naive_synthesize(cube32, sub), 3) * M / len(sub)
    assert np.allclose(synthesize_at(cube32, sub), naive_synthesize(cube32, sub), atol=1e-9)
    print(f"synthesis M={M}: separable {fast:.3f}s, naive ~{naive:.1f}s, ratio {naive / fast:.0f}")
    assert naive >= 10 * fast


def test_more_threads_not_slower():
    f = random_coefficients(48, np.random.default_rng(4))
    p1, p2 = make_plan(48, threads=1), make_plan(48, threads=2)
    p2 = type(p2)(48, p1.zero_table, threads=2)
    forward(p1, f), forward(p2, f)
    t1 = median_time(lambda: forward(p1, f), 5)
    t2 = median_time(lambda: forward(p2, f), 5)
    assert np.array_equal(forward(p1, f).data, forward(p2, f).data)
    assert t2 <= 1.10 * t1 + 2e-3


@pytest.mark.skipif("compiled" not in _backend.BACKENDS, reason="extension not built")
def test_compiled_backend_faster():
    f = random_coefficients(32, np.random.default_rng(5))
    pc = make_plan(32, backend="compiled", threads=1)
    pp = type(pc)(32, pc.zero_table, backend="python", threads=1)
    tc = median_time(lambda: forward(pc, f), 3)
    tp = median_time(lambda: forward(pp, f), 3)
    assert np.array_equal(forward(pc, f).data, forward(pp, f).data)
    assert tc < tp

import itertools
from fractions import Fraction

import numpy as np
import pytest

from so3ft.core import HarmonicCoefficients, RotationList, dimension, harmonic_triples, random_rotations
from so3ft.fourier import synthesize_at
from so3ft.nsoft import direct_forward
from so3ft.quadrature import analyze, gauss_legendre_rule
from so3ft.symmetry import (
    PointGroup,
    SymmetrySpec,
    check_cube_pattern,
    check_pattern,
    compression_factor,
    compression_factor_of,
    group_elements,
    index_classes,
    pointwise_invariance_error,
    reduced_index_set,
    symmetrize,
)
from so3ft.wigner import forward

from conftest import cached_plan, random_harmonic

PATTERN_SPECS = (
    [SymmetrySpec(real_valued=True), SymmetrySpec(inversion=True)]
    + [SymmetrySpec(f"{t}{r}") for t in "CD" for r in range(2, 7)]
    + [SymmetrySpec(left=f"{t}{r}") for t in "CD" for r in range(2, 7)]
    + [
        SymmetrySpec("C4", real_valued=True),
        SymmetrySpec("D3", "D3", True, True),
        SymmetrySpec("C2", "D4", real_valued=True),
    ]
)
ALL_SPECS = PATTERN_SPECS + [
    SymmetrySpec("T"),
    SymmetrySpec(left="O"),
    SymmetrySpec("I", real_valued=True),
    SymmetrySpec("O", "O", inversion=True),
]


@pytest.mark.parametrize(
    "label, size", [("C1", 1), ("C5", 5), ("D1", 2), ("D6", 12), ("T", 12), ("O", 24), ("I", 60)]
)
def test_cardinalities(label, size):
    g = PointGroup.parse(label)
    assert g.cardinality == size
    assert len(group_elements(g)) == size
    assert g.matrices.shape == (size, 3, 3)


def test_identity_group():
    R = group_elements(PointGroup.parse("C1")).matrices()
    assert np.allclose(R, np.eye(3)[None])


def test_octahedral_matrices_are_signed_permutations():
    M = PointGroup.parse("O").matrices
    assert np.all(np.min(np.abs(M[..., None] - np.array([-1.0, 0.0, 1.0])), axis=-1) < 1e-12)


@pytest.mark.parametrize("label", ["T", "O", "I", "D5"])
def test_groups_are_closed_and_distinct(label):
    M = PointGroup.parse(label).matrices
    d = np.abs(M[:, None] - M[None, :]).max(axis=(2, 3))
    np.fill_diagonal(d, np.inf)
    assert d.min() > 0.1
    flat = M.reshape(len(M), 9)
    for a, b in itertools.product(M, M):
        assert np.abs(flat - (a @ b).ravel()).max(axis=1).min() < 1e-10


def test_element_euler_angles_reproduce_matrices():
    g = PointGroup.parse("I")
    assert np.allclose(g.elements().matrices(), g.matrices, atol=1e-12)


def test_parse_errors():
    for bad in ("X3", "C0", "D", ""):
        with pytest.raises(ValueError):
            PointGroup.parse(bad)
    with pytest.raises(ValueError):
        SymmetrySpec("C2", "C3", inversion=True)


def test_trivial_spec_is_identity(rng):
    f = random_harmonic(4, rng)
    assert np.array_equal(symmetrize(f, SymmetrySpec()).data, f.data)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_symmetrize_is_idempotent(spec, rng):
    p = symmetrize(random_harmonic(5, rng), spec)
    assert np.abs(symmetrize(p, spec).data - p.data).max() <= 1e-13


@pytest.mark.parametrize("spec", ALL_SPECS[::3], ids=str)
def test_symmetrize_is_orthogonal_projection(spec, rng):
    x, y = random_harmonic(5, rng), random_harmonic(5, rng)
    px = symmetrize(x, spec).data
    r = y.data - symmetrize(y, spec).data
    # real inner product: the real-valued projection is only real-linear
    assert abs(np.vdot(px, r).real) <= 1e-12 * np.linalg.norm(x.data) * np.linalg.norm(y.data)


@pytest.mark.parametrize("spec", PATTERN_SPECS, ids=str)
def test_symmetrized_vector_passes_own_pattern(spec, rng):
    f = symmetrize(random_harmonic(6, rng), spec)
    rep = check_pattern(f, spec, 1e-12)
    assert rep.passed, rep.failures()


@pytest.mark.parametrize("spec", PATTERN_SPECS, ids=str)
def test_random_vector_fails_pattern(spec, rng):
    rep = check_pattern(random_harmonic(6, rng), spec, 1e-12)
    assert not rep.passed
    assert max(rep.violations.values()) > 0.1


def test_cyclic_zeros_after_symmetrize(rng):
    f = symmetrize(random_harmonic(7, rng), SymmetrySpec("C3"))
    k = harmonic_triples(7)[:, 1]
    assert np.abs(f.data[k % 3 != 0]).max() <= 1e-13


def test_pattern_unavailable_for_polyhedral(rng):
    rep = check_pattern(random_harmonic(3, rng), SymmetrySpec("O"), 1e-12)
    assert rep.unavailable and rep.passed


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_pointwise_invariance(spec, rng):
    f = symmetrize(random_harmonic(6, rng), spec)
    err = pointwise_invariance_error(lambda nodes: direct_forward(f, nodes), spec, random_rotations(50, rng))
    assert err <= 1e-10


# equivalence chains, each link from an independently built input


def _average_spatially(h, spec):
    """Function values of the group average of ``h`` (no harmonic projection)."""
    def values(nodes):
        Rm = nodes.matrices()
        acc = np.zeros(len(nodes), dtype=complex)
        count = 0
        for P in spec.right.matrices:
            for Q in spec.left.matrices:
                moved = RotationList.from_matrices(np.einsum("ij,mjk,kl->mil", P, Rm, Q))
                acc += direct_forward(h, moved)
                count += 1
                if spec.inversion:
                    inv = np.transpose(np.einsum("ij,mjk,kl->mil", P, Rm, Q), (0, 2, 1))
                    acc += direct_forward(h, RotationList.from_matrices(inv))
                    count += 1
        acc /= count
        return acc.real if spec.real_valued else acc
    return values


@pytest.mark.parametrize("spec", PATTERN_SPECS[::2], ids=str)
def test_spatial_invariance_implies_harmonic_pattern(spec, rng):
    N = 5
    rule = gauss_legendre_rule(N)
    vals = _average_spatially(random_harmonic(N, rng), spec)(rule.nodes)
    f = analyze(rule, vals)
    assert check_pattern(f, spec, 1e-12).passed


def _pattern_vector(N, spec, rng):
    cls = index_classes(N, spec)
    reps = cls.representatives
    v = rng.standard_normal(reps.size) + 1j * rng.standard_normal(reps.size)
    full = HarmonicCoefficients(N, cls.expand(v))
    # halved classes carry a real-line constraint that expand does not impose
    return symmetrize(full, spec) if cls.halved.any() else full


@pytest.mark.parametrize("spec", PATTERN_SPECS, ids=str)
def test_harmonic_pattern_implies_cube_pattern(spec, rng):
    f = _pattern_vector(6, spec, rng)
    assert check_pattern(f, spec, 1e-12).passed
    g = forward(cached_plan(6), f)
    rep = check_cube_pattern(g, spec, 1e-12)
    assert rep.passed, rep.failures()


@pytest.mark.parametrize("spec", PATTERN_SPECS[1::2], ids=str)
def test_cube_pattern_implies_spatial_invariance(spec, rng):
    g = forward(cached_plan(6), _pattern_vector(6, spec, rng))
    assert check_cube_pattern(g, spec, 1e-12).passed
    err = pointwise_invariance_error(lambda nodes: synthesize_at(g, nodes), spec, random_rotations(50, rng))
    assert err <= 1e-10


def test_cube_pattern_examples(rng):
    N = 5
    g = forward(cached_plan(N), random_harmonic(N, rng))
    assert check_cube_pattern(g, SymmetrySpec(), 1e-13).violations["bmc"] <= 1e-13
    spec = SymmetrySpec("D2")
    g = forward(cached_plan(N), symmetrize(random_harmonic(N, rng), spec))
    assert check_cube_pattern(g, spec, 1e-12).violations["right_dihedral"] <= 1e-12
    from so3ft.core import FourierCube

    assert check_cube_pattern(FourierCube(3), SymmetrySpec("D3", "D3", True, True), 0.0).passed


def test_real_pattern_equiv_cube_conjugate_symmetry(rng):
    N = 6
    spec = SymmetrySpec(real_valued=True)
    f = symmetrize(random_harmonic(N, rng), spec)
    assert check_cube_pattern(forward(cached_plan(N), f), spec, 1e-12).passed
    g = forward(cached_plan(N), random_harmonic(N, rng))
    assert not check_cube_pattern(g, spec, 1e-12).passed


def test_compression_factor_examples():
    assert compression_factor(SymmetrySpec()) == 1
    assert compression_factor_of("C4", "C1", True, True) == 16
    assert compression_factor(SymmetrySpec("C4", real_valued=True)) == 8
    assert compression_factor(SymmetrySpec("D3", "D3", True, True)) == Fraction(144)
    with pytest.raises(ValueError):
        compression_factor(SymmetrySpec("T"))


def test_reduced_index_set_examples():
    assert len(reduced_index_set(3, SymmetrySpec())) == dimension(3)
    red = reduced_index_set(2, SymmetrySpec("C2"))
    assert len(red) == 1 * 1 + 1 * 3 + 3 * 5 == 19
    assert all(k % 2 == 0 for _, k, _ in red)
    with pytest.raises(ValueError):
        reduced_index_set(2, SymmetrySpec("I"))


@pytest.mark.parametrize("spec", PATTERN_SPECS, ids=str)
def test_reduced_set_reconstruction(spec, rng):
    N = 5
    f = symmetrize(random_harmonic(N, rng), spec)
    cls = index_classes(N, spec)
    reps = cls.representatives
    assert np.array_equal(reps, np.sort(reps))
    full = cls.expand(f.data[reps])
    assert np.abs(full - f.data).max() <= 1e-12


def _realified_rank(N, spec):
    d = dimension(N)
    cols = []
    for i in range(d):
        for z in (1.0, 1j):
            e = np.zeros(d, dtype=complex)
            e[i] = z
            p = symmetrize(HarmonicCoefficients(N, e), spec).data
            cols.append(np.concatenate([p.real, p.imag]))
    return np.linalg.matrix_rank(np.array(cols), tol=1e-9)


@pytest.mark.parametrize("spec", PATTERN_SPECS[::2], ids=str)
def test_degrees_of_freedom_match_projector_rank(spec):
    N = 3
    assert index_classes(N, spec).real_dof == _realified_rank(N, spec)

import io

import numpy as np
import pytest

from so3ft.core import FourierCube, random_rotations
from so3ft.formats import (
    FormatError,
    read_cube,
    read_harmonic,
    read_nodes,
    read_values,
    write_cube,
    write_harmonic,
    write_nodes,
    write_values,
    write_zero_table,
)
from so3ft.special import build_zero_table

from conftest import random_harmonic


def test_harmonic_roundtrip_is_exact(rng):
    f = random_harmonic(5, rng)
    buf = io.StringIO()
    write_harmonic(f, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "SO3FT HARMONIC N=5"
    assert text.splitlines()[1].split()[:3] == ["0", "0", "0"]
    g = read_harmonic(io.StringIO(text))
    assert np.array_equal(f.data, g.data)


def test_cube_roundtrip_is_exact(rng):
    N = 2
    L = 5
    c = FourierCube(N, rng.standard_normal(L**3) + 1j * rng.standard_normal(L**3))
    buf = io.StringIO()
    write_cube(c, buf)
    assert buf.getvalue().startswith("SO3FT CUBE N=2\n")
    d = read_cube(io.StringIO(buf.getvalue()))
    assert np.array_equal(c.data, d.data)


def test_nodes_and_values_roundtrip(rng, tmp_path):
    nodes = random_rotations(7, rng)
    w = rng.uniform(size=7)
    p = tmp_path / "n.txt"
    with open(p, "w") as fh:
        write_nodes(nodes, fh, w)
    back, wb = read_nodes(p)
    assert np.array_equal(back.angles, nodes.angles)
    assert np.array_equal(wb, w)
    buf = io.StringIO()
    write_nodes(nodes, buf)
    back, wb = read_nodes(io.StringIO(buf.getvalue()))
    assert wb is None
    v = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    buf = io.StringIO()
    write_values(nodes, v, buf)
    nb, vb = read_values(io.StringIO(buf.getvalue()))
    assert np.array_equal(vb, v)
    assert np.array_equal(nb.angles, nodes.angles)


@pytest.mark.parametrize(
    "text, line",
    [
        ("SO3FT HARMONIC N=1\n0 0 0 1.0 0.0\n", 2),  # too few records
        ("SO3FT CUBE N=1\n", 1),  # wrong kind
        ("SO3FT HARMONIC N=0\n0 0 0 x 0.0\n", 2),
        ("SO3FT HARMONIC N=0\n0 0 0 1.0\n", 2),
        ("SO3FT HARMONIC N=0\n1 0 0 1.0 0.0\n", 2),  # wrong index
    ],
)
def test_malformed_harmonic_reports_line(text, line):
    with pytest.raises(FormatError) as ei:
        read_harmonic(io.StringIO(text))
    assert ei.value.lineno == line
    assert f"line {line}" in str(ei.value)


def test_nodes_reject_bad_beta():
    with pytest.raises(FormatError):
        read_nodes(io.StringIO("SO3FT NODES M=1\n0.0 4.0 0.0\n"))


def test_zero_table_dump():
    t = build_zero_table(2)
    buf = io.StringIO()
    write_zero_table(t, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "SO3FT DZERO N=2"
    assert len(lines) == 1 + 35
    n, j, k, v = lines[1 + 1 + 4].split()  # n=1, j=0, k=0
    assert (n, j, k) == ("1", "0", "0") and float(v) == 0.0

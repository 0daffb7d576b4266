"""Line-oriented text formats for coefficients, cubes, node sets and values.

Every file starts with a header line ``SO3FT <KIND> <KEY>=<int>`` followed by
one whitespace-separated record per line.  Floats are written with ``repr``,
which round-trips IEEE doubles exactly.
"""
from __future__ import annotations

import re
from pathlib import Path
from typing import TextIO

import numpy as np

from .core import (
    FourierCube,
    HarmonicCoefficients,
    RotationList,
    dimension,
    harmonic_index,
    iter_harmonic,
)

_HEADER = re.compile(r"^SO3FT\s+([A-Z]+)\s+([A-Z])=(\d+)\s*$")


class FormatError(ValueError):
    """Malformed input file; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _f(x: float) -> str:
    return repr(float(x))


def _open_lines(source) -> list[str]:
    if isinstance(source, (str, Path)):
        return Path(source).read_text().splitlines()
    return source.read().splitlines()


def _header(lines: list[str], kind: str, key: str) -> int:
    if not lines:
        raise FormatError("empty file", 1)
    m = _HEADER.match(lines[0].strip())
    if not m or m.group(1) != kind or m.group(2) != key:
        raise FormatError(f"expected header 'SO3FT {kind} {key}=<int>', got {lines[0]!r}", 1)
    return int(m.group(3))


def _records(lines: list[str], ncols: int, nrec: int) -> list[tuple[int, list[str]]]:
    recs = []
    for i, line in enumerate(lines[1:], start=2):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != ncols:
            raise FormatError(f"expected {ncols} fields, got {len(parts)}", i)
        recs.append((i, parts))
    if len(recs) != nrec:
        raise FormatError(f"expected {nrec} records, found {len(recs)}", len(lines))
    return recs


def _num(tok: str, lineno: int, conv=float):
    try:
        return conv(tok)
    except ValueError:
        raise FormatError(f"cannot parse {tok!r}", lineno) from None


# ---------------------------------------------------------------------------


def write_harmonic(fhat: HarmonicCoefficients, dest: TextIO) -> None:
    dest.write(f"SO3FT HARMONIC N={fhat.bandwidth}\n")
    for (n, k, l), v in zip(iter_harmonic(fhat.bandwidth), fhat.data):
        dest.write(f"{n} {k} {l} {_f(v.real)} {_f(v.imag)}\n")


def read_harmonic(source) -> HarmonicCoefficients:
    lines = _open_lines(source)
    N = _header(lines, "HARMONIC", "N")
    data = np.zeros(dimension(N), dtype=complex)
    for expect, (lineno, p) in zip(iter_harmonic(N), _records(lines, 5, dimension(N))):
        nkl = tuple(_num(t, lineno, int) for t in p[:3])
        if nkl != expect:
            raise FormatError(f"expected index {expect}, got {nkl}", lineno)
        data[harmonic_index(*nkl)] = complex(_num(p[3], lineno), _num(p[4], lineno))
    return HarmonicCoefficients(N, data)


def write_cube(ghat: FourierCube, dest: TextIO) -> None:
    N = ghat.bandwidth
    dest.write(f"SO3FT CUBE N={N}\n")
    r = range(-N, N + 1)
    flat = ghat.data.ravel()
    i = 0
    for k in r:
        for j in r:
            for l in r:
                v = flat[i]
                dest.write(f"{k} {j} {l} {_f(v.real)} {_f(v.imag)}\n")
                i += 1


def read_cube(source) -> FourierCube:
    lines = _open_lines(source)
    N = _header(lines, "CUBE", "N")
    L = 2 * N + 1
    data = np.zeros(L**3, dtype=complex)
    r = range(-N, N + 1)
    expected = ((k, j, l) for k in r for j in r for l in r)
    for i, (expect, (lineno, p)) in enumerate(zip(expected, _records(lines, 5, L**3))):
        kjl = tuple(_num(t, lineno, int) for t in p[:3])
        if kjl != expect:
            raise FormatError(f"expected index {expect}, got {kjl}", lineno)
        data[i] = complex(_num(p[3], lineno), _num(p[4], lineno))
    return FourierCube(N, data)


def write_nodes(nodes: RotationList, dest: TextIO, weights=None) -> None:
    """Write a node set, optionally with a trailing ``weight`` column."""
    dest.write(f"SO3FT NODES M={len(nodes)}\n")
    A = nodes.angles
    if weights is None:
        for a, b, c in A:
            dest.write(f"{_f(a)} {_f(b)} {_f(c)}\n")
    else:
        w = np.asarray(weights, dtype=float).ravel()
        if w.shape[0] != len(nodes):
            raise ValueError("one weight per node required")
        for (a, b, c), wi in zip(A, w):
            dest.write(f"{_f(a)} {_f(b)} {_f(c)} {_f(wi)}\n")


def read_nodes(source) -> tuple[RotationList, np.ndarray | None]:
    """Read a node set; returns ``(nodes, weights_or_None)``."""
    lines = _open_lines(source)
    M = _header(lines, "NODES", "M")
    body = [ln for ln in lines[1:] if ln.strip() and not ln.strip().startswith("#")]
    ncols = len(body[0].split()) if body else 3
    if ncols not in (3, 4):
        raise FormatError("node records need 3 or 4 fields", 2)
    recs = _records(lines, ncols, M)
    arr = np.array([[_num(t, ln) for t in p] for ln, p in recs], dtype=float).reshape(M, ncols)
    try:
        nodes = RotationList(arr[:, :3])
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return nodes, (arr[:, 3].copy() if ncols == 4 else None)


def write_values(nodes: RotationList, values, dest: TextIO) -> None:
    """Function values at nodes: ``alpha beta gamma re im`` per line."""
    values = np.asarray(values, dtype=complex).ravel()
    if values.shape[0] != len(nodes):
        raise ValueError("one value per node required")
    dest.write(f"SO3FT VALUES M={len(nodes)}\n")
    for (a, b, c), v in zip(nodes.angles, values):
        dest.write(f"{_f(a)} {_f(b)} {_f(c)} {_f(v.real)} {_f(v.imag)}\n")


def read_values(source) -> tuple[RotationList, np.ndarray]:
    lines = _open_lines(source)
    M = _header(lines, "VALUES", "M")
    recs = _records(lines, 5, M)
    arr = np.array([[_num(t, ln) for t in p] for ln, p in recs], dtype=float).reshape(M, 5)
    try:
        nodes = RotationList(arr[:, :3])
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return nodes, arr[:, 3] + 1j * arr[:, 4]


def write_zero_table(table, dest: TextIO) -> None:
    N = table.bandwidth
    dest.write(f"SO3FT DZERO N={N}\n")
    for (n, j, k), v in zip(iter_harmonic(N), table.values):
        dest.write(f"{n} {j} {k} {_f(v)}\n")

"""Accuracy and timing experiments behind the ``accuracy`` and ``bench`` commands."""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .core import HarmonicCoefficients, dimension
from .fourier import equispaced_nodes, naive_synthesize, synthesize_at
from .quadrature import analyze, make_rule, sample
from .wigner import adjoint, forward, make_plan

KERNELS = ("wigner_forward", "wigner_adjoint", "synthesis", "analyze", "roundtrip")


def unit_disk(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform samples on the closed complex unit disk, by rejection from the square."""
    out = np.empty(size, dtype=complex)
    filled = 0
    while filled < size:
        m = max(16, int(1.3 * (size - filled)))
        z = rng.uniform(-1.0, 1.0, m) + 1j * rng.uniform(-1.0, 1.0, m)
        z = z[np.abs(z) <= 1.0][: size - filled]
        out[filled : filled + z.size] = z
        filled += z.size
    return out


def random_coefficients(N: int, rng: np.random.Generator) -> HarmonicCoefficients:
    return HarmonicCoefficients(N, unit_disk(rng, dimension(N)))


def l1_l2_error(exact: HarmonicCoefficients, approx: HarmonicCoefficients) -> float:
    """``||exact - approx||_2 / ||exact||_1``."""
    return float(np.linalg.norm(exact.data - approx.data) / np.abs(exact.data).sum())


@dataclass(frozen=True)
class AccuracyRow:
    N: int
    E_max: float
    E_var: float
    errors: tuple


def accuracy_run(N: int, trials: int, rng: np.random.Generator, flavor: str = "cc",
                 backend: str | None = None, threads: int | None = None) -> AccuracyRow:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    plan = make_plan(N, backend=backend, threads=threads)
    rule = make_rule(N, flavor)
    errs = []
    for _ in range(trials):
        f = random_coefficients(N, rng)
        errs.append(l1_l2_error(f, analyze(rule, sample(rule, f, plan), plan)))
    e = np.array(errs)
    return AccuracyRow(N, float(e.max()), float(e.var()), tuple(errs))


@dataclass(frozen=True)
class BenchRecord:
    N: int
    kernel: str
    seconds: float
    threads: int
    error: float | None = None


def median_time(fn, reps: int) -> float:
    ts = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def bench_run(N: int, reps: int, seed: int = 0, kernels=KERNELS, backend: str | None = None,
              threads: int | None = None) -> list[BenchRecord]:
    if reps < 3:
        raise ValueError("reps must be >= 3")
    unknown = set(kernels) - set(KERNELS) - {"synthesis_naive"}
    if unknown:
        raise ValueError(f"unknown kernels {sorted(unknown)}")
    rng = np.random.default_rng(seed)
    plan = make_plan(N, backend=backend, threads=threads)
    f = random_coefficients(N, rng)
    g = forward(plan, f)
    out = []
    jobs = {
        "wigner_forward": lambda: forward(plan, f),
        "wigner_adjoint": lambda: adjoint(plan, g),
    }
    if {"synthesis", "synthesis_naive"} & set(kernels):
        nodes = equispaced_nodes(N, max(1, N**3))
        jobs["synthesis"] = lambda: synthesize_at(g, nodes)
        jobs["synthesis_naive"] = lambda: naive_synthesize(g, nodes)
    if {"analyze", "roundtrip"} & set(kernels):
        rule = make_rule(N, "cc")
        s = sample(rule, f, plan)
        jobs["analyze"] = lambda: analyze(rule, s, plan)
        jobs["roundtrip"] = lambda: analyze(rule, sample(rule, f, plan), plan)
    for k in kernels:
        out.append(BenchRecord(N, k, max(median_time(jobs[k], reps), 1e-12), plan.nthreads))
    return out


def loglog_slope(N_list, seconds) -> float:
    """Least-squares slope of ``log(seconds)`` against ``log(N)``."""
    x = np.log(np.asarray(N_list, dtype=float))
    y = np.log(np.asarray(seconds, dtype=float))
    return float(np.polyfit(x, y, 1)[0])

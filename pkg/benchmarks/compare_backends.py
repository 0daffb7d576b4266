"""Time the compiled and NumPy Wigner-transform kernels side by side.

    python3 benchmarks/compare_backends.py --bandwidths 16,32,64 --reps 3

Prints CSV (``N,kernel,backend,seconds,max_abs_diff``) and checks that both
backends produce identical cubes.
"""
import argparse
import sys

import numpy as np

from so3ft import _backend
from so3ft.experiments import median_time, random_coefficients
from so3ft.wigner import adjoint, forward, make_plan


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--bandwidths", default="16,32,64")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)
    args = p.parse_args(argv)

    if "compiled" not in _backend.BACKENDS:
        print("compiled extension not built; only the NumPy kernels are available", file=sys.stderr)
    names = sorted(_backend.BACKENDS)
    print("# so3ft-csv v1")
    print("N,kernel,backend,seconds,max_abs_diff")
    for N in (int(t) for t in args.bandwidths.split(",")):
        f = random_coefficients(N, np.random.default_rng(args.seed))
        plans = {b: make_plan(N, backend=b, threads=args.threads) for b in names}
        ref_plan = plans[names[0]]
        g_ref = forward(ref_plan, f)
        f_ref = adjoint(ref_plan, g_ref)
        for b, plan in plans.items():
            g = forward(plan, f)
            fa = adjoint(plan, g_ref)
            t_f = median_time(lambda: forward(plan, f), args.reps)
            t_a = median_time(lambda: adjoint(plan, g_ref), args.reps)
            print(f"{N},wigner_forward,{b},{t_f!r},{float(np.abs(g.data - g_ref.data).max())!r}")
            print(f"{N},wigner_adjoint,{b},{t_a!r},{float(np.abs(fa.data - f_ref.data).max())!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

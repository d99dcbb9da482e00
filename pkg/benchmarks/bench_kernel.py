"""Timing comparison of the alternating-projections kernels.

Builds the actual feasibility systems the degradability solver produces for
a few cloner channels and runs every available kernel implementation on
identical inputs, so the numbers reflect the real workload rather than a
synthetic matrix shape.

Usage: python benchmarks/bench_kernel.py [--repeats R]
"""

import argparse
import time

import numpy as np

from conjcap._kernel import COMPILED, implementations
from conjcap.channels import gamma_involution, kraus_to_choi, minimal_kraus, stinespring_to_kraus
from conjcap.cloners import ClonerSpec, build_cloner_isometry
from conjcap.degradability import PINV_CUTOFF, _assemble_constraints, _mode_setup


def cloner_problem(n: int, m: int, mode: str):
    ch = minimal_kraus(stinespring_to_kraus(build_cloner_isometry(ClonerSpec(n, m))))
    first, target, dd_in, dd_out = _mode_setup(ch, mode)
    t_first = gamma_involution(kraus_to_choi(first))
    a, b = _assemble_constraints(t_first, target, dd_in, dd_out, ch.din)
    return a, np.linalg.pinv(a, rcond=PINV_CUTOFF), b, dd_in * dd_out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repetitions per case (best is reported)")
    args = parser.parse_args()

    cases = [
        ("1->2 conjugate_degradable", cloner_problem(1, 2, "conjugate_degradable")),
        ("1->2 antidegradable (stalls)", cloner_problem(1, 2, "antidegradable")),
        ("2->3 conjugate_degradable", cloner_problem(2, 3, "conjugate_degradable")),
        ("1->7 conjugate_degradable", cloner_problem(1, 7, "conjugate_degradable")),
    ]
    impls = implementations()
    print(f"compiled kernel available: {COMPILED}")
    print(f"{'case':<32}{'n':>4}{'iters':>7}" +
          "".join(f"{name + ' [s]':>14}" for name in impls))
    for label, (a, pinv_a, b, n) in cases:
        times = {}
        iters = None
        for name, fn in impls.items():
            best = float("inf")
            for _ in range(args.repeats):
                start = time.perf_counter()
                _, _, it, _ = fn(a, pinv_a, b, n, 1e-8, 50000, 1000, 1e-4)
                best = min(best, time.perf_counter() - start)
            times[name] = best
            if iters is None:
                iters = it
            elif iters != it:
                raise AssertionError(f"kernels disagree on iterations for {label}")
        row = f"{label:<32}{n:>4}{iters:>7}"
        row += "".join(f"{times[name]:>14.4f}" for name in impls)
        if len(times) == 2:
            numpy_t, cython_t = times["numpy"], times["cython"]
            row += f"   ({numpy_t / cython_t:.1f}x)"
        print(row)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Sweep the boundary-concentration slope check over a range of eps lists
and shrinkage exponents, printing how the fitted slopes approach their
curvature targets.  Useful for probing how far outside the validated
configuration the first-order expansion remains visible.

    python scripts/expansion_sweep.py --n 5 --p 2
"""

import argparse
import sys

import numpy as np

from bsc.curves import special_constants
from bsc.errors import ChartDomainError
from bsc.expansion import ExpansionConfig, beta_window, epsilon_slope_check
from bsc.profiles import derived_exponents
from bsc.quadrature import QuadratureConfig


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--T", type=float, default=None, help="trace level (default: curve minimum)")
    ns = ap.parse_args()

    exps = derived_exponents(ns.n, ns.p)
    if not exps.supports_boundary_concentration:
        print(f"n = {ns.n}, p = {ns.p}: no admissible shrinkage window (needs n > 2p)")
        return 3
    consts = special_constants(exps, QuadratureConfig())
    T = ns.T if ns.T is not None else consts.T_0
    lo, hi = beta_window(exps)

    eps_lists = [
        (3e-2, 1e-2, 3e-3),
        (1e-2, 3e-3, 1e-3),
        (3e-3, 1e-3, 3e-4),
    ]
    betas = np.linspace(lo, hi, 5)[1:-1]

    print(f"n={ns.n} p={ns.p} T={T:.6g}  beta window ({lo:.4f}, {hi:.4f})")
    header = f"{'beta':>8} {'eps_max':>8} {'energy err':>11} {'volume err':>11} {'|trace|':>9}"
    print(header)
    for beta in betas:
        for eps in eps_lists:
            try:
                run = epsilon_slope_check(
                    ExpansionConfig(exps=exps, T=T, beta=float(beta), epsilon_list=eps)
                )
            except ChartDomainError:
                print(f"{beta:8.4f} {eps[0]:8.0e}   (cut-off support exceeds the chart)")
                continue
            print(
                f"{beta:8.4f} {eps[0]:8.0e} {run.energy_slope_error:11.4f} "
                f"{run.volume_slope_error:11.4f} {abs(run.trace_slope):9.5f}"
            )
    print("\nslope errors are relative to -H*Lambda and -H*M; the trace slope "
          "should sit near zero")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Produce the curve-comparison data set: both curves plus the constants.

Writes three files into the output directory (default ./figure_data):

    constants.json   special constants and diagnostics
    phih.csv         half-space curve on a log grid spanning the whole
                     well-conditioned range
    phib.csv         unit-ball curve on (0, ISO(B)^{1/p#})

Plotting is left to external tools; each CSV starts with the header
T,phi,regime,offset,c,lambda,sigma.

    python scripts/figure_data.py --n 5 --p 2 --samples 96 --out-dir figure_data
"""

import argparse
import pathlib
import sys

from bsc.cli import main as bsc_main
from bsc.curves import special_constants
from bsc.profiles import derived_exponents
from bsc.quadrature import QuadratureConfig


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--samples", type=int, default=96)
    ap.add_argument("--out-dir", type=pathlib.Path, default=pathlib.Path("figure_data"))
    ns = ap.parse_args()

    ns.out_dir.mkdir(parents=True, exist_ok=True)
    exps = derived_exponents(ns.n, ns.p)
    consts = special_constants(exps, QuadratureConfig())
    base = ["--n", str(ns.n), "--p", str(ns.p)]

    rc = bsc_main(["constants", *base, "--out", str(ns.out_dir / "constants.json")])
    if rc:
        return rc
    rc = bsc_main(
        [
            "curve", "phih", *base,
            "--t-min", f"{consts.T_0 / 100.0:.12g}",
            "--t-max", f"{20.0 * consts.T_E:.12g}",
            "--samples", str(ns.samples), "--scale", "log",
            "--out", str(ns.out_dir / "phih.csv"),
        ]
    )
    if rc:
        return rc
    rc = bsc_main(
        [
            "curve", "phib", *base,
            "--t-min", f"{consts.iso_B_root / 200.0:.12g}",
            "--t-max", f"{0.999 * consts.iso_B_root:.12g}",
            "--samples", str(ns.samples), "--scale", "log",
            "--out", str(ns.out_dir / "phib.csv"),
        ]
    )
    if rc:
        return rc
    print(f"wrote constants.json, phih.csv, phib.csv to {ns.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

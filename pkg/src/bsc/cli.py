"""Command-line interface: deterministic CSV/JSON emission of curves,
constants and verification reports.

Subcommands
-----------
constants             special constants as JSON
curve phih            half-space curve over a trace grid, CSV
curve phib            unit-ball curve over a trace grid, CSV
verify key            positivity of the curvature-response margin
verify compare        comparison chain between the two curves
verify interp         interpolation inequality spot checks
verify expansion      boundary-concentration slope check

Exit codes: 0 all asserted checks passed; 1 computational failure or a
failed check; 2 usage error; 3 validation error.  Identical inputs produce
byte-identical outputs; report files embed every tolerance used.  The
environment variable BSC_THREADS (integer >= 1) caps the number of worker
processes used for curve sweeps.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .errors import BscError, ValidationError
from .profiles import derived_exponents
from .quadrature import QuadratureConfig
from .curves import (
    log_grid,
    solve_curve,
    solve_phi_B,
    solve_phi_H,
    special_constants,
)
from .verify import comparison_report, interpolation_spot_checks, key_report
from .expansion import ExpansionConfig, beta_window, epsilon_slope_check

CSV_HEADER = "T,phi,regime,offset,c,lambda,sigma"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _points_to_csv(points) -> str:
    lines = [CSV_HEADER]
    for pt in points:
        lines.append(
            ",".join(
                [
                    _fmt(pt.T),
                    _fmt(pt.phi),
                    pt.regime,
                    _fmt(pt.offset),
                    _fmt(pt.normalization),
                    _fmt(pt.lam),
                    _fmt(pt.sigma),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _sanitize(obj):
    """NaN/inf have no JSON spelling; report them as null."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _json_text(payload: dict) -> str:
    return json.dumps(_sanitize(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _worker_count() -> int:
    raw = os.environ.get("BSC_THREADS", "1")
    try:
        k = int(raw)
    except ValueError as exc:
        raise ValidationError(f"BSC_THREADS must be an integer >= 1, got {raw!r}") from exc
    if k < 1:
        raise ValidationError(f"BSC_THREADS must be an integer >= 1, got {raw!r}")
    return k


def _quad_config(ns) -> QuadratureConfig:
    return QuadratureConfig(
        rel_tol=ns.rel_tol, abs_tol=ns.abs_tol, max_subdivisions=ns.max_subdivisions
    )


def _grid(ns, exps, cfg) -> np.ndarray:
    consts = special_constants(exps, cfg)
    t_min = ns.t_min if ns.t_min is not None else consts.T_E / 20.0
    t_max = ns.t_max if ns.t_max is not None else 20.0 * consts.T_E
    if ns.scale == "log":
        return log_grid(t_min, t_max, ns.samples)
    if not (0.0 < t_min < t_max):
        raise ValidationError("need 0 < t-min < t-max")
    return np.linspace(t_min, t_max, ns.samples)


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_constants(ns) -> int:
    exps = derived_exponents(ns.n, ns.p)
    cfg = _quad_config(ns)
    consts = special_constants(exps, cfg)
    pt = solve_phi_H(consts.T_0, exps, cfg, consts)
    payload = {
        "command": "constants",
        "n": exps.n,
        "p": exps.p,
        "p_star": exps.p_star,
        "p_sharp": exps.p_sharp,
        "p_prime": exps.p_prime,
        "constants": consts.as_dict(),
        "diagnostics": {
            "phi_at_T0": pt.phi,
            "predicted_phi_at_T0": 2.0 ** (-1.0 / exps.n) * consts.S,
            "offset_at_T0": pt.offset,
            "sigma_at_T0": pt.sigma,
            "residuals": pt.diagnostics.as_dict(),
        },
        "tolerances": {
            "rel_tol": cfg.rel_tol,
            "abs_tol": cfg.abs_tol,
            "max_subdivisions": cfg.max_subdivisions,
        },
    }
    _write_text(ns.out, _json_text(payload))
    return 0


def _cmd_curve(ns) -> int:
    exps = derived_exponents(ns.n, ns.p)
    cfg = _quad_config(ns)
    consts = special_constants(exps, cfg)
    grid = _grid(ns, exps, cfg)
    if ns.which == "phib":
        grid = [T for T in grid if 0.0 < T < consts.iso_B_root]
        if not grid:
            raise ValidationError("grid has no points inside the ball-curve range")
        points = [solve_phi_B(float(T), exps, cfg, consts) for T in grid]
    else:
        points = solve_curve(exps, grid, cfg, workers=_worker_count())
    _write_text(ns.out, _points_to_csv(points))
    return 0


def _report_exit(ns, report) -> int:
    _write_text(ns.out, _json_text(report.as_dict()))
    return 0 if report.passed else 1


def _cmd_verify_key(ns) -> int:
    exps = derived_exponents(ns.n, ns.p)
    cfg = _quad_config(ns)
    grid = _grid(ns, exps, cfg)
    return _report_exit(ns, key_report(exps, grid, cfg))


def _cmd_verify_compare(ns) -> int:
    exps = derived_exponents(ns.n, ns.p)
    cfg = _quad_config(ns)
    consts = special_constants(exps, cfg)
    t_min = ns.t_min if ns.t_min is not None else max(
        consts.T_0 / 50.0, consts.iso_B_root / 200.0
    )
    t_max = ns.t_max if ns.t_max is not None else 0.999 * consts.iso_B_root
    grid = log_grid(t_min, t_max, ns.samples)
    return _report_exit(ns, comparison_report(exps, grid, cfg))


def _cmd_verify_interp(ns) -> int:
    exps = derived_exponents(ns.n, ns.p)
    cfg = _quad_config(ns)
    return _report_exit(ns, interpolation_spot_checks(exps, ns.samples, cfg))


def _cmd_verify_expansion(ns) -> int:
    exps = derived_exponents(ns.n, ns.p)
    cfg = _quad_config(ns)
    consts = special_constants(exps, cfg)
    T = ns.T if ns.T is not None else consts.T_0
    if ns.beta is not None:
        beta = ns.beta
    else:
        lo, hi = beta_window(exps)
        beta = 0.5 * (lo + hi)
    eps = tuple(ns.eps) if ns.eps else (3e-2, 1e-2, 3e-3)
    ecfg = ExpansionConfig(
        exps=exps,
        T=T,
        beta=beta,
        epsilon_list=eps,
        quad=QuadratureConfig(rel_tol=max(ns.rel_tol, 1e-8), abs_tol=ns.abs_tol),
    )
    run = epsilon_slope_check(ecfg)
    _write_text(ns.out, _json_text(run.as_dict()))
    return 0 if run.passed else 1


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _add_common(sp, t_range=False):
    sp.add_argument("--n", type=int, required=False)
    sp.add_argument("--p", type=float, required=False)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    sp.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
    sp.add_argument(
        "--max-subdivisions", dest="max_subdivisions", type=int, default=None
    )
    sp.add_argument("--config", type=str, default=None, help="flat JSON config file")
    sp.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    if t_range:
        sp.add_argument("--t-min", dest="t_min", type=float, default=None)
        sp.add_argument("--t-max", dest="t_max", type=float, default=None)
        sp.add_argument("--samples", type=int, default=None)
        sp.add_argument("--scale", choices=("linear", "log"), default=None)


_DEFAULTS = {
    "rel_tol": 1e-9,
    "abs_tol": 1e-12,
    "max_subdivisions": 2000,
    "samples": 64,
    "scale": "log",
    "t_min": None,
    "t_max": None,
    "T": None,
    "beta": None,
    "eps": None,
    "out": None,
}


def _merge_config(ns) -> None:
    """Config-file values fill unset flags; flags win; built-in defaults
    last."""
    file_vals = {}
    if getattr(ns, "config", None):
        with open(ns.config) as fh:
            file_vals = json.load(fh)
    for key, default in _DEFAULTS.items():
        if getattr(ns, key, None) is None:
            setattr(ns, key, file_vals.get(key, default))
    for key in ("n", "p"):
        if getattr(ns, key, None) is None:
            if key in file_vals:
                setattr(ns, key, file_vals[key])
            else:
                raise ValidationError(f"--{key} is required (flag or config file)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bsc",
        description="best-Sobolev curves of the half-space and the unit ball",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constants", help="special constants as JSON")
    _add_common(sp)
    sp.set_defaults(func=_cmd_constants)

    cu = sub.add_parser("curve", help="solve a curve over a trace grid")
    cusub = cu.add_subparsers(dest="which", required=True)
    for which in ("phih", "phib"):
        sp = cusub.add_parser(which)
        _add_common(sp, t_range=True)
        sp.set_defaults(func=_cmd_curve, which=which)

    ve = sub.add_parser("verify", help="machine-checkable reports")
    vesub = ve.add_subparsers(dest="which", required=True)

    sp = vesub.add_parser("key")
    _add_common(sp, t_range=True)
    sp.set_defaults(func=_cmd_verify_key)

    sp = vesub.add_parser("compare")
    _add_common(sp, t_range=True)
    sp.set_defaults(func=_cmd_verify_compare)

    sp = vesub.add_parser("interp")
    _add_common(sp)
    sp.add_argument("--samples", type=int, default=None)
    sp.set_defaults(func=_cmd_verify_interp)

    sp = vesub.add_parser("expansion")
    _add_common(sp)
    sp.add_argument("--T", type=float, default=None)
    sp.add_argument("--beta", type=float, default=None)
    sp.add_argument("--eps", type=float, nargs="+", default=None)
    sp.set_defaults(func=_cmd_verify_expansion)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        _merge_config(ns)
        return ns.func(ns)
    except ValidationError as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}), file=sys.stderr)
        return 3
    except BscError as exc:
        print(
            json.dumps({"error": "computation", "message": str(exc)}), file=sys.stderr
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())

import math

import pytest

from bsc.errors import UnsupportedRegimeError
from bsc.profiles import derived_exponents
from bsc.quadrature import QuadratureConfig
from bsc.curves import log_grid
from bsc.verify import (
    comparison_report,
    interpolation_spot_checks,
    key_inequality_margin,
    key_report,
)

from conftest import constants_for, exps_for


@pytest.fixture(scope="module")
def cfg():
    return QuadratureConfig()


def test_key_margin_positive_at_minimum(cfg):
    e = exps_for(5, 2.0)
    c = constants_for(5, 2.0)
    km = key_inequality_margin(c.T_0, e, cfg, c)
    assert km.margin > 0.0
    assert km.rel_mismatch <= 1e-5
    assert km.fine1 > 0.0 and km.fine2 > 0.0
    assert km.margin == pytest.approx(km.decomposition, rel=1e-5)


def test_key_margin_regime_error(cfg):
    e = derived_exponents(3, 2.0)
    with pytest.raises(UnsupportedRegimeError):
        key_inequality_margin(1.0, e, cfg)


def test_key_report_small_grid(cfg):
    e = exps_for(5, 2.2)
    c = constants_for(5, 2.2)
    rep = key_report(e, log_grid(c.T_E / 5.0, 5.0 * c.T_E, 7), cfg)
    assert rep.passed
    by_name = {cl.claim: cl for cl in rep.claims}
    assert by_name["key_margin_positive"].min_margin > 0.0
    assert by_name["decomposition_identity"].passed
    assert by_name["fine1_fine2_positive"].passed
    # deterministic
    rep2 = key_report(e, log_grid(c.T_E / 5.0, 5.0 * c.T_E, 7), cfg)
    assert rep.as_dict() == rep2.as_dict()


def test_comparison_report(cfg):
    e = exps_for(4, 2.0)
    c = constants_for(4, 2.0)
    lo = max(c.T_0 / 50.0, c.iso_B_root / 200.0)
    rep = comparison_report(e, log_grid(lo, 0.999 * c.iso_B_root, 9), cfg)
    assert rep.passed
    by_name = {cl.claim: cl for cl in rep.claims}
    assert by_name["ball_below_halfspace"].min_margin > 0.0
    assert by_name["linear_trace_bound"].details["equality_residual_at_T_E"] <= 1e-6
    # the augmented grid contains the minimum abscissa, so the argmin check
    # is exact
    assert by_name["minimum_at_T0"].details["argmin_T"] == pytest.approx(
        c.T_0, rel=1e-12
    )


def test_comparison_marks_unreachable_points_inconclusive(cfg):
    e = exps_for(5, 2.0)
    c = constants_for(5, 2.0)
    grid = [c.T_0 / 1000.0, 0.5 * c.T_0, c.T_0]  # first point below the cap
    rep = comparison_report(e, grid, cfg)
    by_name = {cl.claim: cl for cl in rep.claims}
    assert "inconclusive_points" in by_name
    assert len(by_name["inconclusive_points"].details["points"]) == 1
    assert rep.passed  # remaining points still certify the claims


def test_interpolation_checks(cfg):
    e = exps_for(5, 2.0)
    rep = interpolation_spot_checks(e, 9, cfg)
    assert rep.passed
    by_name = {cl.claim: cl for cl in rep.claims}
    margins = [row["margin"] for row in by_name["interpolation_bound"].details["samples"]]
    assert min(margins) >= -1e-9
    # concentration end tight against the full-space term, flat end tight
    # against the isoperimetric term, strict in the middle
    assert margins[0] <= 1e-2
    assert margins[-1] <= 1e-2
    assert max(margins) > 1e-2
    best = by_name["additive_power_bound_constant"].details["observed_best_constant"]
    assert math.isfinite(best) and best > 0.0

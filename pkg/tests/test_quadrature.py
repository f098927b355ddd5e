import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bsc.errors import ConditioningError, DomainError, UnsupportedRegimeError
from bsc.profiles import ProfileFamily, TranslatedProfile, derived_exponents, profile_value
from bsc.quadrature import (
    QuadratureConfig,
    adaptive_integrate,
    ball_trace_volume_ratio,
    cap_polar_limit,
    cap_sign_integrals,
    fullspace_moment,
    halfspace_moment,
    halfspace_moments,
    lambda_functional,
    sin_power_integral,
    sphere_area,
    unit_ball_volume,
)

import oracles


@pytest.fixture(scope="module")
def cfg():
    return QuadratureConfig()


# ---------------------------------------------------------------------------
# angular kernels
# ---------------------------------------------------------------------------


def test_sin_power_examples():
    assert sin_power_integral(0, math.pi / 2) == pytest.approx(math.pi / 2, rel=1e-15)
    assert sin_power_integral(1, math.pi) == pytest.approx(2.0, rel=1e-14)
    assert sin_power_integral(2, math.pi) == pytest.approx(math.pi / 2, rel=1e-14)


def test_sin_power_gamma_endpoint():
    for k in range(0, 12):
        want = math.sqrt(math.pi) * math.gamma((k + 1) / 2) / math.gamma(k / 2 + 1)
        assert sin_power_integral(k, math.pi) == pytest.approx(want, rel=1e-14)


@given(
    k=st.integers(min_value=0, max_value=10),
    phi=st.floats(min_value=0.0, max_value=math.pi),
)
@settings(max_examples=60, deadline=None)
def test_sin_power_against_dense_sum(k, phi):
    theta = np.linspace(0.0, phi, 20001)
    ref = np.trapezoid(np.sin(theta) ** k, theta)
    assert sin_power_integral(k, phi) == pytest.approx(ref, rel=1e-6, abs=1e-9)


def test_sin_power_domain():
    with pytest.raises(DomainError):
        sin_power_integral(2, -0.1)
    with pytest.raises(DomainError):
        sin_power_integral(-1, 1.0)


def test_cap_polar_limit_examples():
    assert cap_polar_limit(1.0, 0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert cap_polar_limit(1.0, 2.0) == pytest.approx(math.pi, rel=1e-15)
    assert cap_polar_limit(1.0, -2.0) == 0.0
    with pytest.raises(DomainError):
        cap_polar_limit(0.0, 1.0)


def test_cap_sign_integrals_closed_form(cfg):
    for k in range(1, 15):
        a = 0.1 * k
        v1, v2 = cap_sign_integrals(a, cfg)
        want = (2.0 / 3.0) * math.cos(a) ** 3
        assert abs(v1 - want) <= 1e-10
        assert abs(v2 - want) <= 1e-10


# ---------------------------------------------------------------------------
# half-space moments against closed forms
# ---------------------------------------------------------------------------


def test_centered_bubble_halfspace_is_half_of_fullspace(cfg):
    for (n, p) in [(5, 2.0), (3, 1.5), (5, 2.2)]:
        e = derived_exponents(n, p)
        prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
        assert halfspace_moment(prof, "volume", cfg) == pytest.approx(
            oracles.bubble_fullspace_volume(e) / 2.0, rel=1e-9
        )
        assert halfspace_moment(prof, "energy", cfg) == pytest.approx(
            oracles.bubble_fullspace_energy(e) / 2.0, rel=1e-9
        )
        assert halfspace_moment(prof, "trace", cfg) == pytest.approx(
            oracles.bubble_boundary_trace(e), rel=1e-9
        )


def test_escobar_moments_closed_forms(cfg):
    for (n, p) in [(5, 2.0), (4, 2.0), (3, 1.5), (5, 2.2)]:
        e = derived_exponents(n, p)
        prof = TranslatedProfile(e, ProfileFamily.ESCOBAR, -1.0, 1.0)
        assert halfspace_moment(prof, "volume", cfg) == pytest.approx(
            oracles.escobar_halfspace_volume(e), rel=1e-9
        )
        assert halfspace_moment(prof, "trace", cfg) == pytest.approx(
            oracles.escobar_boundary_trace(e), rel=1e-9
        )
        assert halfspace_moment(prof, "energy", cfg) == pytest.approx(
            oracles.escobar_halfspace_energy(e), rel=1e-9
        )


def test_reflection_identity(cfg):
    e = derived_exponents(5, 2.0)
    full_v = oracles.bubble_fullspace_volume(e)
    full_g = oracles.bubble_fullspace_energy(e)
    for t in (0.3, 1.1, 2.7):
        up = TranslatedProfile(e, ProfileFamily.SOBOLEV, t, 1.0)
        dn = TranslatedProfile(e, ProfileFamily.SOBOLEV, -t, 1.0)
        v = halfspace_moment(up, "volume", cfg) + halfspace_moment(dn, "volume", cfg)
        g = halfspace_moment(up, "energy", cfg) + halfspace_moment(dn, "energy", cfg)
        assert v == pytest.approx(full_v, rel=1e-8)
        assert g == pytest.approx(full_g, rel=1e-8)


def test_volume_and_trace_monotonicity(cfg):
    # volume strictly increases with the offset (more mass inside H); the
    # trace sees the center only through its distance to the wall, so it is
    # even in t, increasing up to t = 0; the trace/volume ratio driving the
    # curve solve decreases strictly throughout
    e = derived_exponents(4, 2.0)
    ts = [-2.0, -0.5, 0.0, 0.5, 2.0]
    vols, trs, ratios = [], [], []
    for t in ts:
        prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, t, 1.0)
        v = halfspace_moment(prof, "volume", cfg)
        tr = halfspace_moment(prof, "trace", cfg)
        vols.append(v)
        trs.append(tr)
        ratios.append(tr ** (1.0 / e.p_sharp) / v ** (1.0 / e.p_star))
    assert all(a < b for a, b in zip(vols, vols[1:]))
    assert all(a < b for a, b in zip(trs[:3], trs[1:3]))
    assert trs[1] == pytest.approx(trs[3], rel=1e-10)
    assert trs[0] == pytest.approx(trs[4], rel=1e-10)
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_monte_carlo_oracle_spot(cfg):
    e = derived_exponents(5, 2.0)
    prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
    est, se, tail = oracles.mc_halfspace_moment(prof, "volume", 1_000_000, seed=42)
    quad = halfspace_moment(prof, "volume", cfg)
    assert abs(quad - est) <= 3.0 * se + tail


def test_fullspace_moments(cfg):
    e = derived_exponents(5, 2.0)
    prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
    assert fullspace_moment(prof, "pstar", cfg) == pytest.approx(
        oracles.bubble_fullspace_volume(e), rel=1e-9
    )
    # translation invariance of the full-space mass
    shifted = TranslatedProfile(e, ProfileFamily.SOBOLEV, 3.7, 1.0)
    assert fullspace_moment(shifted, "pstar", cfg) == pytest.approx(
        fullspace_moment(prof, "pstar", cfg), rel=1e-12
    )
    with pytest.raises(DomainError):
        fullspace_moment(
            TranslatedProfile(e, ProfileFamily.ESCOBAR, -1.0, 1.0), "pstar", cfg
        )


def test_sobolev_constant_from_fullspace_moments(cfg):
    # with the p*-mass normalised to 1, energy^{1/p} is the best constant
    for (n, p) in [(5, 2.0), (3, 1.5)]:
        e = derived_exponents(n, p)
        prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
        vol = fullspace_moment(prof, "pstar", cfg)
        c = vol ** (-1.0 / e.p_star)
        scaled = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, c)
        assert fullspace_moment(scaled, "pstar", cfg) == pytest.approx(1.0, rel=1e-10)
        s = fullspace_moment(scaled, "energy", cfg) ** (1.0 / e.p)
        assert s == pytest.approx(oracles.talenti_constant(e), rel=1e-9)


def test_dilation_invariance_of_fullspace_mass(cfg):
    # the p*-normalised dilation alpha^{-n/p*} eta(r/alpha) preserves the
    # full-space mass; integrate the dilated shape directly
    e = derived_exponents(5, 2.0)
    base = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
    area = e.n * unit_ball_volume(e.n)
    want = oracles.bubble_fullspace_volume(e)
    for alpha in (0.2, 1.0, 7.5):
        def f(r, a=alpha):
            return (
                area
                * (a ** (-e.n / e.p_star) * profile_value(base, r / a)) ** e.p_star
                * r ** (e.n - 1)
            )
        val, _ = adaptive_integrate(f, [0, alpha, 10 * alpha, 1e4 * alpha], cfg)
        assert val == pytest.approx(want, rel=1e-10)


# ---------------------------------------------------------------------------
# first-moment functionals
# ---------------------------------------------------------------------------


def test_first_moment_regime_errors(cfg):
    e = derived_exponents(3, 2.0)  # n = 2p - 1 exactly
    prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
    for kind in ("energy_xn", "energy_xn_d1", "fine1", "fine2"):
        with pytest.raises(UnsupportedRegimeError):
            halfspace_moment(prof, kind, cfg)
    with pytest.raises(UnsupportedRegimeError):
        lambda_functional(prof, cfg)


def test_integration_by_parts_identity(cfg):
    # lambda * int x_n U^{p*} = int x_n |grad U|^p - fine1 for the exact
    # multiplier of each family's interior equation
    e = derived_exponents(5, 2.0)
    cases = [
        (ProfileFamily.SOBOLEV, 0.42, 1.3, e.n * e.kappa ** (e.p - 1) * 1.3 ** (e.p - e.p_star)),
        (ProfileFamily.ESCOBAR, -1.0, 1.0, 0.0),
        (ProfileFamily.BEYOND_ESCOBAR, -1.5, 0.9, -e.n * e.kappa ** (e.p - 1) * 0.9 ** (e.p - e.p_star)),
    ]
    for fam, t, c, lam in cases:
        prof = TranslatedProfile(e, fam, t, c)
        f1 = halfspace_moment(prof, "fine1", cfg)
        exn = halfspace_moment(prof, "energy_xn", cfg)
        vxn = halfspace_moment(prof, "volume_xn", cfg)
        assert exn - lam * vxn == pytest.approx(f1, rel=1e-9)
        f2 = halfspace_moment(prof, "fine2", cfg)
        d1 = halfspace_moment(prof, "energy_xn_d1", cfg)
        assert exn - e.n * d1 == pytest.approx(f2, rel=1e-9)
        assert f1 > 0.0 and f2 > 0.0


def test_moments_bundle(cfg):
    e = derived_exponents(5, 2.2)
    prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, -0.8, 1.1)
    m = halfspace_moments(prof, cfg)
    assert m.volume > 0 and m.trace > 0 and m.energy > 0
    assert m.energy_xn is not None
    assert m.lambda_functional == pytest.approx(
        m.energy_xn - e.p * m.energy_xn_d1, rel=1e-15
    )
    assert set(m.errors) >= {"volume", "trace", "energy", "volume_xn"}

    e2 = derived_exponents(3, 2.0)
    m2 = halfspace_moments(TranslatedProfile(e2, ProfileFamily.SOBOLEV, 0.0, 1.0), cfg)
    assert m2.energy_xn is None
    with pytest.raises(UnsupportedRegimeError):
        m2.lambda_functional


def test_near_singularity_guard(cfg):
    e = derived_exponents(5, 2.0)
    gap = 1e-13
    prof = TranslatedProfile(
        e, ProfileFamily.BEYOND_ESCOBAR, -1.0 - gap, 1.0, offset_gap=gap
    )
    with pytest.raises(ConditioningError):
        halfspace_moment(prof, "volume", cfg)


def test_homogeneity_of_ratio(cfg):
    e = derived_exponents(5, 2.0)
    t = 0.9

    def ratio(c):
        prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, t, c)
        tr = halfspace_moment(prof, "trace", cfg)
        vol = halfspace_moment(prof, "volume", cfg)
        return tr ** (1.0 / e.p_sharp) / vol ** (1.0 / e.p_star)

    assert ratio(1.0) == pytest.approx(ratio(7.3), rel=1e-12)


def test_ball_ratio_limit(cfg):
    e = derived_exponents(5, 2.0)
    iso_root = (e.n * unit_ball_volume(e.n) ** (1.0 / e.n)) ** (1.0 / e.p_sharp)
    assert ball_trace_volume_ratio(e, 1e6, cfg) == pytest.approx(iso_root, rel=1e-6)


def test_n2_reduction(cfg):
    # sigma_0 = 2 and I_0 = phi: the planar case runs through the same code
    e = derived_exponents(2, 1.3)
    prof = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
    assert halfspace_moment(prof, "volume", cfg) == pytest.approx(
        oracles.bubble_fullspace_volume(e) / 2.0, rel=1e-8
    )
    esc = TranslatedProfile(e, ProfileFamily.ESCOBAR, -1.0, 1.0)
    assert halfspace_moment(esc, "trace", cfg) == pytest.approx(
        oracles.escobar_boundary_trace(e), rel=1e-8
    )

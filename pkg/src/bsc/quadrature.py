"""Axisymmetric reduction of half-space, trace and full-space integrals.

Every integral of a translated radial profile over H = {x_n > 0} reduces to
one radial quadrature: in spherical coordinates (r, phi) about the center
t*e_n (polar angle phi measured from +e_n), the portion of the sphere of
radius r inside H is the cap phi < phi_max(r, t) = arccos(-t/r), and the
angular factors close in terms of

    I_k(phi) = int_0^phi sin^k(theta) dtheta,
    int_0^phi cos(theta) sin^k(theta) dtheta = sin^{k+1}(phi) / (k+1).

The slice identity (the average of omega_1^2 over the latitude circle at
polar angle phi equals sin^2(phi)/(n-1)) reduces the x_n-weighted first
derivative integrals the same way; for n = 2 the latitude circle is a pair
of points and the identity degenerates correctly (sigma_0 = 2, I_0 = phi).

Radial integrals are evaluated with a vectorised adaptive Gauss-Kronrod
(G7, K15) panel scheme and truncated at a radius where the analytic tail
envelope of :mod:`bsc.profiles` drops below the absolute tolerance; the
envelope bound is folded into the reported error estimate.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConditioningError,
    DomainError,
    QuadratureError,
    UnsupportedRegimeError,
)
from .profiles import (
    Exponents,
    ProfileFamily,
    TranslatedProfile,
    beyond_gap_slope,
    beyond_gap_value,
    decay_envelope,
    profile_slope,
    profile_value,
    tail_exponent,
)

__all__ = [
    "QuadratureConfig",
    "HalfSpaceMoments",
    "sin_power_integral",
    "cap_polar_limit",
    "adaptive_integrate",
    "halfspace_moment",
    "halfspace_moment_with_error",
    "halfspace_moments",
    "fullspace_moment",
    "lambda_functional",
    "ball_moment",
    "ball_trace_volume_ratio",
    "cap_sign_integrals",
    "sphere_area",
    "unit_ball_volume",
    "HALFSPACE_KINDS",
]


def sphere_area(m: int) -> float:
    """Total H^m measure of the unit m-sphere (sigma_0 = 2)."""
    return 2.0 * math.pi ** ((m + 1) / 2.0) / math.gamma((m + 1) / 2.0)


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits for the adaptive radial quadrature.

    ``abs_tol`` doubles as the tail-truncation target: the radial integral is
    cut where the matching decay envelope drops below it.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 10:
            raise DomainError("max_subdivisions must be >= 10")


# --------------------------------------------------------------------------
# Gauss-Kronrod 7/15 panel rule (QUADPACK nodes and weights)
# --------------------------------------------------------------------------

_XK = np.array(
    [
        -0.9914553711208126,
        -0.9491079123427585,
        -0.8648644233597691,
        -0.7415311855993944,
        -0.5860872354676911,
        -0.4058451513773972,
        -0.2077849550078985,
        0.0,
        0.2077849550078985,
        0.4058451513773972,
        0.5860872354676911,
        0.7415311855993944,
        0.8648644233597691,
        0.9491079123427585,
        0.9914553711208126,
    ]
)
_WK = np.array(
    [
        0.0229353220105292,
        0.0630920926299786,
        0.1047900103222502,
        0.1406532597155259,
        0.1690047266392679,
        0.1903505780647854,
        0.2044329400752989,
        0.2094821410847278,
        0.2044329400752989,
        0.1903505780647854,
        0.1690047266392679,
        0.1406532597155259,
        0.1047900103222502,
        0.0630920926299786,
        0.0229353220105292,
    ]
)
_G_IDX = np.array([1, 3, 5, 7, 9, 11, 13])
_WG = np.array(
    [
        0.1294849661688697,
        0.2797053914892767,
        0.3818300505051189,
        0.4179591836734694,
        0.3818300505051189,
        0.2797053914892767,
        0.1294849661688697,
    ]
)


def _panel_eval(f, lo, hi):
    """Evaluate K15 and G7 on a batch of panels; returns (k15, err).

    The error estimate is the plain |K15 - G7| difference: deliberately
    conservative, because the sharpened QUADPACK-style estimate can be
    deceived by integrand peaks narrower than a panel, and downstream
    margin checks divide by these estimates."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _XK[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    k15 = half * (fx @ _WK)
    g7 = half * (fx[:, _G_IDX] @ _WG)
    err = np.abs(k15 - g7)
    return k15, err


def adaptive_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints,
    cfg: QuadratureConfig,
) -> tuple[float, float]:
    """Integrate a vectorised integrand over [min(bp), max(bp)].

    The initial panels are the gaps between consecutive breakpoints; panels
    whose error exceeds their share of the budget are bisected until the
    summed error meets max(abs_tol, rel_tol * |I|) or the subdivision limit
    trips.
    """
    bp = np.unique(np.asarray(breakpoints, dtype=float))
    if bp.size < 2:
        raise DomainError("need at least two distinct breakpoints")
    lo, hi = bp[:-1], bp[1:]
    vals, errs = _panel_eval(f, lo, hi)
    while True:
        total = float(vals.sum())
        err_total = float(errs.sum())
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err_total <= tol:
            return total, err_total
        npan = lo.size
        if npan >= cfg.max_subdivisions:
            raise QuadratureError(
                f"subdivision limit {cfg.max_subdivisions} reached "
                f"(err {err_total:.3e} > tol {tol:.3e})"
            )
        share = tol / (2.0 * npan)
        split = errs > share
        if not split.any():
            split[np.argmax(errs)] = True
        room = cfg.max_subdivisions - npan
        if split.sum() > room:
            order = np.argsort(errs)[::-1]
            keep = order[:room]
            mask = np.zeros_like(split)
            mask[keep] = True
            split = mask
        s_lo, s_hi = lo[split], hi[split]
        s_mid = 0.5 * (s_lo + s_hi)
        new_lo = np.concatenate([lo[~split], s_lo, s_mid])
        new_hi = np.concatenate([hi[~split], s_mid, s_hi])
        new_vals, new_errs = _panel_eval(f, np.concatenate([s_lo, s_mid]),
                                         np.concatenate([s_mid, s_hi]))
        vals = np.concatenate([vals[~split], new_vals])
        errs = np.concatenate([errs[~split], new_errs])
        lo, hi = new_lo, new_hi


# --------------------------------------------------------------------------
# angular kernels
# --------------------------------------------------------------------------


def _sin_power_core(k: int, phi, s, c):
    """Recurrence I_k = (-c s^{k-1} + (k-1) I_{k-2}) / k on precomputed
    trig values; callers supply (phi, sin phi, cos phi) computed however is
    stable for their parametrization."""
    prev = None  # I_{j-2}
    cur = np.asarray(phi, dtype=float).copy()  # I_0
    if k >= 1:
        prev, cur = cur, 1.0 - c
    for j in range(2, k + 1):
        prev, cur = cur, (-c * s ** (j - 1) + (j - 1) * prev) / j
    return cur


def sin_power_integral(k: int, phi):
    """I_k(phi) = int_0^phi sin^k, via the stable recurrence
    I_k = (-cos(phi) sin^{k-1}(phi) + (k-1) I_{k-2}) / k.

    Exact at phi = pi: I_k(pi) = sqrt(pi) Gamma((k+1)/2) / Gamma(k/2 + 1).
    """
    if k < 0 or int(k) != k:
        raise DomainError("k must be a nonnegative integer")
    k = int(k)
    phi_arr = np.asarray(phi, dtype=float)
    if np.any(phi_arr < -1e-12) or np.any(phi_arr > math.pi + 1e-12):
        raise DomainError("phi must lie in [0, pi]")
    phi_c = np.clip(phi_arr, 0.0, math.pi)
    cur = _sin_power_core(k, phi_c, np.sin(phi_c), np.cos(phi_c))
    exact_pi = math.sqrt(math.pi) * math.gamma((k + 1) / 2.0) / math.gamma(k / 2.0 + 1.0)
    cur = np.where(phi_arr >= math.pi, exact_pi, cur)
    if np.isscalar(phi) or np.ndim(phi) == 0:
        return float(cur)
    return cur


def cap_polar_limit(r, t: float):
    """Polar angle from +e_n bounding {x_n > 0} on the sphere of radius r
    about t*e_n: pi when the sphere sits inside H, 0 when outside."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise DomainError("radius must be positive")
    out = np.arccos(np.clip(-t / r_arr, -1.0, 1.0))
    if np.isscalar(r) or np.ndim(r) == 0:
        return float(out)
    return out


# Series-stabilised cap kernels.  Near the opening of the cap the upward
# recurrence for I_k loses all significant digits (its terms cancel to
# O(phi^{k+1}) out of O(phi) pieces), and the first-moment combination
# t I_k + r sin^{k+1}/(k+1) cancels again for centers below the boundary.
# Both are handled with the pair
#
#     I_k(phi) = int_0^phi sin^k,      G_k(phi) = int_0^phi (1 - cos) sin^k,
#
# evaluated by power series for small phi and by recurrence/difference
# otherwise.

_SERIES_ORDER = 13  # powers of phi^2 kept; rel. error < 1e-15 at phi = 0.3
_SERIES_CUT = 0.3


@functools.lru_cache(maxsize=None)
def _cap_series_coeffs(k: int):
    m = _SERIES_ORDER
    # sin(t)/t and (1-cos t)/t^2 as series in x = t^2
    j = np.arange(m + k + 2)
    sin_ser = np.array([(-1.0) ** i / math.factorial(2 * i + 1) for i in j])
    cosc_ser = np.array([(-1.0) ** i / math.factorial(2 * i + 2) for i in j])
    pk = np.zeros(len(j))
    pk[0] = 1.0
    for _ in range(k):
        pk = np.convolve(pk, sin_ser)[: len(j)]
    rk = np.convolve(pk, cosc_ser)[: len(j)]
    pk = pk[: m + 1]
    rk = rk[: m + 1]
    powers_i = k + 1 + 2 * np.arange(m + 1)
    powers_g = k + 3 + 2 * np.arange(m + 1)
    return pk / powers_i, powers_i, rk / powers_g, powers_g


def _cap_I_G(k: int, phi, sin_phi, cos_phi):
    """(I_k, G_k) on arrays, stable over the whole range [0, pi]."""
    phi = np.asarray(phi, dtype=float)
    ci, pi_pow, cg, pg_pow = _cap_series_coeffs(k)
    x = phi * phi
    i_small = np.zeros_like(phi)
    g_small = np.zeros_like(phi)
    for a, b in zip(ci[::-1], cg[::-1]):
        i_small = i_small * x + a
        g_small = g_small * x + b
    i_small *= phi ** (k + 1)
    g_small *= phi ** (k + 3)
    i_big = _sin_power_core(k, phi, sin_phi, cos_phi)
    g_big = i_big - sin_phi ** (k + 1) / (k + 1)
    small = phi < _SERIES_CUT
    return np.where(small, i_small, i_big), np.where(small, g_small, g_big)


# --------------------------------------------------------------------------
# half-space moments
# --------------------------------------------------------------------------

HALFSPACE_KINDS = (
    "volume",
    "trace",
    "energy",
    "volume_xn",
    "energy_xn",
    "energy_xn_d1",
    "fine1",
    "fine2",
)

_FIRST_MOMENT_KINDS = frozenset({"energy_xn", "energy_xn_d1", "fine2", "fine1"})

_TAIL_FOR_KIND = {
    "volume": "pstar_mass",
    "trace": "trace_psharp_mass",
    "energy": "grad_p_mass",
    "volume_xn": "pstar_first_moment",
    "energy_xn": "grad_p_first_moment",
    "energy_xn_d1": "grad_p_first_moment",
    # fine1 ~ eta |eta'|^{p-1} r^{n-1} has the same tail power as the
    # x_n-weighted gradient integrals, and the first-moment envelope bounds it
    "fine1": "grad_p_first_moment",
    "fine2": "grad_p_first_moment",
}


def _check_kind_regime(exps: Exponents, kind: str) -> None:
    if kind not in HALFSPACE_KINDS:
        raise DomainError(f"unknown half-space moment kind {kind!r}")
    if kind in _FIRST_MOMENT_KINDS and kind != "fine1" and not exps.has_finite_first_moments:
        raise UnsupportedRegimeError(
            f"moment {kind!r} diverges unless n > 2p - 1 (n={exps.n}, p={exps.p})"
        )
    if kind == "fine1" and not exps.has_finite_first_moments:
        raise UnsupportedRegimeError(
            f"moment 'fine1' diverges unless n > 2p - 1 (n={exps.n}, p={exps.p})"
        )


def _guard_conditioning(prof: TranslatedProfile) -> None:
    # the gap-parametrized quadrature below stays accurate down to gaps a few
    # decades above machine epsilon; refuse only past that
    if prof.family is ProfileFamily.BEYOND_ESCOBAR and prof.ring_gap < 1e-12:
        raise ConditioningError(
            "beyond-Escobar singular sphere within 1e-12 of the boundary; "
            "refusing ill-conditioned quadrature"
        )


def _truncation_radius(prof: TranslatedProfile, kind: str, cfg: QuadratureConfig):
    """Radius where the matching tail envelope drops below abs_tol."""
    quantity = _TAIL_FOR_KIND[kind]
    r0 = prof.tail_radius
    bound0 = decay_envelope(prof, quantity, r0)
    k = tail_exponent(prof, quantity)
    if bound0 <= cfg.abs_tol:
        return 2.0 * r0, min(bound0, decay_envelope(prof, quantity, 2.0 * r0))
    R = r0 * (bound0 / cfg.abs_tol) ** (1.0 / k)
    R = min(R, 1e13)
    return R, decay_envelope(prof, quantity, R)


def _angular_factor(kind: str, n: int, t, r, phim, sin_phim, cos_phim, gap=None):
    """Closed-form inner angular integral for each moment kind.

    Uses int_0^phi cos sin^k = sin^{k+1}(phi)/(k+1) and the latitude-average
    identity <omega_1^2> = sin^2(phi)/(n-1).  When the exact gap
    u = r - |t| past the opening is supplied (centers below the boundary),
    the first-moment factors are rewritten as

        t I_k + r sin^{k+1}/(k+1) = t G_k + u sin^{k+1}/(k+1),

    which removes the cancellation between the two O(phi^{k+1}) pieces near
    the opening of the cap."""
    if kind == "fine1":
        return sin_phim ** (n - 1) / (n - 1)
    ik2, gk2 = _cap_I_G(n - 2, phim, sin_phim, cos_phim)
    if kind in ("volume", "energy"):
        return ik2
    if gap is not None:
        first_lo = t * gk2 + gap * sin_phim ** (n - 1) / (n - 1)
    else:
        first_lo = t * ik2 + r * sin_phim ** (n - 1) / (n - 1)
    if kind in ("volume_xn", "energy_xn"):
        return first_lo
    ik, gk = _cap_I_G(n, phim, sin_phim, cos_phim)
    if gap is not None:
        first_hi = t * gk + gap * sin_phim ** (n + 1) / (n + 1)
    else:
        first_hi = t * ik + r * sin_phim ** (n + 1) / (n + 1)
    if kind == "energy_xn_d1":
        return first_hi / (n - 1)
    if kind == "fine2":
        # (t + r cos)(cos^2 - sin^2/(n-1)) sin^{n-2}
        #   = (t + r cos)(sin^{n-2} - n/(n-1) sin^n)
        return first_lo - (n / (n - 1.0)) * first_hi
    raise DomainError(kind)  # pragma: no cover


def _density_factor(kind: str, e: Exponents, value, slope):
    if kind == "volume" or kind == "volume_xn":
        return value**e.p_star
    if kind == "fine1":
        return value * np.abs(slope) ** (e.p - 1.0)
    return np.abs(slope) ** e.p


def _halfspace_radial(prof: TranslatedProfile, kind: str, r_cut: float, cfg: QuadratureConfig):
    """Radial quadrature of one cap-reduced moment.

    For centers above the boundary (t >= 0) the variable is the radius r.
    For centers below (t < 0) the variable is the gap u = r - |t| past the
    opening of the cap, so that both the cap angle (1 - cos = u/r) and, for
    the beyond-Escobar family, the distance to the singular sphere
    (delta + u) are formed without cancellation.
    """
    e = prof.exponents
    n = e.n
    t = prof.offset
    c = prof.normalization
    sig = sphere_area(n - 2)

    if t >= 0.0:
        def f(r):
            r = np.asarray(r, dtype=float)
            phim = cap_polar_limit(np.maximum(r, 1e-300), t)
            dens = _density_factor(kind, e, profile_value(prof, r), profile_slope(prof, r))
            ang = _angular_factor(kind, n, t, r, phim, np.sin(phim), np.cos(phim))
            return sig * dens * r ** (n - 1) * ang

        pts = [prof.family.domain_start]
        if t > 0.0:
            for d in (0.1, 1e-2, 1e-4):
                if t * (1.0 - d) > 0.0:
                    pts.append(t * (1.0 - d))
            pts.append(t)
            for d in (1e-4, 1e-2, 0.1):
                pts.append(t * (1.0 + d))
        scale = 1.0 + abs(t)
        g = scale
        while g < r_cut:
            pts.append(g)
            g *= 4.0
        pts.append(r_cut)
        bp = np.unique([p for p in pts if p <= r_cut])
        return adaptive_integrate(f, bp, cfg)

    # t < 0: gap parametrization
    depth = -t
    delta = prof.ring_gap if prof.family is ProfileFamily.BEYOND_ESCOBAR else None

    def f(u):
        u = np.asarray(u, dtype=float)
        r = depth + u
        z = u / r  # 1 - cos(phi_max), exact in the gap variable
        sin_phim = np.sqrt(z * (2.0 - z))
        cos_phim = depth / r
        phim = np.arctan2(sin_phim, cos_phim)
        if delta is not None:
            val = c * beyond_gap_value(e, delta + u)
            slo = c * beyond_gap_slope(e, delta + u)
        else:
            val = profile_value(prof, r)
            slo = profile_slope(prof, r)
        dens = _density_factor(kind, e, val, slo)
        ang = _angular_factor(kind, n, t, r, phim, sin_phim, cos_phim, gap=u)
        return sig * dens * r ** (n - 1) * ang

    u_cut = r_cut - depth
    if u_cut <= 0.0:
        return 0.0, 0.0
    pts = [0.0]
    if delta is not None:
        for m in (1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0, 1e3, 1e4):
            if m * delta < u_cut:
                pts.append(m * delta)
    scale = 1.0 + depth
    for d in (1e-10, 1e-7, 1e-4, 1e-2):
        if d * scale < u_cut:
            pts.append(d * scale)
    g = 0.1 * scale
    while g < u_cut:
        pts.append(g)
        g *= 4.0
    pts.append(u_cut)
    bp = np.unique(pts)
    return adaptive_integrate(f, bp, cfg)


def _trace_quadrature(prof: TranslatedProfile, r_cut: float, cfg: QuadratureConfig):
    e = prof.exponents
    t = prof.offset
    c = prof.normalization
    sig = sphere_area(e.n - 2)
    delta = None
    if prof.family is ProfileFamily.BEYOND_ESCOBAR:
        delta = prof.ring_gap

    def f(rho):
        rho = np.asarray(rho, dtype=float)
        r = np.hypot(rho, t)
        if delta is not None:
            # r - 1 = (rho^2 + delta (2 + delta)) / (1 + r), cancellation-free
            gap = (rho**2 + delta * (2.0 + delta)) / (1.0 + r)
            val = c * beyond_gap_value(e, gap)
        else:
            val = profile_value(prof, np.maximum(r, 1e-300))
        return sig * val**e.p_sharp * rho ** (e.n - 2)

    pts = [0.0]
    if delta is not None:
        rho_s = math.sqrt(delta * (2.0 + delta))
        for m in (1e-2, 0.1, 0.3, 1.0, 3.0, 10.0):
            if m * rho_s < r_cut:
                pts.append(m * rho_s)
    scale = 1.0 + abs(t)
    for d in (1e-6, 1e-3, 0.03):
        pts.append(d * scale)
    g = scale
    while g < r_cut:
        pts.append(g)
        g *= 4.0
    pts.append(r_cut)
    return adaptive_integrate(f, np.unique([p for p in pts if p <= r_cut]), cfg)


def halfspace_moment_with_error(
    prof: TranslatedProfile, kind: str, cfg: QuadratureConfig
) -> tuple[float, float]:
    """Named half-space integral with an error estimate (quadrature error
    plus the analytic tail bound beyond the truncation radius)."""
    e = prof.exponents
    _check_kind_regime(e, kind)
    _guard_conditioning(prof)
    r_cut, tail = _truncation_radius(prof, kind, cfg)
    if kind == "trace":
        val, err = _trace_quadrature(prof, r_cut, cfg)
    else:
        val, err = _halfspace_radial(prof, kind, r_cut, cfg)
    return val, err + tail


def halfspace_moment(prof: TranslatedProfile, kind: str, cfg: QuadratureConfig) -> float:
    return halfspace_moment_with_error(prof, kind, cfg)[0]


@dataclass(frozen=True)
class HalfSpaceMoments:
    """The six half-space functionals of one profile, with error estimates.

    ``energy_xn`` and ``energy_xn_d1`` are populated only when n > 2p - 1;
    outside that regime the corresponding integrals diverge.
    """

    p: float
    volume: float
    trace: float
    energy: float
    volume_xn: float
    energy_xn: Optional[float]
    energy_xn_d1: Optional[float]
    errors: dict

    @property
    def lambda_functional(self) -> float:
        if self.energy_xn is None:
            raise UnsupportedRegimeError("n <= 2p - 1")
        return self.energy_xn - self.p * self.energy_xn_d1


def halfspace_moments(prof: TranslatedProfile, cfg: QuadratureConfig) -> HalfSpaceMoments:
    e = prof.exponents
    errors = {}
    vals = {}
    kinds = ["volume", "trace", "energy", "volume_xn"]
    if e.has_finite_first_moments:
        kinds += ["energy_xn", "energy_xn_d1"]
    for kind in kinds:
        v, err = halfspace_moment_with_error(prof, kind, cfg)
        vals[kind] = v
        errors[kind] = err
    return HalfSpaceMoments(
        p=e.p,
        volume=vals["volume"],
        trace=vals["trace"],
        energy=vals["energy"],
        volume_xn=vals["volume_xn"],
        energy_xn=vals.get("energy_xn"),
        energy_xn_d1=vals.get("energy_xn_d1"),
        errors=errors,
    )


def lambda_functional(prof: TranslatedProfile, cfg: QuadratureConfig) -> float:
    """First-moment energy functional
    int_H x_n |grad U|^p - p x_n (d_1 U)^2 |grad U|^{p-2},
    the per-unit-curvature energy release of boundary concentration."""
    e = prof.exponents
    if not e.has_finite_first_moments:
        raise UnsupportedRegimeError(
            f"functional diverges unless n > 2p - 1 (n={e.n}, p={e.p})"
        )
    a = halfspace_moment(prof, "energy_xn", cfg)
    b = halfspace_moment(prof, "energy_xn_d1", cfg)
    return a - e.p * b


def lambda_functional_with_error(prof: TranslatedProfile, cfg: QuadratureConfig):
    e = prof.exponents
    if not e.has_finite_first_moments:
        raise UnsupportedRegimeError("n <= 2p - 1")
    a, ea = halfspace_moment_with_error(prof, "energy_xn", cfg)
    b, eb = halfspace_moment_with_error(prof, "energy_xn_d1", cfg)
    return a - e.p * b, ea + e.p * eb


# --------------------------------------------------------------------------
# full space
# --------------------------------------------------------------------------


def fullspace_moment(prof: TranslatedProfile, kind: str, cfg: QuadratureConfig) -> float:
    """Full-space p*-mass or p-energy of a Sobolev profile (the other
    families are not globally integrable); independent of the offset."""
    if prof.family is not ProfileFamily.SOBOLEV:
        raise DomainError("full-space moments exist only for the Sobolev family")
    if kind not in ("pstar", "energy"):
        raise DomainError(f"unknown full-space kind {kind!r}")
    e = prof.exponents
    area = e.n * unit_ball_volume(e.n)
    quantity = "pstar_mass" if kind == "pstar" else "grad_p_mass"
    centered = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, prof.normalization)
    r0 = centered.tail_radius
    bound0 = decay_envelope(centered, quantity, r0)
    k = tail_exponent(centered, quantity)
    r_cut = r0 * max(2.0, (bound0 / cfg.abs_tol) ** (1.0 / k)) if bound0 > cfg.abs_tol else 2 * r0
    r_cut = min(r_cut, 1e13)

    if kind == "pstar":
        def f(r):
            return area * profile_value(centered, r) ** e.p_star * r ** (e.n - 1)
    else:
        def f(r):
            return area * np.abs(profile_slope(centered, r)) ** e.p * r ** (e.n - 1)

    pts = [0.0, 0.25, 1.0]
    g = 4.0
    while g < r_cut:
        pts.append(g)
        g *= 4.0
    pts.append(r_cut)
    val, err = adaptive_integrate(f, pts, cfg)
    return val


# --------------------------------------------------------------------------
# unit-ball moments of the dilated bubble
# --------------------------------------------------------------------------


def ball_moment(
    exps: Exponents,
    alpha: float,
    kind: str,
    cfg: QuadratureConfig,
    amplitude: float = 1.0,
) -> float:
    """Moments over the unit ball of the centered dilated bubble

        u(x) = amplitude * alpha^{-n/p*} eta_S(|x|/alpha).

    volume = int_B u^{p*}, energy = int_B |grad u|^p (both 1D radial),
    trace = (n omega_n) u(1)^{p#} since the boundary sphere is one radius.
    """
    if kind not in ("volume", "trace", "energy"):
        raise DomainError(f"unknown ball moment kind {kind!r}")
    if not (alpha > 0.0):
        raise DomainError("dilation must be positive")
    e = exps
    area = e.n * unit_ball_volume(e.n)
    base = TranslatedProfile(e, ProfileFamily.SOBOLEV, 0.0, 1.0)
    amp = amplitude * alpha ** (-e.n / e.p_star)
    if kind == "trace":
        return area * (amp * profile_value(base, 1.0 / alpha)) ** e.p_sharp

    if kind == "volume":
        def f(r):
            return area * (amp * profile_value(base, r / alpha)) ** e.p_star * r ** (e.n - 1)
    else:
        def f(r):
            g = (amp / alpha) * np.abs(profile_slope(base, r / alpha))
            return area * g ** e.p * r ** (e.n - 1)

    pts = [0.0]
    s = min(alpha, 1.0)
    for fac in (0.25, 1.0, 4.0, 16.0):
        if s * fac < 1.0:
            pts.append(s * fac)
    pts.append(1.0)
    val, err = adaptive_integrate(f, pts, cfg)
    return val


def ball_trace_volume_ratio(exps: Exponents, alpha: float, cfg: QuadratureConfig) -> float:
    """trace^{1/p#} / volume^{1/p*} on the unit ball; amplitude-free."""
    tr = ball_moment(exps, alpha, "trace", cfg)
    vol = ball_moment(exps, alpha, "volume", cfg)
    return tr ** (1.0 / exps.p_sharp) / vol ** (1.0 / exps.p_star)


# --------------------------------------------------------------------------
# closed-form angular checks
# --------------------------------------------------------------------------


def cap_sign_integrals(alpha: float, cfg: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    """The two planar cap integrals

        int_{-a}^{pi+a} (sin t + sin a)(sin^2 t - cos^2 t) dt,
        int_{a}^{pi-a}  (sin t - sin a)(sin^2 t - cos^2 t) dt,

    both equal to (2/3) cos^3(a) for a in (0, pi/2); evaluated by quadrature
    so they serve as an independent check of that closed form."""
    if not (0.0 < alpha < math.pi / 2.0):
        raise DomainError("alpha must lie in (0, pi/2)")
    sa = math.sin(alpha)

    def f_plus(t):
        return (np.sin(t) + sa) * (np.sin(t) ** 2 - np.cos(t) ** 2)

    def f_minus(t):
        return (np.sin(t) - sa) * (np.sin(t) ** 2 - np.cos(t) ** 2)

    v1, _ = adaptive_integrate(f_plus, np.linspace(-alpha, math.pi + alpha, 9), cfg)
    v2, _ = adaptive_integrate(f_minus, np.linspace(alpha, math.pi - alpha, 9), cfg)
    return v1, v2

"""Critical Sobolev exponents and the explicit radial extremal profiles.

Three radial shapes generate every minimizer handled by this package:

* ``SOBOLEV``         eta(r) = (1 + r^{p'})^{1 - n/p}, the full-space
  extremal bubble, smooth and positive on [0, inf);
* ``ESCOBAR``         eta(r) = r^{-(n-p)/(p-1)}, a multiple of the
  fundamental solution of the p-Laplacian, singular at r = 0;
* ``BEYOND_ESCOBAR``  eta(r) = (r^{p'} - 1)^{1 - n/p}, defined for r > 1,
  singular on the unit sphere.

A :class:`TranslatedProfile` places one of these shapes at ``offset * e_n``
with amplitude ``normalization``.  The admissible offsets mirror the geometry
of the half-space H = {x_n > 0}: the Escobar shape sits at unit distance below
the boundary (offset = -1), the beyond-Escobar shape strictly further
(offset < -1) so its singular sphere stays outside the closed half-space.

All three shapes share the same power-law far field,

    eta(r) ~ r^{-(n-p)/(p-1)},     |eta'(r)| ~ r^{-(n-1)/(p-1)},

and :func:`decay_envelope` converts that behaviour into rigorous analytic
tail bounds used to truncate radial quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, UnsupportedRegimeError

__all__ = [
    "Exponents",
    "ProfileFamily",
    "TranslatedProfile",
    "derived_exponents",
    "profile_value",
    "profile_slope",
    "profile_curvature",
    "decay_envelope",
    "envelope_constants",
    "TAIL_QUANTITIES",
]


@dataclass(frozen=True)
class Exponents:
    """Dimension n, integrability p and the derived critical exponents.

    p_star  = n p / (n - p)        volume (interior) critical exponent
    p_sharp = (n - 1) p / (n - p)  trace (boundary) critical exponent
    p_prime = p / (p - 1)          Hoelder conjugate, the profile exponent
    """

    n: int
    p: float
    p_star: float
    p_sharp: float
    p_prime: float

    @property
    def kappa(self) -> float:
        """Far-field decay rate (n - p)/(p - 1) shared by all profiles."""
        return (self.n - self.p) / (self.p - 1.0)

    @property
    def has_finite_first_moments(self) -> bool:
        """True iff n > 2p - 1, the regime where x_n-weighted gradient
        integrals converge."""
        return self.n > 2.0 * self.p - 1.0

    @property
    def supports_boundary_concentration(self) -> bool:
        """True iff n > 2p, the regime where the gluing exponent window is
        non-empty."""
        return self.n > 2.0 * self.p


def derived_exponents(n: int, p: float) -> Exponents:
    """Build the exponent record for integer n >= 2 and p in (1, n)."""
    if int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    p = float(p)
    if not (1.0 < p < n):
        raise DomainError(f"p must lie in (1, n) = (1, {n}), got {p!r}")
    return Exponents(
        n=n,
        p=p,
        p_star=n * p / (n - p),
        p_sharp=(n - 1) * p / (n - p),
        p_prime=p / (p - 1.0),
    )


class ProfileFamily(Enum):
    SOBOLEV = "sobolev"
    ESCOBAR = "escobar"
    BEYOND_ESCOBAR = "beyond"

    @property
    def domain_start(self) -> float:
        """Left endpoint of the radial domain (open for the singular kinds)."""
        if self is ProfileFamily.SOBOLEV:
            return 0.0
        if self is ProfileFamily.ESCOBAR:
            return 0.0
        return 1.0


@dataclass(frozen=True)
class TranslatedProfile:
    """A radial shape centered at ``offset * e_n`` with positive amplitude.

    For the beyond-Escobar family the distance delta = -offset - 1 between
    the singular sphere and the boundary can be supplied exactly through
    ``offset_gap``; near-tangent configurations push delta far below the
    absolute resolution of the float ``offset`` itself, and every integral
    depends on delta at full relative precision.
    """

    exponents: Exponents
    family: ProfileFamily
    offset: float
    normalization: float = 1.0
    offset_gap: float | None = None

    def __post_init__(self):
        if not (self.normalization > 0.0):
            raise DomainError("normalization must be positive")
        if self.family is ProfileFamily.ESCOBAR and self.offset != -1.0:
            raise DomainError("Escobar profiles are pinned at offset -1")
        if self.family is ProfileFamily.BEYOND_ESCOBAR and not (self.offset < -1.0):
            raise DomainError(
                "beyond-Escobar profiles need offset < -1 so the singular "
                "sphere stays outside the closed half-space"
            )
        if self.offset_gap is not None:
            if self.family is not ProfileFamily.BEYOND_ESCOBAR:
                raise DomainError("offset_gap applies to the beyond-Escobar family only")
            if not (self.offset_gap > 0.0):
                raise DomainError("offset_gap must be positive")
            if abs((-1.0 - self.offset_gap) - self.offset) > 4.0 * abs(
                np.spacing(self.offset)
            ):
                raise DomainError("offset_gap inconsistent with offset")

    @property
    def ring_gap(self) -> float:
        """Exact distance from the singular sphere to the boundary
        (beyond-Escobar only)."""
        if self.family is not ProfileFamily.BEYOND_ESCOBAR:
            raise DomainError("ring_gap defined for the beyond-Escobar family only")
        return self.offset_gap if self.offset_gap is not None else -self.offset - 1.0

    @property
    def tail_radius(self) -> float:
        """Radius beyond which the power-law envelope bounds apply."""
        return 10.0 * (1.0 + abs(self.offset))


def _check_radii(prof: TranslatedProfile, r: np.ndarray) -> None:
    fam = prof.family
    if fam is ProfileFamily.SOBOLEV:
        if np.any(r < 0.0):
            raise DomainError("Sobolev profile needs r >= 0")
    elif fam is ProfileFamily.ESCOBAR:
        if np.any(r <= 0.0):
            raise DomainError("Escobar profile needs r > 0")
    else:
        if np.any(r <= 1.0):
            raise DomainError("beyond-Escobar profile needs r > 1")


def profile_value(prof: TranslatedProfile, r):
    """Evaluate c * eta(r); accepts scalars or arrays, strictly decreasing."""
    r = np.asarray(r, dtype=float)
    _check_radii(prof, r)
    e = prof.exponents
    a = 1.0 - e.n / e.p  # negative outer exponent
    pp = e.p_prime
    if prof.family is ProfileFamily.SOBOLEV:
        out = np.exp(a * np.log1p(r**pp))
    elif prof.family is ProfileFamily.ESCOBAR:
        out = r ** (-e.kappa)
    else:
        # expm1 keeps r^{p'} - 1 accurate down to r - 1 ~ 1e-15
        out = np.expm1(pp * np.log(r)) ** a
    return prof.normalization * out


def profile_slope(prof: TranslatedProfile, r):
    """Radial derivative c * eta'(r); nonpositive on the whole domain."""
    r = np.asarray(r, dtype=float)
    _check_radii(prof, r)
    e = prof.exponents
    a = 1.0 - e.n / e.p
    pp = e.p_prime
    if prof.family is ProfileFamily.SOBOLEV:
        rpow = r**pp
        with np.errstate(divide="ignore"):
            base = np.where(r > 0.0, r ** (pp - 1.0), 0.0)
        out = a * pp * base * np.exp((a - 1.0) * np.log1p(rpow))
    elif prof.family is ProfileFamily.ESCOBAR:
        out = -e.kappa * r ** (-e.kappa - 1.0)
    else:
        g = np.expm1(pp * np.log(r))
        out = a * pp * r ** (pp - 1.0) * g ** (a - 1.0)
    return prof.normalization * out


def profile_curvature(prof: TranslatedProfile, r):
    """Second radial derivative c * eta''(r), used for the radial
    p-Laplacian in multiplier extraction."""
    r = np.asarray(r, dtype=float)
    _check_radii(prof, r)
    e = prof.exponents
    a = 1.0 - e.n / e.p
    pp = e.p_prime
    if prof.family is ProfileFamily.SOBOLEV:
        rpow = r**pp
        out = (
            a
            * pp
            * r ** (pp - 2.0)
            * (1.0 + rpow) ** (a - 2.0)
            * ((pp - 1.0) * (1.0 + rpow) + (a - 1.0) * pp * rpow)
        )
    elif prof.family is ProfileFamily.ESCOBAR:
        out = e.kappa * (e.kappa + 1.0) * r ** (-e.kappa - 2.0)
    else:
        g = np.expm1(pp * np.log(r))
        out = (
            a
            * pp
            * r ** (pp - 2.0)
            * g ** (a - 2.0)
            * ((pp - 1.0) * g + (a - 1.0) * pp * r**pp)
        )
    return prof.normalization * out


def beyond_gap_value(e: Exponents, gap):
    """eta_BE(1 + gap) evaluated from the gap r - 1 directly.

    Near-tangent configurations push the gap down to ~1e-12 where forming
    r = 1 + gap first and subtracting again would destroy every significant
    digit; log1p/expm1 on the gap keeps full relative precision.
    """
    gap = np.asarray(gap, dtype=float)
    if np.any(gap <= 0.0):
        raise DomainError("beyond-Escobar gap must be positive")
    a = 1.0 - e.n / e.p
    return np.expm1(e.p_prime * np.log1p(gap)) ** a


def beyond_gap_slope(e: Exponents, gap):
    """eta_BE'(1 + gap) from the gap, same stable form."""
    gap = np.asarray(gap, dtype=float)
    if np.any(gap <= 0.0):
        raise DomainError("beyond-Escobar gap must be positive")
    a = 1.0 - e.n / e.p
    pp = e.p_prime
    g = np.expm1(pp * np.log1p(gap))
    return a * pp * (1.0 + gap) ** (pp - 1.0) * g ** (a - 1.0)


# ---------------------------------------------------------------------------
# tail envelopes
# ---------------------------------------------------------------------------

TAIL_QUANTITIES = (
    "pstar_mass",
    "pstar_first_moment",
    "grad_p_mass",
    "grad_p_first_moment",
    "trace_psharp_mass",
)

# |x_n| <= |offset| + r <= 1.1 r beyond the tail radius (offset/r <= 1/10
# there), so first-moment envelopes carry a flat 1.1 factor and stay pure
# power laws in R.
_FIRST_MOMENT_SLACK = 1.1


@dataclass(frozen=True)
class EnvelopeConstants:
    """Empirical sandwich constants for the far-field power laws."""

    value_const: float
    slope_const: float
    tail_radius: float


_ENVELOPE_CACHE: dict = {}


def envelope_constants(prof: TranslatedProfile) -> EnvelopeConstants:
    """Scan the far field and return C with 1/C <= eta(r) r^kappa <= C
    (and the analogue for |eta'| r^{kappa+1}... exponent (n-1)/(p-1))
    for all r >= tail_radius.  Amplitude-free: computed for c = 1."""
    key = (prof.exponents, prof.family, round(prof.offset, 12))
    hit = _ENVELOPE_CACHE.get(key)
    if hit is not None:
        return hit
    e = prof.exponents
    base = TranslatedProfile(e, prof.family, prof.offset, 1.0)
    r0 = prof.tail_radius
    r = r0 * np.logspace(0.0, 4.0, 161)
    val_env = profile_value(base, r) * r**e.kappa
    slo_env = np.abs(profile_slope(base, r)) * r ** ((e.n - 1.0) / (e.p - 1.0))
    cv = 1.02 * max(val_env.max(), 1.0 / val_env.min())
    cs = 1.02 * max(slo_env.max(), 1.0 / slo_env.min())
    out = EnvelopeConstants(value_const=float(cv), slope_const=float(cs), tail_radius=r0)
    _ENVELOPE_CACHE[key] = out
    return out


def _sphere_area(m: int) -> float:
    """H^m measure of the unit m-sphere; m = 0 gives 2 (two points)."""
    return 2.0 * math.pi ** ((m + 1) / 2.0) / math.gamma((m + 1) / 2.0)


def decay_envelope(prof: TranslatedProfile, quantity: str, R: float) -> float:
    """Rigorous upper bound for the tail of the named integral beyond
    radius R from the profile center.

    Bounds integrate the pointwise power-law envelope analytically over the
    full shell {|y| > R}, so they are monotone decreasing pure powers of R.
    Requires R >= tail_radius.
    """
    if quantity not in TAIL_QUANTITIES:
        raise DomainError(f"unknown tail quantity {quantity!r}")
    e = prof.exponents
    if quantity == "grad_p_first_moment" and not e.has_finite_first_moments:
        raise UnsupportedRegimeError(
            f"x_n-weighted gradient tail diverges for n <= 2p - 1 "
            f"(n = {e.n}, p = {e.p})"
        )
    if R < prof.tail_radius:
        raise DomainError(
            f"envelope valid only for R >= {prof.tail_radius:g}, got {R:g}"
        )
    env = envelope_constants(prof)
    c = prof.normalization
    n, p = e.n, e.p
    full_area = _sphere_area(n - 1)
    if quantity == "pstar_mass":
        k = n / (p - 1.0)
        pref = (c * env.value_const) ** e.p_star * full_area / k
    elif quantity == "pstar_first_moment":
        k = (n + 1.0 - p) / (p - 1.0)
        pref = _FIRST_MOMENT_SLACK * (c * env.value_const) ** e.p_star * full_area / k
    elif quantity == "grad_p_mass":
        k = (n - p) / (p - 1.0)
        pref = (c * env.slope_const) ** p * full_area / k
    elif quantity == "grad_p_first_moment":
        k = (n + 1.0 - 2.0 * p) / (p - 1.0)
        pref = _FIRST_MOMENT_SLACK * (c * env.slope_const) ** p * full_area / k
    else:  # trace_psharp_mass
        k = (n - 1.0) / (p - 1.0)
        pref = (c * env.value_const) ** e.p_sharp * _sphere_area(n - 2) / k
    return pref * R ** (-k)


def tail_exponent(prof: TranslatedProfile, quantity: str) -> float:
    """Decay power k of the envelope, i.e. bound(R) = const * R^(-k)."""
    e = prof.exponents
    n, p = e.n, e.p
    if quantity == "pstar_mass":
        return n / (p - 1.0)
    if quantity == "pstar_first_moment":
        return (n + 1.0 - p) / (p - 1.0)
    if quantity == "grad_p_mass":
        return (n - p) / (p - 1.0)
    if quantity == "grad_p_first_moment":
        if not e.has_finite_first_moments:
            raise UnsupportedRegimeError("n <= 2p - 1")
        return (n + 1.0 - 2.0 * p) / (p - 1.0)
    if quantity == "trace_psharp_mass":
        return (n - 1.0) / (p - 1.0)
    raise DomainError(f"unknown tail quantity {quantity!r}")

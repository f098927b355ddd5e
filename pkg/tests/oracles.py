"""Independent oracles used to check the quadrature and solver paths.

Everything here deliberately avoids the cap-reduction machinery of the
package: closed forms come straight from Gamma-function identities, global
integrals from Monte Carlo with importance sampling, and 1D radial
integrals from trapezoid sums with Richardson extrapolation.
"""

import math
from math import gamma, pi

import numpy as np

from bsc.profiles import decay_envelope, profile_slope, profile_value


def beta_fn(a, b):
    return gamma(a) * gamma(b) / gamma(a + b)


def unit_ball_volume(n):
    return pi ** (n / 2.0) / gamma(n / 2.0 + 1.0)


def sphere_area(m):
    return 2.0 * pi ** ((m + 1) / 2.0) / gamma((m + 1) / 2.0)


# ---------------------------------------------------------------------------
# closed forms for the centered bubble (amplitude 1)
# ---------------------------------------------------------------------------


def bubble_fullspace_volume(e):
    return e.n * unit_ball_volume(e.n) / e.p_prime * beta_fn(e.n / e.p_prime, e.n / e.p)


def bubble_fullspace_energy(e):
    return (
        e.n
        * unit_ball_volume(e.n)
        / e.p_prime
        * e.kappa**e.p
        * beta_fn(e.n / e.p_prime + 1.0, e.n / e.p - 1.0)
    )


def bubble_boundary_trace(e):
    """Trace integral of the bubble centered on the boundary."""
    return sphere_area(e.n - 2) / e.p_prime * beta_fn(
        (e.n - 1) / e.p_prime, (e.n - 1) / e.p
    )


def sobolev_constant(e):
    return bubble_fullspace_energy(e) ** (1.0 / e.p) / bubble_fullspace_volume(e) ** (
        1.0 / e.p_star
    )


def curve_minimum_abscissa(e):
    return bubble_boundary_trace(e) ** (1.0 / e.p_sharp) / (
        bubble_fullspace_volume(e) / 2.0
    ) ** (1.0 / e.p_star)


def talenti_constant(e):
    """The classical closed form of the best full-space constant."""
    n, p = e.n, e.p
    return (
        math.sqrt(pi)
        * n ** (1.0 / p)
        * ((n - p) / (p - 1.0)) ** ((p - 1.0) / p)
        * (gamma(n / p) * gamma(1 + n - n / p) / (gamma(1 + n / 2.0) * gamma(n)))
        ** (1.0 / n)
    )


# ---------------------------------------------------------------------------
# closed forms for the fundamental-solution profile at unit distance
# ---------------------------------------------------------------------------


def _power_halfspace(n, m):
    """int_H |x + e_n|^{-m} dx for m > n."""
    return sphere_area(n - 2) * beta_fn((n - 1) / 2.0, (m - n + 1) / 2.0) / (
        2.0 * (m - n)
    )


def _power_boundary(n, m):
    """int_{x_n = 0} |x + e_n|^{-m} dH^{n-1} for m > n - 1."""
    return sphere_area(n - 2) / 2.0 * beta_fn((n - 1) / 2.0, (m - (n - 1)) / 2.0)


def escobar_halfspace_volume(e):
    return _power_halfspace(e.n, e.kappa * e.p_star)


def escobar_boundary_trace(e):
    return _power_boundary(e.n, e.kappa * e.p_sharp)


def escobar_halfspace_energy(e):
    return e.kappa**e.p * _power_halfspace(e.n, (e.n - 1) * e.p / (e.p - 1.0))


def escobar_trace_abscissa(e):
    return escobar_boundary_trace(e) ** (1.0 / e.p_sharp) / escobar_halfspace_volume(
        e
    ) ** (1.0 / e.p_star)


def escobar_trace_constant(e):
    return escobar_halfspace_energy(e) ** (1.0 / e.p) / escobar_boundary_trace(e) ** (
        1.0 / e.p_sharp
    )


# ---------------------------------------------------------------------------
# trapezoid + Richardson on the transformed radial line
# ---------------------------------------------------------------------------


def romberg_radial(g, levels=12):
    """int_0^inf g(r) dr via r = u/(1-u) and a Romberg table.

    g must vanish fast enough that the transformed integrand tends to zero
    at u = 1 (any of the profile moments do)."""

    def h(u):
        out = np.zeros_like(u)
        inside = (u > 0.0) & (u < 1.0)
        ui = u[inside]
        r = ui / (1.0 - ui)
        out[inside] = g(r) / (1.0 - ui) ** 2
        return out

    rows = []
    for k in range(4, levels + 1):
        m = 2**k
        u = np.linspace(0.0, 1.0, m + 1)
        vals = h(u)
        rows.append(np.trapezoid(vals, dx=1.0 / m))
    # Richardson: successive eliminations of h^2, h^4, ...
    table = [np.array(rows)]
    for j in range(1, len(rows)):
        prev = table[-1]
        fac = 4.0**j
        table.append((fac * prev[1:] - prev[:-1]) / (fac - 1.0))
    return float(table[-1][-1])


# ---------------------------------------------------------------------------
# Monte Carlo with multivariate-t importance sampling
# ---------------------------------------------------------------------------


def mc_halfspace_moment(prof, kind, n_samples, seed, df=2.0, batch=500_000):
    """(estimate, standard_error, tail_bound) for the half-space p*-mass or
    p-energy of a translated profile.

    Samples a multivariate Student-t centered at the profile center; its
    polynomial tail dominates the integrand tails for every admissible
    profile with n > 2p - 1, so the weights have finite variance.  Samples
    beyond the envelope radius are dropped and accounted by the analytic
    tail bound.
    """
    e = prof.exponents
    n = e.n
    t = prof.offset
    scale = 1.0 + abs(t)
    r_tail = 1e6 * scale
    quantity = "pstar_mass" if kind == "volume" else "grad_p_mass"
    tail = decay_envelope(prof, quantity, r_tail)

    log_norm = (
        math.lgamma((df + n) / 2.0)
        - math.lgamma(df / 2.0)
        - 0.5 * n * math.log(df * pi)
        - n * math.log(scale)
    )
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        m = min(batch, n_samples - done)
        z = rng.standard_normal((m, n))
        g = rng.chisquare(df, size=m)
        y = z * (scale / np.sqrt(g / df))[:, None]
        x_n = y[:, -1] + t
        r2 = np.einsum("ij,ij->i", y, y)
        r = np.sqrt(r2)
        log_q = log_norm - (df + n) / 2.0 * np.log1p(r2 / (df * scale**2))
        keep = (x_n > 0.0) & (r < r_tail)
        f = np.zeros(m)
        rr = np.maximum(r[keep], 1e-300)
        if kind == "volume":
            f[keep] = profile_value(prof, rr) ** e.p_star
        else:
            f[keep] = np.abs(profile_slope(prof, rr)) ** e.p
        w = f * np.exp(-log_q)
        total += w.sum()
        total_sq += (w**2).sum()
        done += m
    mean = total / n_samples
    var = max(total_sq / n_samples - mean**2, 0.0)
    se = math.sqrt(var / n_samples)
    return mean, se, tail


def fd_slope(prof, r, h=1e-4):
    """Five-point central stencil for the radial derivative."""
    hh = h * max(1.0, r)
    vals = [profile_value(prof, r + k * hh) for k in (-2, -1, 1, 2)]
    return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * hh)


def fd_radial_plaplacian(prof, r, h=1e-6):
    """Radial p-Laplacian via a finite difference of the flux
    w = |eta'|^{p-2} eta', independent of the closed-form curvature."""
    e = prof.exponents

    def w(s):
        sl = profile_slope(prof, s)
        return np.abs(sl) ** (e.p - 2.0) * sl

    hh = h * max(1.0, r)
    wp = (w(r + hh) - w(r - hh)) / (2.0 * hh)
    return wp + (e.n - 1.0) * w(r) / r

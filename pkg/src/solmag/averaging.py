"""Orbit averages of the vertical momentum and the entropy integral.

Every regular orbit of the reduced sphere dynamics is closed, so the
time average nu_bar of the vertical momentum nu along an orbit is well
defined; it depends only on the Casimir level (and is equal on the two
components of a disconnected level).  Integrating |nu_bar| against the
invariant probability area of the sphere yields the metric entropy of
the flow on a compact quotient.  The quadrature uses coordinates
(xi, nu) in which the invariant area is (1/2) d(xi) ^ d(nu):

    nu = cos(eta),  a0 = cos(2 pi xi) sin(eta),  a1 = sin(2 pi xi) sin(eta).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import euler
from ._kernels import (STATUS_FALLBACK, STATUS_NONFINITE, STATUS_PERIODIC,
                       STATUS_STATIONARY, _entropy_row, _orbit_average)
from .euler import (DEFAULT_H, FIELD_TOL, ERR_NONFINITE, ERR_UNMAGNETIZED,
                    NonFiniteStateError, OrbitRecord)

DEFAULT_T_MAX = 200.0
RETURN_TOL = 1e-8
REFINE_TOL = 1e-12
F_MARGIN = 1e-6
POLE_GUARD = 1e-4
SEPARATRIX_TOL = 1e-10
DEFAULT_GRID = (201, 64)

ERR_EMPTY_LEVEL = "empty level"
ERR_STATIONARY = "stationary orbit"


def _checked_seed(p0, s, h, t_max):
    p0 = np.asarray(p0, dtype=float)
    if not np.all(np.isfinite(p0)) or not np.isfinite(s):
        raise NonFiniteStateError(ERR_NONFINITE)
    if not euler.is_on_sphere(p0, tol=1e-9):
        raise ValueError("point not on the unit sphere")
    if not 0.0 < h <= euler.H_MAX:
        raise ValueError(f"step size must lie in (0, {euler.H_MAX}]")
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    if np.linalg.norm(euler.euler_field(p0, s)) <= FIELD_TOL:
        raise ValueError(ERR_STATIONARY)
    return p0


def _separatrix_array(s):
    return np.asarray(euler.separatrix_values(s), dtype=float)


def detect_period(p0, s, h=DEFAULT_H, t_max=DEFAULT_T_MAX,
                  return_tol=RETURN_TOL):
    """Locate the period of the orbit through p0 and average nu over it.

    The signed distance to the hyperplane through p0 with normal along
    the initial velocity is monitored; the first same-direction crossing
    whose state lies within return_tol of p0 is accepted and refined by
    bisection to 1e-12 in time.  If no closed orbit is found by t_max
    (separatrix and near-separatrix seeds), the record carries the
    Birkhoff average over [0, t_max] with converged = False.
    """
    p0 = _checked_seed(p0, s, h, t_max)
    nu_bar, period, _, status = _orbit_average(
        p0[0], p0[1], p0[2], s, h, t_max, return_tol, REFINE_TOL,
        FIELD_TOL, _separatrix_array(s), SEPARATRIX_TOL)
    if status == STATUS_NONFINITE:
        raise NonFiniteStateError(ERR_NONFINITE)
    converged = status == STATUS_PERIODIC
    span = period if converged else t_max
    rec = euler.integrate_orbit(p0, s, span, h=h)
    return OrbitRecord(
        times=rec.times,
        states=rec.states,
        nu_bar=float(nu_bar),
        period=float(period) if converged else None,
        converged=converged,
        casimir_drift=rec.casimir_drift,
        energy_drift=rec.energy_drift,
    )


class NuBarResult(NamedTuple):
    nu_bar: float
    converged: bool


def nu_bar_at(p0, s, h=DEFAULT_H, t_max=DEFAULT_T_MAX):
    """Average of nu over the orbit through p0 (period-exact when closed)."""
    p0 = _checked_seed(p0, s, h, t_max)
    nu_bar, _, _, status = _orbit_average(
        p0[0], p0[1], p0[2], s, h, t_max, RETURN_TOL, REFINE_TOL,
        FIELD_TOL, _separatrix_array(s), SEPARATRIX_TOL)
    if status == STATUS_NONFINITE:
        raise NonFiniteStateError(ERR_NONFINITE)
    return NuBarResult(float(nu_bar), status == STATUS_PERIODIC)


def seed_on_level(s, f):
    """A point of the sphere on the Casimir level f, on a fixed longitude.

    Levels with |f| < |s| meet the longitude a1 = 0, a0 > 0 (where
    f = s*nu); higher levels are seeded on a0 = a1 > 0 and lower ones on
    a0 = -a1 > 0, picking the quadratic root that stays inside the
    sphere.  Two-component levels are seeded on one component; the other
    is its image under (a0, a1) -> (-a0, -a1), which commutes with the
    flow, so orbit averages agree.
    """
    fmin, fmax = euler.casimir_range(s)
    if not (np.isfinite(f) and fmin < f < fmax):
        raise ValueError(ERR_EMPTY_LEVEL)
    if s == 0.0:
        if f == 0.0:
            p = np.array([0.0, 1.0, 0.0])
        else:
            r = np.sqrt(abs(f))
            nu = np.sqrt(1.0 - 2.0 * abs(f))
            p = np.array([nu, r, np.sign(f) * r])
    elif abs(f) < abs(s):
        nu = f / s
        p = np.array([nu, np.sqrt(1.0 - nu * nu), 0.0])
    elif f > 0.0:
        disc = np.sqrt(max(s * s + 1.0 - 2.0 * f, 0.0))
        nu = s - disc if s > 0 else s + disc
        a = np.sqrt(max(0.5 * (1.0 - nu * nu), 0.0))
        p = np.array([nu, a, a])
    else:
        disc = np.sqrt(max(s * s + 1.0 + 2.0 * f, 0.0))
        nu = -s + disc if s > 0 else -s - disc
        a = np.sqrt(max(0.5 * (1.0 - nu * nu), 0.0))
        p = np.array([nu, a, -a])
    return p / np.linalg.norm(p)


class ProfilePoint(NamedTuple):
    f: float
    nu_bar: float
    converged: bool


def nubar_profile(s, f_samples, h=DEFAULT_H, t_max=DEFAULT_T_MAX):
    """nu_bar as a function of the Casimir level, one entry per sample.

    Each sample must be a regular value at distance at least F_MARGIN
    from every critical value of the Casimir on the sphere.
    """
    fmin, fmax = euler.casimir_range(s)
    crit = set(euler.separatrix_values(s)) | {fmin, fmax}
    out = []
    for f in np.asarray(f_samples, dtype=float):
        if not fmin < f < fmax:
            raise ValueError(ERR_EMPTY_LEVEL)
        if min(abs(f - c) for c in crit) < F_MARGIN:
            raise ValueError(
                f"level f={f} is within {F_MARGIN} of a critical value")
        nb = nu_bar_at(seed_on_level(s, f), s, h=h, t_max=t_max)
        out.append(ProfilePoint(float(f), nb.nu_bar, nb.converged))
    return out


@dataclass
class EntropyResult:
    s: float
    value: float
    grid: tuple
    fallback_fraction: float


def _simpson_weights(n, spacing):
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = 1.0
    w[-1] = 1.0
    return w * (spacing / 3.0)


def entropy(s, n_nu=DEFAULT_GRID[0], n_xi=DEFAULT_GRID[1], h=DEFAULT_H,
            t_max=DEFAULT_T_MAX, threads=1):
    """Metric entropy: integral of |nu_bar| against the invariant area.

    Composite Simpson in nu over [-1 + POLE_GUARD, 1 - POLE_GUARD]
    (n_nu odd) crossed with a periodic trapezoid in xi over [0, 1)
    (n_xi nodes).  Each grid node is mapped to its sphere point and
    contributes |nu_bar| there; nodes on separatrix levels or beyond
    t_max fall back to the capped Birkhoff mean and are counted in
    fallback_fraction.  Row sums are accumulated per longitude and
    combined in row order, so the result does not depend on threads.
    """
    if s == 0.0:
        raise ValueError(ERR_UNMAGNETIZED)
    if not np.isfinite(s):
        raise NonFiniteStateError(ERR_NONFINITE)
    if n_nu < 3 or n_nu % 2 == 0:
        raise ValueError("n_nu must be odd and at least 3")
    if n_xi < 4:
        raise ValueError("n_xi must be at least 4")
    if not 0.0 < h <= euler.H_MAX:
        raise ValueError(f"step size must lie in (0, {euler.H_MAX}]")
    lo, hi = -1.0 + POLE_GUARD, 1.0 - POLE_GUARD
    nu_nodes = np.linspace(lo, hi, n_nu)
    weights = _simpson_weights(n_nu, (hi - lo) / (n_nu - 1))
    sep = _separatrix_array(s)

    def eval_row(i):
        xi = i / n_xi
        vals, fell = _entropy_row(s, xi, nu_nodes, h, t_max, RETURN_TOL,
                                  REFINE_TOL, FIELD_TOL, sep, SEPARATRIX_TOL)
        if not np.all(np.isfinite(vals)):
            raise NonFiniteStateError(ERR_NONFINITE)
        return float(weights @ vals), int(fell.sum())

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(eval_row, range(n_xi)))
    else:
        rows = [eval_row(i) for i in range(n_xi)]

    total = 0.0
    fallback = 0
    for rs, rf in rows:
        total += rs
        fallback += rf
    return EntropyResult(
        s=float(s),
        value=0.5 * total / n_xi,
        grid=(n_nu, n_xi),
        fallback_fraction=fallback / (n_nu * n_xi),
    )


def entropy_curve(s_values, n_nu=DEFAULT_GRID[0], n_xi=DEFAULT_GRID[1],
                  h=DEFAULT_H, t_max=DEFAULT_T_MAX, threads=1):
    """Entropy at each listed intensity, in the listed order."""
    return [entropy(s, n_nu=n_nu, n_xi=n_xi, h=h, t_max=t_max,
                    threads=threads) for s in np.asarray(s_values, dtype=float)]

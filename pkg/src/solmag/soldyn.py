"""Full phase-space dynamics on the solvable group and its product twist.

States are ordered (u, y0, y1, nu, a0, a1) with nu = p_u and the frame
momenta a0 = exp(u) p_{y0}, a1 = exp(-u) p_{y1}.  The magnetic term of
intensity s lives in the (y0, y1) plane; the momentum equations close
up (they are the reduced sphere dynamics) and the group part is
reconstructed by quadrature.  Two global first integrals survive the
twist:

    I0 = exp(-u) a0 + s y1,      I1 = exp(u) a1 - s y0,

so every closed reduced orbit with vanishing average of nu lifts to a
closed orbit of the full flow.  The module also provides the suspension
data of a hyperbolic lattice, the top Lyapunov exponent on the smooth
invariant set nu = +-1, a0 = a1 = 0, and the variant geometry where the
magnetic term pairs u with a flat extra coordinate (product twist), for
which the flow is integrable and the exponent collapses to zero.

Tangent growth is always measured in the left-invariant frame
(coordinate variations d(y0), d(y1) scaled by exp(-u), exp(u)): the
frame is what descends to compact quotients, where lattice directions
are uniformly comparable.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import (_lyapunov_sol_frame, _lyapunov_variation_frame,
                       _sol_rhs, _sol_trajectory, _variation_rhs,
                       _variation_trajectory)
from . import averaging, euler
from .euler import ERR_NONFINITE, DEFAULT_H, NonFiniteStateError

ERR_NOT_HYPERBOLIC = "not a hyperbolic SL(2,Z) matrix"
ERR_NO_CLOSED_ORBIT = "no closed Euler orbit located"

DEFAULT_LYAP_T = 200.0
DEFAULT_VARIATION_T = 500.0
_RENORM_DT = 1.0
_WARM_FRAC = 0.25


def sol_point(u, y0, y1, nu, a0, a1):
    x = np.array([u, y0, y1, nu, a0, a1], dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFiniteStateError(ERR_NONFINITE)
    return x


def sol_field(x, s):
    """Right-hand side of the magnetic flow in (u, y0, y1, nu, a0, a1)."""
    u, y0, y1, nu, a0, a1 = np.asarray(x, dtype=float)
    return np.array(_sol_rhs(u, y0, y1, nu, a0, a1, s))


def first_integrals(x, s):
    """(I0, I1, H): the two twisted translation integrals and the energy."""
    u, y0, y1, nu, a0, a1 = np.asarray(x, dtype=float)
    i0 = np.exp(-u) * a0 + s * y1
    i1 = np.exp(u) * a1 - s * y0
    ham = 0.5 * (nu * nu + a0 * a0 + a1 * a1)
    return np.array([i0, i1, ham])


@dataclass
class SolOrbitRecord:
    """Sampled full trajectory with worst-case drift of each integral."""
    times: np.ndarray
    states: np.ndarray
    integral_drift: np.ndarray  # (3,): I0, I1, H

    @property
    def max_drift(self):
        return float(np.max(self.integral_drift))


def _split_steps(t_end, h):
    n = int(np.floor(t_end / h + 1e-9))
    rem = t_end - n * h
    if rem < 1e-12:
        rem = 0.0
    return n, rem


def _times(n, rem, h, t_end, m):
    t = np.empty(m)
    t[:n + 1] = h * np.arange(n + 1)
    if rem > 0.0 and m == n + 2:
        t[-1] = t_end
    return t


def sol_integrate(x0, s, t_end, h=DEFAULT_H):
    """Integrate the full flow; raises on numerical blow-up.

    No constraint is enforced on the momenta: the drift of the three
    integrals reported in the record is the honest global error proxy.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (6,) or not np.all(np.isfinite(x0)):
        raise NonFiniteStateError(ERR_NONFINITE)
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if not 0.0 < h <= euler.H_MAX:
        raise ValueError(f"step size must lie in (0, {euler.H_MAX}]")
    n, rem = _split_steps(t_end, h)
    states, bad = _sol_trajectory(x0, s, h, n, rem)
    if bad >= 0:
        raise NonFiniteStateError(ERR_NONFINITE)
    m = states.shape[0]
    times = _times(n, rem, h, t_end, m)
    ints = np.empty((m, 3))
    ints[:, 0] = np.exp(-states[:, 0]) * states[:, 4] + s * states[:, 2]
    ints[:, 1] = np.exp(states[:, 0]) * states[:, 5] - s * states[:, 1]
    ints[:, 2] = 0.5 * (states[:, 3] ** 2 + states[:, 4] ** 2 + states[:, 5] ** 2)
    drift = np.max(np.abs(ints - ints[0]), axis=0)
    return SolOrbitRecord(times=times, states=states, integral_drift=drift)


@dataclass
class ClosedOrbitResult:
    s: float
    period: float
    closure_error: float
    orbit: SolOrbitRecord


def reconstruct_closed_orbit(s, h=DEFAULT_H, t_max=averaging.DEFAULT_T_MAX):
    """Lift the zero level of the Casimir to a closed full-flow orbit.

    On the level f = 0 the orbit average of nu vanishes by symmetry, so
    u returns after one reduced period and the translation integrals
    force y0, y1 to close as well; such orbits are contractible in any
    compact quotient.  The geodesic case s = 0 is rejected: there the
    zero level is the separatrix and carries no closed orbit.
    """
    if s == 0.0:
        raise ValueError(ERR_NO_CLOSED_ORBIT)
    p0 = averaging.seed_on_level(s, 0.0)
    rec = averaging.detect_period(p0, s, h=h, t_max=t_max)
    if not rec.converged:
        raise RuntimeError(ERR_NO_CLOSED_ORBIT)
    x0 = sol_point(0.0, 0.0, 0.0, p0[0], p0[1], p0[2])
    orbit = sol_integrate(x0, s, rec.period, h=h)
    err = float(np.linalg.norm(orbit.states[-1] - orbit.states[0]))
    return ClosedOrbitResult(s=float(s), period=rec.period,
                             closure_error=err, orbit=orbit)


def lyapunov_on_anosov_set(s, t_end=DEFAULT_LYAP_T, h=DEFAULT_H, sign=1.0,
                           seed=0):
    """Top Lyapunov exponent on the invariant set nu = +-1, a0 = a1 = 0.

    On this set the flow is a pure u-translation and is independent of
    s.  Frame variations along y1 stretch like exp(t) on the nu = +1
    branch (the stretching swaps to y0 on nu = -1), so the exponent is 1
    for every intensity.  Tangent propagation with renormalization every
    time unit; the first quarter of the span is treated as warm-up.
    """
    if t_end < 100.0:
        raise ValueError("t_end must be at least 100")
    if not 0.0 < h <= euler.H_MAX:
        raise ValueError(f"step size must lie in (0, {euler.H_MAX}]")
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(6)
    v0 /= np.linalg.norm(v0)
    nu0 = 1.0 if sign >= 0 else -1.0
    return float(_lyapunov_sol_frame(nu0, 0.0, 0.0, s, v0, h, t_end,
                                     _RENORM_DT, _WARM_FRAC))


@dataclass
class LatticeSpec:
    """Suspension data of a hyperbolic integer matrix.

    P has unit-length rows spanning the expanding/contracting left
    eigendirections, so P A P^{-1} is diagonal; volume is the covolume
    log(lambda) * |det P| of the suspension with this normalization of
    the translation lattice (it is reported up to the index of the
    chosen generator pair).
    """
    matrix: np.ndarray
    trace: int
    expanding_eigenvalue: float
    conjugator: np.ndarray
    diag_residual: float
    volume: float


def lattice_from_matrix(mat):
    """Suspension data for a hyperbolic element of SL(2, Z)."""
    a = np.asarray(mat)
    if a.shape != (2, 2) or not np.all(a == np.round(a)):
        raise ValueError(ERR_NOT_HYPERBOLIC)
    a = a.astype(float)
    tr = int(round(a[0, 0] + a[1, 1]))
    det = int(round(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]))
    if det != 1 or abs(tr) <= 2:
        raise ValueError(ERR_NOT_HYPERBOLIC)
    lam = 0.5 * (abs(tr) + np.sqrt(tr * tr - 4.0))
    w, vecs = np.linalg.eig(a.T)  # right eigenvectors of A^T = left of A
    order = np.argsort(-np.abs(w))
    p = np.empty((2, 2))
    for row, idx in enumerate(order):
        v = np.real(vecs[:, idx])
        v = v / np.linalg.norm(v)
        # Fix the overall sign so the conjugator is reproducible.
        lead = v[np.argmax(np.abs(v))]
        p[row] = v if lead > 0 else -v
    diag = p @ a @ np.linalg.inv(p)
    sg = 1.0 if tr > 0 else -1.0
    residual = float(np.max(np.abs(diag - np.diag([sg * lam, sg / lam]))))
    vol = float(np.log(lam) * abs(np.linalg.det(p)))
    return LatticeSpec(matrix=np.asarray(mat), trace=tr,
                       expanding_eigenvalue=float(lam), conjugator=p,
                       diag_residual=residual, volume=vol)


def variation_point(u, t, y0, y1, nu, tau, a0, a1):
    x = np.array([u, t, y0, y1, nu, tau, a0, a1], dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFiniteStateError(ERR_NONFINITE)
    return x


def variation_field(x, s):
    """Magnetic flow on the product of the solvable group with a line,
    twisted in the (u, t) plane.

    State order (u, t, y0, y1, nu, tau, a0, a1).  The twist couples only
    nu and tau; both frame momenta a0, a1 evolve by pure shear, which
    makes the system integrable for every s.
    """
    x = np.asarray(x, dtype=float)
    return np.array(_variation_rhs(
        (x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]), s))


def variation_integrals(x, s):
    """(a0*a1, a0*exp(-tau/s), tau - s*u, H) conserved by the product twist."""
    u, t, y0, y1, nu, tau, a0, a1 = np.asarray(x, dtype=float)
    if s == 0.0:
        raise ValueError("the exponential integral needs s != 0")
    ham = 0.5 * (nu * nu + tau * tau + a0 * a0 + a1 * a1)
    return np.array([a0 * a1, a0 * np.exp(-tau / s), tau - s * u, ham])


@dataclass
class VariationOrbitRecord:
    times: np.ndarray
    states: np.ndarray
    integral_drift: np.ndarray  # (4,): a0*a1, a0*exp(-tau/s), tau - s*u, H

    @property
    def max_drift(self):
        return float(np.max(self.integral_drift))


def variation_integrate(x0, s, t_end, h=DEFAULT_H):
    """Integrate the product-twist flow, tracking its four integrals."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (8,) or not np.all(np.isfinite(x0)):
        raise NonFiniteStateError(ERR_NONFINITE)
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if not 0.0 < h <= euler.H_MAX:
        raise ValueError(f"step size must lie in (0, {euler.H_MAX}]")
    n, rem = _split_steps(t_end, h)
    states, bad = _variation_trajectory(x0, s, h, n, rem)
    if bad >= 0:
        raise NonFiniteStateError(ERR_NONFINITE)
    m = states.shape[0]
    times = _times(n, rem, h, t_end, m)
    ints = np.empty((m, 4))
    ints[:, 0] = states[:, 6] * states[:, 7]
    if s != 0.0:
        ints[:, 1] = states[:, 6] * np.exp(-states[:, 5] / s)
    else:
        ints[:, 1] = states[:, 6]
    ints[:, 2] = states[:, 5] - s * states[:, 0]
    ints[:, 3] = 0.5 * (states[:, 4] ** 2 + states[:, 5] ** 2
                        + states[:, 6] ** 2 + states[:, 7] ** 2)
    drift = np.max(np.abs(ints - ints[0]), axis=0)
    return VariationOrbitRecord(times=times, states=states,
                                integral_drift=drift)


def variation_lyapunov(x0, s, t_end=DEFAULT_VARIATION_T, h=DEFAULT_H, seed=0):
    """Top Lyapunov exponent of the product-twist flow (frame tangent).

    For s != 0 the flow is integrable, so the exponent vanishes up to
    the O(log t / t) tail of the finite-time estimate; for s = 0 the
    geodesic stretching along u-translation reappears.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (8,) or not np.all(np.isfinite(x0)):
        raise NonFiniteStateError(ERR_NONFINITE)
    if t_end < 50.0:
        raise ValueError("t_end must be at least 50")
    if not 0.0 < h <= euler.H_MAX:
        raise ValueError(f"step size must lie in (0, {euler.H_MAX}]")
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(8)
    v0 /= np.linalg.norm(v0)
    return float(_lyapunov_variation_frame(
        x0[4], x0[5], x0[6], x0[7], s, v0, h, t_end, _RENORM_DT, _WARM_FRAC))

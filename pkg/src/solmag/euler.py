"""Reduced charged-particle dynamics on the unit momentum sphere.

The configuration space is the 3-D solvable group with left-invariant
metric exp(-2u) dy0^2 + exp(2u) dy1^2 + du^2 and a monopole-type
magnetic term of intensity s in the (y0, y1) plane.  In left-invariant
momentum coordinates (nu, a0, a1) the momentum equations close up and
preserve both the kinetic energy and the Casimir function

    f(nu, a0, a1) = s * nu + a0 * a1,

so the reduced flow lives on the unit sphere and is integrable.  This
module provides the reduced field, its conserved quantities, the
critical-point classification of f restricted to the sphere, and a
norm-preserving RK4 integrator.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import _euler_rhs, _euler_step, _euler_trajectory

SPHERE_TOL = 1e-12
FIELD_TOL = 1e-8
H_MAX = 0.1
DEFAULT_H = 1e-3

KIND_PEAK = "elliptic-peak"
KIND_PIT = "elliptic-pit"
KIND_HYPERBOLIC = "hyperbolic"
KIND_DEGENERATE = "degenerate"

ERR_NONFINITE = "non-finite state"
ERR_UNMAGNETIZED = "unmagnetized case excluded"


class NonFiniteStateError(RuntimeError):
    """A state or input stopped being a finite float vector."""


def euler_point(nu, a0, a1, normalize=False):
    """Build an on-sphere momentum point as a (3,) float array.

    With normalize=True the input is radially projected to the sphere;
    otherwise it must already satisfy the unit-norm invariant.
    """
    p = np.array([nu, a0, a1], dtype=float)
    if not np.all(np.isfinite(p)):
        raise NonFiniteStateError(ERR_NONFINITE)
    r = float(np.linalg.norm(p))
    if normalize:
        if r == 0.0:
            raise ValueError("cannot project the zero vector to the sphere")
        return p / r
    if abs(r - 1.0) > SPHERE_TOL:
        raise ValueError("point not on the unit sphere")
    return p


def is_on_sphere(p, tol=SPHERE_TOL):
    p = np.asarray(p, dtype=float)
    return bool(np.all(np.isfinite(p)) and abs(np.linalg.norm(p) - 1.0) <= tol)


def casimir(p, s):
    """Casimir s*nu + a0*a1 of the twisted Lie-Poisson bracket."""
    nu, a0, a1 = np.asarray(p, dtype=float)
    return s * nu + a0 * a1


def hamiltonian(p):
    """Kinetic energy (nu^2 + a0^2 + a1^2) / 2; equals 1/2 on the sphere."""
    p = np.asarray(p, dtype=float)
    return 0.5 * float(p @ p)


def euler_field(p, s):
    """Reduced momentum field (a1^2 - a0^2, nu*a0 - s*a1, s*a0 - nu*a1)."""
    nu, a0, a1 = np.asarray(p, dtype=float)
    return np.array(_euler_rhs(nu, a0, a1, s))


def gradient_pairing(p, s):
    """Pairing of d(nu) with the surface gradient of the Casimir.

    Evaluates the quadratic form [a0 a1] [[s, nu], [nu, s]] [a0 a1]^T.
    For |s| > 1 the form is sign-definite away from the poles, which is
    the mechanism forcing the orbit average of nu to be monotone across
    Casimir levels.
    """
    nu, a0, a1 = np.asarray(p, dtype=float)
    return s * (a0 * a0 + a1 * a1) + 2.0 * nu * a0 * a1


def rk4_project_step(p, s, h):
    """One classical RK4 step followed by radial projection to the sphere."""
    p = np.asarray(p, dtype=float)
    if not (np.all(np.isfinite(p)) and np.isfinite(s) and np.isfinite(h)):
        raise NonFiniteStateError(ERR_NONFINITE)
    if not 0.0 < h <= H_MAX:
        raise ValueError(f"step size must lie in (0, {H_MAX}]")
    nu, a0, a1, _ = _euler_step(p[0], p[1], p[2], 0.0, s, h)
    return np.array([nu, a0, a1])


@dataclass
class OrbitRecord:
    """Sampled trajectory on the sphere plus orbit-level summaries.

    nu_bar is the time average of nu over the sampled span (over one
    exact period when converged is True).  period is None when no closed
    orbit was located.  casimir_drift and energy_drift are the largest
    deviations of the two conserved quantities over the samples.
    """
    times: np.ndarray
    states: np.ndarray
    nu_bar: float
    period: float | None
    converged: bool
    casimir_drift: float
    energy_drift: float


def _split_steps(t_end, h):
    n = int(np.floor(t_end / h + 1e-9))
    rem = t_end - n * h
    if rem < 1e-12:
        rem = 0.0
    return n, rem


def integrate_orbit(p0, s, t_end, h=DEFAULT_H):
    """Integrate the sphere dynamics for a fixed time span.

    Returns an OrbitRecord with per-step samples; the period fields are
    left unset (nu_bar holds the plain average over the span).
    """
    p0 = np.asarray(p0, dtype=float)
    if not np.all(np.isfinite(p0)):
        raise NonFiniteStateError(ERR_NONFINITE)
    if not is_on_sphere(p0, tol=1e-9):
        raise ValueError("point not on the unit sphere")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if not 0.0 < h <= H_MAX:
        raise ValueError(f"step size must lie in (0, {H_MAX}]")
    n, rem = _split_steps(t_end, h)
    states, uacc = _euler_trajectory(p0[0], p0[1], p0[2], s, h, n, rem)
    times = np.empty(states.shape[0])
    times[:n + 1] = h * np.arange(n + 1)
    times[-1] = t_end
    f = s * states[:, 0] + states[:, 1] * states[:, 2]
    energy = 0.5 * np.einsum("ij,ij->i", states, states)
    return OrbitRecord(
        times=times,
        states=states,
        nu_bar=float(uacc[-1] / t_end),
        period=None,
        converged=False,
        casimir_drift=float(np.max(np.abs(f - f[0]))),
        energy_drift=float(np.max(np.abs(energy - 0.5))),
    )


@dataclass
class CriticalPoint:
    point: np.ndarray
    kind: str
    f_value: float


@dataclass
class CriticalPointReport:
    s: float
    points: list

    @property
    def f_values(self):
        return [c.f_value for c in self.points]

    def of_kind(self, kind):
        return [c for c in self.points if c.kind == kind]


def classify_critical_points(s):
    """Critical points of the Casimir on the sphere, with their types.

    For 0 < |s| < 1 there are four elliptic points (two peaks at
    nu = s, a0 = a1 = +-alpha and two pits at nu = -s, a0 = -a1) with
    alpha = sqrt((1 - s^2)/2), plus two hyperbolic points at the poles.
    For |s| > 1 only the poles survive and they are elliptic; |s| = 1 is
    the degenerate transition.  s = 0 is rejected: without the magnetic
    term the Casimir degenerates to a0*a1 and the classification below
    does not apply.
    """
    if s == 0.0:
        raise ValueError(ERR_UNMAGNETIZED)
    pts = []
    if abs(s) < 1.0:
        alpha = np.sqrt(0.5 * (1.0 - s * s))
        fext = 0.5 * (1.0 + s * s)
        pts.append(CriticalPoint(np.array([s, alpha, alpha]), KIND_PEAK, fext))
        pts.append(CriticalPoint(np.array([s, -alpha, -alpha]), KIND_PEAK, fext))
        pts.append(CriticalPoint(np.array([1.0, 0.0, 0.0]), KIND_HYPERBOLIC, s))
        pts.append(CriticalPoint(np.array([-1.0, 0.0, 0.0]), KIND_HYPERBOLIC, -s))
        pts.append(CriticalPoint(np.array([-s, alpha, -alpha]), KIND_PIT, -fext))
        pts.append(CriticalPoint(np.array([-s, -alpha, alpha]), KIND_PIT, -fext))
    elif abs(s) == 1.0:
        pts.append(CriticalPoint(np.array([1.0, 0.0, 0.0]), KIND_DEGENERATE, s))
        pts.append(CriticalPoint(np.array([-1.0, 0.0, 0.0]), KIND_DEGENERATE, -s))
    else:
        sg = 1.0 if s > 0 else -1.0
        pts.append(CriticalPoint(np.array([sg, 0.0, 0.0]), KIND_PEAK, abs(s)))
        pts.append(CriticalPoint(np.array([-sg, 0.0, 0.0]), KIND_PIT, -abs(s)))
    pts.sort(key=lambda c: (-c.f_value, -c.point[0], -c.point[1]))
    return CriticalPointReport(s=float(s), points=pts)


def casimir_range(s):
    """Open interval of Casimir values on regular levels of the sphere."""
    if abs(s) <= 1.0:
        fmax = 0.5 * (1.0 + s * s)
    else:
        fmax = abs(s)
    return -fmax, fmax


def separatrix_values(s):
    """Casimir values whose level carries no closed orbit.

    For 0 < |s| < 1 these are the two saddle levels +-s; for s = 0 the
    level through the poles; for |s| = 1 the degenerate pole levels.
    For |s| > 1 every regular level is closed, so the tuple is empty.
    """
    if s == 0.0:
        return (0.0,)
    if abs(s) <= 1.0:
        return (-abs(s), abs(s))
    return ()

"""Orbit averages, level seeding, and the entropy quadrature."""

import numpy as np
import pytest

import solmag as sm
from solmag import averaging, euler

S_REF = 0.6
F_TOP = 0.68  # max Casimir value at s = 0.6
PERIOD_TOL = 5e-3
ODD_TOL = 1e-6


def linear_period(s):
    # Small-oscillation period about the elliptic points for |s| < 1.
    return 2.0 * np.pi / np.sqrt(2.0 * (1.0 - s * s))


def test_detect_period_symmetric_level():
    rec = sm.detect_period(sm.seed_on_level(S_REF, 0.0), S_REF)
    assert rec.converged
    assert rec.period is not None and rec.period > 0.0
    assert abs(rec.nu_bar) <= 1e-6
    assert np.linalg.norm(rec.states[-1] - rec.states[0]) <= 1e-7


def test_detect_period_near_elliptic_matches_linearization():
    rec = sm.detect_period(sm.seed_on_level(S_REF, F_TOP - 1e-4), S_REF)
    assert rec.converged
    assert rec.period == pytest.approx(linear_period(S_REF), abs=PERIOD_TOL)


def test_detect_period_rejects_stationary_seed():
    p = sm.euler_point(0.6, np.sqrt(0.32), np.sqrt(0.32))
    with pytest.raises(ValueError, match="stationary orbit"):
        sm.detect_period(p, 0.6)


def test_detect_period_separatrix_falls_back():
    # The saddle level carries no closed orbit; the capped Birkhoff mean
    # is returned instead and flagged as such.
    p = sm.seed_on_level(S_REF, S_REF)
    assert sm.casimir(p, S_REF) == pytest.approx(S_REF, abs=1e-14)
    rec = sm.detect_period(p, S_REF)
    assert not rec.converged
    assert rec.period is None
    assert rec.nu_bar > 0.8


def test_detect_period_input_validation():
    p = sm.seed_on_level(0.6, 0.3)
    with pytest.raises(ValueError):
        sm.detect_period(np.array([0.5, 0.5, 0.0]), 0.6)  # off sphere
    with pytest.raises(ValueError):
        sm.detect_period(p, 0.6, h=0.5)
    with pytest.raises(ValueError):
        sm.detect_period(p, 0.6, t_max=-1.0)
    with pytest.raises(euler.NonFiniteStateError):
        sm.detect_period(np.array([np.nan, 1.0, 0.0]), 0.6)


def test_nu_bar_values_across_regimes():
    nb = sm.nu_bar_at(sm.seed_on_level(S_REF, F_TOP - 1e-4), S_REF)
    assert nb.converged and nb.nu_bar == pytest.approx(0.6, abs=1e-3)
    nb = sm.nu_bar_at(sm.seed_on_level(S_REF, 0.0), S_REF)
    assert nb.converged and abs(nb.nu_bar) <= 1e-6
    nb = sm.nu_bar_at(sm.seed_on_level(S_REF, S_REF - 1e-8), S_REF)
    assert nb.converged and nb.nu_bar > 0.8


def test_nu_bar_bounded_by_one():
    for s, f in [(0.6, 0.5), (0.6, -0.67), (2.0, 1.5), (-3.0, -2.0)]:
        nb = sm.nu_bar_at(sm.seed_on_level(s, f), s)
        assert abs(nb.nu_bar) <= 1.0 + 1e-9


@pytest.mark.parametrize("s,f", [
    (0.6, 0.3), (0.6, -0.3), (0.6, 0.65), (0.6, -0.65),
    (2.0, 1.2), (2.0, -1.8), (-0.7, 0.5), (0.0, 0.3), (0.0, -0.2),
])
def test_seed_on_level_hits_level(s, f):
    p = sm.seed_on_level(s, f)
    assert abs(np.linalg.norm(p) - 1.0) <= 1e-15
    assert sm.casimir(p, s) == pytest.approx(f, abs=5e-15)


def test_seed_on_level_longitudes():
    p = sm.seed_on_level(0.6, 0.3)        # low level: a1 = 0 longitude
    assert p[2] == 0.0 and p[1] > 0.0
    p = sm.seed_on_level(0.6, 0.65)       # cap above the saddle: a0 = a1
    assert p[1] == p[2] and p[1] > 0.0
    p = sm.seed_on_level(0.6, -0.65)      # cap below: a0 = -a1
    assert p[1] == -p[2] and p[1] > 0.0
    p = sm.seed_on_level(0.0, 0.0)
    np.testing.assert_allclose(p, [0.0, 1.0, 0.0])


def test_seed_on_level_rejects_empty_levels():
    for s, f in [(0.6, 0.68), (0.6, 0.7), (0.6, -0.68), (2.0, 2.0),
                 (2.0, -2.5), (0.6, np.nan)]:
        with pytest.raises(ValueError, match="empty level"):
            sm.seed_on_level(s, f)


def test_profile_margin_rejection():
    with pytest.raises(ValueError, match="within"):
        sm.nubar_profile(0.6, [0.6 + 1e-7])
    with pytest.raises(ValueError, match="empty level"):
        sm.nubar_profile(0.6, [0.7])


def test_profile_average_is_odd_in_the_level():
    fs = np.array([0.1, 0.3, 0.55])
    pos = sm.nubar_profile(S_REF, fs)
    neg = sm.nubar_profile(S_REF, -fs)
    for a, b in zip(pos, neg):
        assert a.converged and b.converged
        assert abs(a.nu_bar + b.nu_bar) <= ODD_TOL


def test_average_invariant_along_the_orbit():
    p0 = sm.seed_on_level(0.7, 0.3)
    ref = sm.nu_bar_at(p0, 0.7)
    assert ref.converged
    for t in (0.7, 1.3, 2.9):
        q = sm.integrate_orbit(p0, 0.7, t).states[-1]
        q = sm.euler_point(*q, normalize=True)
        nb = sm.nu_bar_at(q, 0.7)
        assert nb.converged
        assert abs(nb.nu_bar - ref.nu_bar) <= 1e-6


def test_unmagnetized_averages_vanish():
    # With s = 0 every closed orbit is symmetric under nu -> -nu.
    rng = np.random.default_rng(3)
    seen = 0
    while seen < 20:
        v = rng.standard_normal(3)
        p = v / np.linalg.norm(v)
        if abs(p[1] * p[2]) < 0.05:
            continue
        nb = sm.nu_bar_at(p, 0.0)
        assert nb.converged
        assert abs(nb.nu_bar) <= 1e-6
        seen += 1


def test_average_steepens_toward_the_separatrix():
    # The logarithmic period blow-up makes d(nu_bar)/df grow without
    # bound as the level approaches the saddle value.
    def g(d):
        return sm.nu_bar_at(sm.seed_on_level(S_REF, S_REF - d), S_REF).nu_bar

    slope_near = (g(1e-4) - g(2e-4)) / 1e-4
    slope_far = (g(1e-2) - g(2e-2)) / 1e-2
    assert slope_near > 0.0 and slope_far > 0.0
    assert slope_near / slope_far >= 5.0


def test_entropy_input_validation():
    with pytest.raises(ValueError, match="unmagnetized case excluded"):
        sm.entropy(0.0)
    with pytest.raises(ValueError, match="odd"):
        sm.entropy(0.5, n_nu=40, n_xi=8)
    with pytest.raises(ValueError, match="odd"):
        sm.entropy(0.5, n_nu=1, n_xi=8)
    with pytest.raises(ValueError, match="n_xi"):
        sm.entropy(0.5, n_nu=21, n_xi=3)


def test_entropy_thread_count_does_not_change_bytes():
    a = sm.entropy(0.7, n_nu=31, n_xi=8, threads=1)
    b = sm.entropy(0.7, n_nu=31, n_xi=8, threads=3)
    assert a.value == b.value
    assert a.fallback_fraction == b.fallback_fraction


def test_entropy_metadata_and_bounds():
    res = sm.entropy(2.0, n_nu=21, n_xi=8)
    assert res.s == 2.0
    assert res.grid == (21, 8)
    assert 0.0 <= res.value <= 0.5 + 1e-6
    assert res.fallback_fraction == 0.0  # no separatrix for |s| > 1


def test_entropy_bound_at_reference_grid(entropy_cached):
    for s in (0.5, 2.0):
        res = entropy_cached(s)
        assert 0.0 <= res.value <= 0.5 + 1e-6
        assert 0.0 <= res.fallback_fraction <= 1.0


def test_entropy_grid_refinement(entropy_cached):
    # Doubling both quadrature directions moves the value by less than
    # the advertised discretization budget.
    coarse = entropy_cached(0.6, n_nu=201, n_xi=64).value
    fine = entropy_cached(0.6, n_nu=401, n_xi=128).value
    assert abs(coarse - fine) <= 5e-3


def test_entropy_curve_preserves_order():
    out = sm.entropy_curve([2.0, 0.5], n_nu=21, n_xi=8)
    assert [r.s for r in out] == [2.0, 0.5]
    assert all(r.grid == (21, 8) for r in out)
    assert out[0].value > out[1].value  # entropy grows with intensity

"""
Phase portrait of the reduced momentum flow on the unit sphere
==============================================================

The reduced dynamics conserves a twisted Casimir f = s*nu + a0*a1, so
every orbit traces a level curve of f on the sphere.  This script
classifies the critical points for a weak and a strong intensity,
integrates a fan of orbits seeded across the Casimir range, and saves a
(nu, a0) projection of the portrait plus the raw samples.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import solmag as sm

OUT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")
os.makedirs(OUT_DIR, exist_ok=True)

for s in (0.6, 2.0):
    report = sm.classify_critical_points(s)
    print(f"s = {s}: critical points of the Casimir on the sphere")
    for c in report.points:
        nu, a0, a1 = c.point
        print(f"  {c.kind:<15} at ({nu:+.3f}, {a0:+.3f}, {a1:+.3f})"
              f"  f = {c.f_value:+.3f}")

    fmin, fmax = sm.casimir_range(s)
    levels = np.linspace(fmin, fmax, 13)[1:-1]  # skip the extreme caps
    fig, ax = plt.subplots(figsize=(6, 6))
    rows = []
    for f in levels:
        if any(abs(f - c) < 5e-3 for c in sm.separatrix_values(s)):
            continue  # the saddle level has no closed orbit
        rec = sm.detect_period(sm.seed_on_level(s, f), s)
        ax.plot(rec.states[:, 0], rec.states[:, 1], lw=0.8,
                color=plt.cm.viridis((f - fmin) / (fmax - fmin)))
        for t, (nu, a0, a1) in zip(rec.times[::50], rec.states[::50]):
            rows.append((f, t, nu, a0, a1))
        print(f"  level f = {f:+.3f}: period {rec.period:7.3f},"
              f" nu_bar {rec.nu_bar:+.4f}")

    crit = np.array([c.point for c in report.points])
    ax.plot(crit[:, 0], crit[:, 1], "k.", ms=8)
    ax.set_xlabel("nu")
    ax.set_ylabel("a0")
    ax.set_title(f"closed orbits of the reduced flow, s = {s:g}")
    ax.set_aspect("equal")
    fig.tight_layout()
    png = os.path.join(OUT_DIR, f"sphere_portrait_s{s:g}.png")
    fig.savefig(png, dpi=130)
    plt.close(fig)

    csv = os.path.join(OUT_DIR, f"sphere_portrait_s{s:g}.csv")
    np.savetxt(csv, np.asarray(rows), delimiter=",", comments="",
               header="f,t,nu,a0,a1")
    print(f"  wrote {png} and {csv}\n")

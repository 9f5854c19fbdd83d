"""
Exact-arithmetic tour of the displacement toolkit
=================================================

Everything here runs over the rationals: second Betti numbers of the
built-in solvable families, kernels of the bracket map with certified
decomposable generating sets, and the dichotomy that drives the
displacement argument -- a 2-form either has an exact primitive or pairs
nontrivially with a commuting pair, never both.
"""

from fractions import Fraction

import solmag as sm
from solmag import liealg

# --- Betti numbers of the built-in families --------------------------------
print("second Betti numbers (exact):")
families = [("heisenberg", (1, 2, 3, 4)), ("g2n1", (1, 2, 3, 4)),
            ("upper_triangular", (2, 3, 4, 5))]
for name, sizes in families:
    vals = [sm.ce_b2(sm.builtin_algebra(name, n)) for n in sizes]
    print(f"  {name:<17} n = {sizes}: b2 = {vals}")
for name in ("sol", "sol_x_r"):
    print(f"  {name:<17} b2 = {sm.ce_b2(sm.builtin_algebra(name))}")

# --- kernels of the bracket map and their certificates ----------------------
print("\nkernel of the bracket map, with generation certificates:")
for name, n in [("heisenberg", 3), ("g2n1", 3), ("upper_triangular", 4),
                ("sol_x_r", None)]:
    alg = sm.builtin_algebra(name, n)
    cert = sm.verify_decomposable_generation(alg)
    print(f"  {alg.name:<20} dim Ker = {cert.kernel_dim:3d}, "
          f"decomposable span rank = {cert.span_rank:3d}, "
          f"generates: {'yes' if cert.ok else 'no'}")

# --- the dichotomy in action -------------------------------------------------
print("\nthe exactness/displacement dichotomy on sol:")
sol = sm.builtin_algebra("sol")
for label, items in [("area form on the commuting plane", [(0, 1, 1)]),
                     ("mixed vertical form", [(0, 2, 1), (1, 2, -2)])]:
    omega = liealg.TwoForm.from_entries(3, items)
    prim = sm.exact_primitive(sol, omega)
    pair = sm.find_displacing_pair(sol, omega)
    print(f"  {label}:")
    if prim is not None:
        coeffs = " ".join(str(c) for c in prim)
        print(f"    exact, primitive coefficients ({coeffs})")
    else:
        print("    not exact")
    if pair is not None:
        x, y = pair
        names = sol.basis_names
        fmt = lambda v: " + ".join(n for n, c in zip(names, v) if c != 0)
        print(f"    displaced by the commuting pair ({fmt(x)}, {fmt(y)})")
    else:
        print("    no commuting pair sees it -- nothing to displace")

# A non-exact form on the five-dimensional Heisenberg algebra whose
# displacing pair must leave the basis.
h2 = sm.builtin_algebra("heisenberg", 2)
omega = liealg.TwoForm.from_entries(5, [(0, 2, Fraction(1))])
x, y = sm.find_displacing_pair(h2, omega)
names = h2.basis_names
fmt = lambda v: " + ".join(n for n, c in zip(names, v) if c != 0)
print("\non heisenberg(2), the dual of x1^y1 needs a diagonal pair:")
print(f"  x = {fmt(x)}")
print(f"  y = {fmt(y)}")
assert all(c == 0 for c in h2.bracket(x, y))
print("  [x, y] = 0  (the pair commutes)")
print(f"  omega(x, y) = {omega(x, y)}  (nonzero, so the pair displaces)")

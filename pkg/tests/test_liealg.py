"""Exact rational toolkit: brackets, kernels, cohomology, displacement."""

import itertools
import random
from fractions import Fraction

import pytest

import solmag as sm
from solmag import liealg
from solmag.liealg import TwoForm, TwoVector, wedge

F = Fraction

SL2_TEXT = "1 2 2 2\n1 3 3 -2\n2 3 1 1\n"  # [h,e]=2e, [h,f]=-2f, [e,f]=h


def comb2(n):
    return n * (n - 1) // 2


def induced_form(alg, b):
    """The 2-form b([., .]) of a covector b (entrywise on the basis)."""
    items = []
    for i, j in alg.pair_index():
        val = sum(F(c) * b[k] for k, c in alg.bracket_basis(i, j).items())
        items.append((i, j, val))
    return TwoForm.from_entries(alg.dim, items)


def random_form(alg, rng):
    items = [(i, j, F(rng.randint(-9, 9), rng.randint(1, 9)))
             for i, j in alg.pair_index()]
    return TwoForm.from_entries(alg.dim, items)


# ---------------------------------------------------------------------------
# Exact linear algebra.

def test_exact_rank_and_nullspace():
    assert liealg.exact_rank([[F(1), F(2)], [F(2), F(4)]]) == 1
    assert liealg.exact_rank([[F(0), F(0)]]) == 0
    ns = liealg.exact_nullspace([[F(1), F(2)], [F(2), F(4)]], 2)
    assert ns == [(F(-2), F(1))]
    assert liealg.exact_nullspace([[F(1), F(0)], [F(0), F(1)]], 2) == []
    zero = liealg.exact_nullspace([[F(0), F(0)]], 2)
    assert zero == [(F(1), F(0)), (F(0), F(1))]


def test_exact_solve():
    assert liealg.exact_solve([[F(1), F(1)], [F(0), F(1)]],
                              [F(3), F(1)]) == (F(2), F(1))
    assert liealg.exact_solve([[F(1), F(1)], [F(1), F(1)]],
                              [F(1), F(2)]) is None
    # Free variables are pinned to zero.
    assert liealg.exact_solve([[F(1), F(1)]], [F(2)]) == (F(2), F(0))
    assert liealg.exact_solve([[F(1), F(3)]], [F(1, 3)]) == (F(1, 3), F(0))


# ---------------------------------------------------------------------------
# Built-in algebras.

def test_heisenberg_structure():
    alg = sm.builtin_algebra("heisenberg", 1)
    assert alg.dim == 3
    assert alg.basis_names == ("x1", "y1", "z")
    assert alg.bracket_basis(0, 1) == {2: F(1)}
    assert alg.bracket_basis(1, 0) == {2: F(-1)}
    assert alg.bracket_basis(0, 2) == {}
    assert alg.is_solvable()


def test_g2n1_structure():
    alg = sm.builtin_algebra("g2n1", 2)
    assert alg.dim == 5
    assert alg.bracket_basis(4, 0) == {2: F(1)}   # [z, x1] = y1
    assert alg.bracket_basis(4, 1) == {3: F(1)}   # [z, x2] = y2
    assert alg.bracket_basis(0, 1) == {}
    assert alg.is_solvable()


def test_upper_triangular_structure():
    alg = sm.builtin_algebra("upper_triangular", 3)
    assert alg.dim == 3
    assert alg.basis_names == ("e12", "e13", "e23")
    assert alg.bracket_basis(0, 2) == {1: F(1)}   # [e12, e23] = e13
    assert alg.bracket_basis(0, 1) == {}
    assert alg.is_solvable()


def test_sol_structure():
    alg = sm.builtin_algebra("sol")
    assert alg.basis_names == ("X0", "X1", "U")
    assert alg.bracket_basis(2, 0) == {0: F(1)}   # [U, X0] = X0
    assert alg.bracket_basis(2, 1) == {1: F(-1)}  # [U, X1] = -X1
    assert alg.bracket_basis(0, 1) == {}
    assert alg.is_solvable()
    ext = sm.builtin_algebra("sol_x_r")
    assert ext.dim == 4 and ext.basis_names[3] == "T"
    assert ext.bracket_basis(0, 3) == {}


@pytest.mark.parametrize("name,n", [
    ("heisenberg", 0), ("heisenberg", 11), ("g2n1", 0), ("g2n1", 11),
    ("upper_triangular", 1), ("upper_triangular", 7), ("abelian", 22),
    ("nilpotent_mystery", 3),
])
def test_builtin_range_errors(name, n):
    with pytest.raises(ValueError):
        sm.builtin_algebra(name, n)


def test_family_requires_size():
    with pytest.raises(ValueError, match="size"):
        sm.builtin_algebra("heisenberg")


# ---------------------------------------------------------------------------
# Parsing structure constants.

def test_load_structure_constants_basic():
    text = "# sol in flat coordinates\n\n1 3 1 -1\n2 3 2 1\n"
    alg = sm.load_structure_constants(text)
    assert alg.dim == 3
    assert alg.bracket_basis(0, 2) == {0: F(-1)}
    assert alg.bracket_basis(1, 2) == {1: F(1)}
    assert sm.ce_b2(alg) == sm.ce_b2(sm.builtin_algebra("sol"))


def test_load_structure_constants_dim_and_fractions():
    alg = sm.load_structure_constants("1 2 3 -2/3\n", dim=4)
    assert alg.dim == 4
    assert alg.bracket_basis(0, 1) == {2: F(-2, 3)}
    assert sm.load_structure_constants("", dim=3).dim == 3


@pytest.mark.parametrize("text,msg", [
    ("1 2 3\n", "expected"),
    ("0 2 3 1\n", "1-based"),
    ("1 1 2 1\n", "itself"),
    ("1 2 3 x\n", "line 1"),
    ("1 2 3 1\n2 1 3 1\n", "conflicting"),
    ("", "no entries"),
])
def test_load_structure_constants_rejects(text, msg):
    with pytest.raises(ValueError, match=msg):
        sm.load_structure_constants(text)


def test_load_structure_constants_jacobi_failure():
    with pytest.raises(ValueError, match="Jacobi identity violated"):
        sm.load_structure_constants("1 2 3 1\n1 3 1 1\n")


def test_load_structure_constants_consistent_duplicate():
    alg = sm.load_structure_constants("1 2 3 1\n2 1 3 -1\n")
    assert alg.bracket_basis(0, 1) == {2: F(1)}


def test_load_warns_on_non_solvable():
    with pytest.warns(UserWarning, match="not solvable"):
        alg = sm.load_structure_constants(SL2_TEXT)
    assert not alg.is_solvable()


def test_load_structure_file_roundtrip(tmp_path):
    path = tmp_path / "alg.txt"
    path.write_text("# one comment\n1 2 3 1\n", encoding="utf-8")
    alg = sm.load_structure_file(path)
    assert alg.dim == 3
    assert alg.bracket_basis(0, 1) == {2: F(1)}
    assert alg.name == str(path)


# ---------------------------------------------------------------------------
# Wedge objects.

def test_two_vector_validation():
    with pytest.raises(ValueError, match="reproduce"):
        TwoVector(dim=3, coords=(F(1), F(0), F(0)),
                  factors=((F(1), F(0), F(0)), (F(0), F(0), F(1))))
    with pytest.raises(ValueError, match="length"):
        TwoVector(dim=3, coords=(F(1), F(0)))
    assert TwoVector(dim=3, coords=(F(0),) * 3).is_zero()
    assert not wedge(3, (1, 0, 0), (0, 1, 0)).is_zero()


def test_two_form_validation_and_pairing():
    with pytest.raises(ValueError, match="antisymmetric"):
        TwoForm(dim=2, entries=((F(0), F(1)), (F(1), F(0))))
    with pytest.raises(ValueError, match="diagonal"):
        TwoForm.from_entries(2, [(0, 0, 1)])
    with pytest.raises(ValueError, match="shape"):
        TwoForm(dim=3, entries=((F(0),),))
    rng = random.Random(11)
    omega = TwoForm.from_entries(
        4, [(i, j, F(rng.randint(-5, 5))) for i, j
            in itertools.combinations(range(4), 2)])
    for _ in range(10):
        x = tuple(F(rng.randint(-4, 4)) for _ in range(4))
        y = tuple(F(rng.randint(-4, 4)) for _ in range(4))
        assert omega.pair_with(wedge(4, x, y)) == omega(x, y)


# ---------------------------------------------------------------------------
# Bracket map and kernel.

def test_bracket_map_examples():
    h1 = sm.builtin_algebra("heisenberg", 1)
    assert liealg.exact_rank(sm.bracket_map(h1)) == 1
    assert liealg.exact_rank(sm.bracket_map(sm.builtin_algebra("abelian", 4))) == 0
    sol = sm.builtin_algebra("sol")
    assert liealg.exact_rank(sm.bracket_map(sol)) == 2
    ker = sm.kernel_L(sol)
    assert len(ker) == 1
    assert ker[0].coords == (F(1), F(0), F(0))  # X0 ^ X1


@pytest.mark.parametrize("name,n,expected", [
    ("heisenberg", 1, 2), ("heisenberg", 2, 9), ("heisenberg", 3, 20),
    ("g2n1", 2, 8), ("g2n1", 3, 18),
    ("upper_triangular", 3, 2), ("upper_triangular", 4, 12),
    ("sol", None, 1), ("sol_x_r", None, 4), ("abelian", 6, 15),
])
def test_kernel_dimensions(name, n, expected):
    alg = sm.builtin_algebra(name, n)
    assert len(sm.kernel_L(alg)) == expected


def test_rank_nullity_duality():
    for alg in (sm.builtin_algebra("heisenberg", 2),
                sm.builtin_algebra("g2n1", 2),
                sm.builtin_algebra("upper_triangular", 4),
                sm.builtin_algebra("sol_x_r")):
        rank = liealg.exact_rank(sm.bracket_map(alg))
        assert rank + len(sm.kernel_L(alg)) == comb2(alg.dim)


# ---------------------------------------------------------------------------
# Generation certificates.

@pytest.mark.parametrize("name,n", [
    ("heisenberg", 2), ("heisenberg", 3), ("heisenberg", 4),
    ("g2n1", 2), ("g2n1", 3),
    ("upper_triangular", 2), ("upper_triangular", 3),
    ("upper_triangular", 4), ("upper_triangular", 5),
    ("sol", None), ("sol_x_r", None), ("abelian", 5),
])
def test_builtin_generators_certified(name, n):
    alg = sm.builtin_algebra(name, n)
    cert = sm.verify_decomposable_generation(alg)
    assert cert.ok and bool(cert)
    assert cert.span_rank == cert.kernel_dim
    assert cert.failures == []


def test_certificate_catches_short_span():
    alg = sm.builtin_algebra("heisenberg", 2)
    gens = sm.kernel_generators(alg)
    # The mixed-diagonal generator is the only one meeting x_i ^ y_i.
    pos = liealg.pair_position(alg.dim)
    short = [tv for tv in gens if tv.coords[pos[(1, 3)]] == 0]
    assert len(short) == len(gens) - 1
    cert = sm.verify_decomposable_generation(alg, candidates=short)
    assert not cert.ok
    assert cert.span_rank == cert.kernel_dim - 1
    assert cert.failures == []


def test_certificate_catches_bad_candidates():
    alg = sm.builtin_algebra("heisenberg", 2)
    bad = wedge(alg.dim, alg.basis_vector(0), alg.basis_vector(2))  # [x1,y1]=z
    cert = sm.verify_decomposable_generation(alg, candidates=[bad])
    reasons = {msg for _, msg in cert.failures}
    assert "factors do not commute" in reasons
    assert "candidate is not in the kernel" in reasons
    bare = TwoVector(dim=alg.dim, coords=(F(0),) * comb2(alg.dim))
    cert = sm.verify_decomposable_generation(alg, candidates=[bare])
    assert cert.failures == [(0, "candidate has no decomposition")]


def test_certificate_requires_known_set():
    user = sm.load_structure_constants("1 2 3 1\n", dim=3, name="user-h1")
    assert sm.kernel_generators(user) is None
    with pytest.raises(ValueError, match="no built-in generating set"):
        sm.verify_decomposable_generation(user)


# ---------------------------------------------------------------------------
# Exactness and the second Betti number.

def test_exact_primitive_heisenberg():
    alg = sm.builtin_algebra("heisenberg", 1)
    omega = TwoForm.from_entries(3, [(0, 1, 1)])
    assert sm.exact_primitive(alg, omega) == (F(0), F(0), F(1))


def test_exact_primitive_residual_identity():
    rng = random.Random(6)
    for alg in (sm.builtin_algebra("heisenberg", 2),
                sm.builtin_algebra("upper_triangular", 4),
                sm.builtin_algebra("sol")):
        for _ in range(5):
            b = [F(rng.randint(-9, 9), rng.randint(1, 9))
                 for _ in range(alg.dim)]
            omega = induced_form(alg, b)
            prim = sm.exact_primitive(alg, omega)
            assert prim is not None
            assert induced_form(alg, prim).entries == omega.entries


def test_exact_primitive_obstructions():
    sol = sm.builtin_algebra("sol")
    omega = TwoForm.from_entries(3, [(0, 1, 1)])  # dual of X0 ^ X1
    assert sm.exact_primitive(sol, omega) is None
    ab = sm.builtin_algebra("abelian", 3)
    assert sm.exact_primitive(ab, TwoForm.from_entries(3, [(0, 1, 1)])) is None
    zero = TwoForm.from_entries(3, [])
    assert sm.exact_primitive(ab, zero) == (F(0),) * 3
    assert sm.exact_primitive(sm.builtin_algebra("abelian", 1),
                              TwoForm(dim=1, entries=((F(0),),))) == (F(0),)


@pytest.mark.parametrize("name,n,expected", [
    ("heisenberg", 1, 2), ("heisenberg", 2, 5), ("heisenberg", 3, 14),
    ("g2n1", 1, 2), ("g2n1", 2, 6), ("g2n1", 3, 12),
    ("upper_triangular", 2, 0), ("upper_triangular", 3, 2),
    ("upper_triangular", 4, 5),
    ("sol", None, 1), ("sol_x_r", None, 2),
])
def test_second_betti_numbers(name, n, expected):
    assert sm.ce_b2(sm.builtin_algebra(name, n)) == expected


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_second_betti_abelian(n):
    assert sm.ce_b2(sm.builtin_algebra("abelian", n)) == comb2(n)


# ---------------------------------------------------------------------------
# Displacing pairs and the exactness dichotomy.

def test_find_displacing_pair_examples():
    sol = sm.builtin_algebra("sol")
    omega = TwoForm.from_entries(3, [(0, 1, 1)])
    pair = sm.find_displacing_pair(sol, omega)
    assert pair == (sol.basis_vector(0), sol.basis_vector(1))
    exact = TwoForm.from_entries(3, [(0, 2, 1)])  # has a primitive
    assert sm.find_displacing_pair(sol, exact) is None
    h1 = sm.builtin_algebra("heisenberg", 1)
    assert sm.find_displacing_pair(
        h1, TwoForm.from_entries(3, [(0, 1, 1)])) is None


def test_displacing_pair_from_mixed_generator():
    # x1* ^ y1* pairs to zero with every commuting basis pair, so the
    # displacing pair must come from the mixed diagonal generator.
    alg = sm.builtin_algebra("heisenberg", 2)
    omega = TwoForm.from_entries(5, [(0, 2, 1)])
    assert sm.exact_primitive(alg, omega) is None
    pair = sm.find_displacing_pair(alg, omega)
    assert pair is not None
    x, y = pair
    assert any(c != 0 for c in x[alg.dim // 2:])  # not a bare basis pair
    assert all(c == 0 for c in alg.bracket(x, y))
    assert omega(x, y) != 0
    # The balanced combination is exact and therefore displaces nothing.
    balanced = TwoForm.from_entries(5, [(0, 2, 1), (1, 3, 1)])
    assert sm.exact_primitive(alg, balanced) is not None
    assert sm.find_displacing_pair(alg, balanced) is None


@pytest.mark.parametrize("name,n", [
    ("heisenberg", 2), ("sol", None), ("sol_x_r", None),
    ("upper_triangular", 3), ("g2n1", 2),
])
def test_displacement_iff_not_exact(name, n):
    # For a spanning decomposable kernel set, a displacing commuting
    # pair exists exactly when the form has no primitive.
    alg = sm.builtin_algebra(name, n)
    rng = random.Random(12)
    for _ in range(20):
        omega = random_form(alg, rng)
        pair = sm.find_displacing_pair(alg, omega)
        prim = sm.exact_primitive(alg, omega)
        assert (pair is None) == (prim is not None)
        if pair is not None:
            x, y = pair
            assert all(c == 0 for c in alg.bracket(x, y))
            assert omega(x, y) != 0


def test_basis_rescaling_invariance():
    # Diagonal rescalings e_i -> d_i e_i change nothing structural:
    # b2, the kernel dimension, and exactness of correspondingly
    # rescaled forms are preserved.
    rng = random.Random(5)
    for name, n in [("heisenberg", 2), ("sol", None), ("upper_triangular", 3)]:
        alg = sm.builtin_algebra(name, n)
        d = [F(rng.randint(1, 7), rng.randint(1, 7)) for _ in range(alg.dim)]
        br = {}
        for (i, j), comp in alg.brackets.items():
            br[(i, j)] = {k: c * d[i] * d[j] / d[k] for k, c in comp.items()}
        scaled = liealg.LieAlgebra(name=f"{alg.name}-scaled", dim=alg.dim,
                                   basis_names=alg.basis_names, brackets=br)
        assert sm.ce_b2(scaled) == sm.ce_b2(alg)
        assert len(sm.kernel_L(scaled)) == len(sm.kernel_L(alg))
        for _ in range(5):
            omega = random_form(alg, rng)
            scaled_omega = TwoForm.from_entries(
                alg.dim, [(i, j, omega.entries[i][j] * d[i] * d[j])
                          for i, j in alg.pair_index()])
            assert (sm.exact_primitive(alg, omega) is None) == \
                (sm.exact_primitive(scaled, scaled_omega) is None)

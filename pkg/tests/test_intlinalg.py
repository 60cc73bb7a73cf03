import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cuspcert.intlinalg import (
    IntMatrix,
    Lattice,
    LatticeSolver,
    determinant,
    hermite_normal_form,
    integer_kernel,
    invariant_factors,
    rational_inverse,
    smith_normal_form,
    solve_in_lattice,
    unimodular_inverse,
)
from cuspcert.weyl import coxeter_element


def cofactor_det(rows):
    # independent oracle: Laplace expansion along the first row
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def square(n, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


matrices = st.integers(1, 5).flatmap(square)


def rect(max_dim=4):
    return st.tuples(st.integers(1, max_dim), st.integers(1, max_dim)).flatmap(
        lambda mn: st.lists(st.lists(st.integers(-6, 6), min_size=mn[1], max_size=mn[1]),
                            min_size=mn[0], max_size=mn[0])
    )


# -- determinant -------------------------------------------------------------

def test_determinant_small():
    assert determinant(IntMatrix.identity(3)) == 1
    assert determinant(IntMatrix.diag([2, 3])) == 6
    assert determinant(IntMatrix([[0, 1], [1, 0]])) == -1


@given(matrices)
@settings(max_examples=150)
def test_determinant_matches_cofactor_expansion(rows):
    assert determinant(IntMatrix(rows)) == cofactor_det(rows)


@pytest.mark.parametrize("n", range(2, 10))
@pytest.mark.parametrize("q", [2, 3, 32])
def test_b_coxeter_determinant(n, q):
    W = coxeter_element("B", n).matrix()
    M = W.scale(q) - IntMatrix.identity(n)
    d = determinant(M)
    assert abs(d) == q ** n + 1
    if n <= 7:
        assert d == cofactor_det(M.tolist())


def test_large_entries_stay_exact():
    q, n = 32, 9
    M = coxeter_element("B", n).matrix().scale(q) - IntMatrix.identity(n)
    assert abs(determinant(M)) == 32 ** 9 + 1
    assert invariant_factors(M)[-1] == 32 ** 9 + 1


# -- Smith normal form -------------------------------------------------------

def check_smith(M):
    dec = smith_normal_form(M)
    D = dec.U @ M @ dec.V
    assert D == dec.diagonal_matrix(M.nrows, M.ncols)
    assert abs(determinant(dec.U)) == 1
    assert abs(determinant(dec.V)) == 1
    d = list(dec.d)
    nz = [x for x in d if x]
    assert d[: len(nz)] == nz  # zeros at the tail
    assert all(x > 0 for x in nz)
    for a, b in zip(d, d[1:]):
        if a:
            assert b % a == 0
    return dec


def test_smith_examples():
    assert smith_normal_form(IntMatrix.identity(2)).d == (1, 1)
    assert smith_normal_form(IntMatrix.diag([2, 3])).d == (1, 6)
    W = coxeter_element("B", 2).matrix()
    assert W.tolist() == [[0, -1], [1, 0]]
    M = W.scale(2) - IntMatrix.identity(2)
    assert check_smith(M).d == (1, 5)


def test_b2_index_five_exhaustive():
    # the image of M is the set of integer points x with M^-1 x integral; count a fundamental box
    M = coxeter_element("B", 2).matrix().scale(2) - IntMatrix.identity(2)
    assert abs(cofactor_det(M.tolist())) == 5
    inv = rational_inverse(M)
    hits = sum(
        all((inv[i][0] * a + inv[i][1] * b).denominator == 1 for i in range(2))
        for a, b in itertools.product(range(5), repeat=2)
    )
    assert 25 // hits == 5


@given(rect())
@settings(max_examples=150)
def test_smith_properties(rows):
    check_smith(IntMatrix(rows))


@given(rect())
@settings(max_examples=80)
def test_smith_agrees_with_sympy(rows):
    mine = [x for x in smith_normal_form(IntMatrix(rows)).d]
    ref = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    theirs = [abs(int(ref[i, i])) for i in range(min(ref.shape))]
    assert mine == theirs


@given(matrices)
@settings(max_examples=100)
def test_invariant_product_is_abs_det(rows):
    M = IntMatrix(rows)
    det = determinant(M)
    prod = 1
    for d in smith_normal_form(M).d:
        prod *= d
    assert prod == abs(det)


@given(st.lists(st.integers(0, 30), min_size=1, max_size=5))
def test_smith_idempotent_on_its_output(entries):
    d = smith_normal_form(IntMatrix.diag(entries)).d
    assert smith_normal_form(IntMatrix.diag(d)).d == d


# -- Hermite form and lattice solving ----------------------------------------

@given(rect())
@settings(max_examples=100)
def test_hermite_normal_form_shape(rows):
    M = IntMatrix(rows)
    H, W = hermite_normal_form(M)
    assert M @ W == H
    assert abs(determinant(W)) == 1
    # column echelon: each nonzero column's leading row is strictly below the previous one
    leads = []
    for j in range(H.ncols):
        col = H.column(j)
        nz = [i for i, x in enumerate(col) if x]
        if not nz:
            assert all(not any(H.column(k)) for k in range(j, H.ncols))
            break
        leads.append(nz[0])
    assert leads == sorted(set(leads))


def rational_solve_in_basis(M, v, L):
    """Oracle: exact rational solve of ``M B c = v`` (B the lattice basis), then integrality of ``c``.

    Only used when ``M B`` has full column rank, so a solution is unique if it exists.
    """
    A = sympy.Matrix((M @ L.basis).tolist())
    try:
        sol, _ = A.gauss_jordan_solve(sympy.Matrix(v))
    except ValueError:
        return False
    return all(x.is_integer for x in sol)


def test_solve_in_lattice_examples():
    L = Lattice.standard(3)
    M = IntMatrix([[2, 1, 0], [0, 3, 1], [1, 0, 4]])
    assert solve_in_lattice(M, (0, 0, 0), L) == (0, 0, 0)
    x = solve_in_lattice(M, M.column(0), L)
    assert x is not None and M.apply(x) == M.column(0)


@pytest.mark.parametrize("n", range(2, 8))
@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_b_coxeter_minus_two_e1_has_no_solution(n, q):
    # -q x_n - x_1 = -2 with x_r = q x_{r-1} - 0 forces -(1 + q^n) x_1 = -2
    M = coxeter_element("B", n).matrix().scale(q) - IntMatrix.identity(n)
    v = (-2,) + (0,) * (n - 1)
    assert solve_in_lattice(M, v, Lattice.standard(n)) is None
    assert not rational_solve_in_basis(M, v, Lattice.standard(n))


def _group_matrix(kind, perm, signs):
    # signed permutations stabilize the even lattice, plain permutations the sum-zero one
    if kind != "even":
        signs = (1, 1, 1) if kind == "sum0" else signs
    rows = [[0] * 3 for _ in range(3)]
    for i, (p, s) in enumerate(zip(perm, signs)):
        rows[p][i] = s
    return rows


lattice_cases = st.sampled_from(["Z", "even", "sum0"]).flatmap(
    lambda kind: st.tuples(
        st.just(kind),
        st.lists(
            st.tuples(st.integers(-4, 4), st.permutations(range(3)), st.tuples(*[st.sampled_from((1, -1))] * 3)),
            min_size=1,
            max_size=3,
        ).map(lambda terms: [
            [sum(c * _group_matrix(kind, p, sg)[i][j] for c, p, sg in terms) for j in range(3)] for i in range(3)
        ]),
        st.lists(st.integers(-6, 6), min_size=3, max_size=3),
    )
)


def make_lattice(kind):
    if kind == "Z":
        return Lattice.standard(3)
    if kind == "even":
        return Lattice(IntMatrix.from_columns([(1, -1, 0), (0, 1, -1), (0, 1, 1)]), "even")
    return Lattice(IntMatrix.from_columns([(1, -1, 0), (0, 1, -1)]), "sum0")


@given(lattice_cases)
@settings(max_examples=200)
def test_solve_in_lattice_matches_rational_oracle(case):
    kind, rows, v = case
    L = make_lattice(kind)
    M = IntMatrix(rows)
    assert _stabilizes(M, L)
    assume(_rank_of(M @ L.basis) == L.rank)
    if kind == "sum0":
        v = (v[0], v[1], -v[0] - v[1])
    x = solve_in_lattice(M, v, L)
    if x is not None:
        assert x in L and M.apply(x) == tuple(v)
    assert (x is not None) == rational_solve_in_basis(M, v, L)


def _stabilizes(M, L):
    return all(M.apply(b) in L for b in L.basis.columns())


def _rank_of(M):
    return sympy.Matrix(M.tolist()).rank()


@given(lattice_cases)
@settings(max_examples=100)
def test_constructed_members_are_solved(case):
    kind, rows, c = case
    L = make_lattice(kind)
    M = IntMatrix(rows)
    assert _stabilizes(M, L)
    x = L.to_ambient(c[: L.rank])
    v = M.apply(x)
    y = solve_in_lattice(M, v, L)
    assert y is not None and M.apply(y) == v and y in L


def test_lattice_solver_rejects_targets_outside_the_lattice():
    L = make_lattice("even")
    solver = LatticeSolver(IntMatrix.identity(3), L)
    assert solver.solve((1, 1, 0)) == (1, 1, 0)
    assert solver.solve((1, 0, 0)) is None


def test_lattice_membership_and_restrict():
    L = make_lattice("even")
    assert (1, 1, 0) in L and (1, 0, 0) not in L
    assert L.index_in_ambient() == 2
    flip = IntMatrix.diag([1, 1, -1])
    R = L.restrict(flip)
    assert L.basis @ R == flip @ L.basis
    with pytest.raises(ValueError):
        L.restrict(IntMatrix.diag([1, 0, 0]))


def test_unimodular_inverse_roundtrip():
    U = IntMatrix([[2, 1, 0], [1, 1, 0], [0, 3, 1]])
    assert U @ unimodular_inverse(U) == IntMatrix.identity(3)
    assert rational_inverse(IntMatrix.diag([2, 4]))[1][1] == Fraction(1, 4)


def test_integer_kernel():
    M = IntMatrix([[1, 1, 1, -1]])
    K = integer_kernel(M)
    assert len(K) == 3
    for k in K:
        assert M.apply(k) == (0,)
    assert integer_kernel(IntMatrix.identity(2)) == []

import numpy as np
import pytest

from cuspcert.intlinalg import IntMatrix, Lattice, determinant, smith_normal_form
from cuspcert.torus import (
    FAMILIES,
    MIN_RANK,
    build_family,
    character_group,
    describe,
    evaluate_polynomial,
    fixed_sublattice,
    is_anisotropic,
    is_prime_power,
    order_polynomial,
    torus_order,
    twist,
)
from cuspcert.weyl import SignedPermutation as S, coxeter_element, twisted_conjugacy_classes


def test_prime_powers():
    assert [q for q in range(1, 33) if is_prime_power(q)] == [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32
    ]
    with pytest.raises(ValueError):
        twist(build_family("B", 2), S.identity(2), 6)


@pytest.mark.parametrize("family", FAMILIES)
def test_lattice_shapes(family):
    rank = MIN_RANK[family] + 1
    spec = build_family(family, rank)
    n = spec.ambient_dim
    L = spec.lattice
    e = lambda i: tuple(int(j == i) for j in range(n))
    if family in ("A", "2A"):
        assert L.rank == n - 1 and (1,) + (0,) * (n - 1) not in L
        assert tuple(1 if i == 0 else (-1 if i == n - 1 else 0) for i in range(n)) in L
    elif family == "B":
        assert L.rank == n and L.index_in_ambient() == 1
    else:
        assert L.rank == n and L.index_in_ambient() == 2
        assert e(0) not in L and tuple(2 * x for x in e(0)) in L


def test_family_examples():
    C2 = build_family("C", 2)
    assert C2.lattice.basis.columns() == [(1, -1), (0, 2)]
    A1 = build_family("A", 1)
    assert A1.lattice.basis.columns() == [(1, -1)]
    D = build_family("2D", 3)
    assert D.ambient_dim == 4 and D.F0 == S.sign_flip(4, 4)
    assert build_family("2A", 3).F0 == S.minus_identity(4)
    with pytest.raises(ValueError):
        build_family("D", 3)
    with pytest.raises(ValueError):
        build_family("E", 6)


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("C", 2), ("D", 4)])
@pytest.mark.parametrize("q", [2, 5])
def test_identity_twist_is_split(family, rank, q):
    spec = build_family(family, rank)
    T = twist(spec, S.identity(spec.ambient_dim), q)
    assert T.M == IntMatrix.identity(rank).scale(q - 1)
    assert not is_anisotropic(T)
    assert torus_order(T) == (q - 1) ** rank
    cg = character_group(T)
    assert cg.moduli == ((q - 1,) * rank if q > 2 else ())


@pytest.mark.parametrize("n", [2, 3, 5])
def test_b_coxeter_linear_system(n):
    # (qW - 1)x has first coordinate -q x_n - x_1 and then q x_{r-1} - x_r
    q = 3
    T = twist(build_family("B", n), coxeter_element("B", n), q)
    x = tuple(range(2, n + 2))
    y = T.ambient_matrix.apply(x)
    assert y[0] == -q * x[-1] - x[0]
    assert all(y[r] == q * x[r - 1] - x[r] for r in range(1, n))


def test_unitary_frobenius_action():
    n, q = 5, 4
    T = twist(build_family("2A", n - 1), S.cycle(range(1, n + 1), n), q)
    x = (1, 2, 3, 4, 5)
    assert T.geom_frob(x) == (-5, -1, -2, -3, -4)
    assert T.rel_frob.apply(x) == tuple(q * c for c in (-5, -1, -2, -3, -4))


def test_unitary_one_dimensional_sanity():
    # U_1(k) = kernel of the norm to k, of order q + 1; here as the rank-one piece of 2A
    for q in (2, 3, 4, 7):
        T = twist(build_family("2A", 2), S.identity(3), q)
        assert torus_order(T) == (q + 1) ** 2


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("q", [2, 3, 7, 32])
def test_coxeter_torus_orders(n, q):
    B = twist(build_family("B", n), coxeter_element("B", n), q)
    assert is_anisotropic(B)
    assert torus_order(B) == q ** n + 1
    A = twist(build_family("A", n), coxeter_element("A", n), q)
    assert torus_order(A) == (q ** (n + 1) - 1) // (q - 1)
    assert abs(determinant(A.M)) == torus_order(A)


def test_b2_character_group():
    T = twist(build_family("B", 2), coxeter_element("B", 2), 2)
    cg = character_group(T)
    assert cg.order == 5 and cg.moduli == (5,)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_displayed_d_map_is_isotropic(n):
    w = S.from_signed_images(list(range(2, n)) + [-n, -1])
    T = twist(build_family("D", n), w, 2)
    assert not is_anisotropic(T)
    fixed = fixed_sublattice(T)
    assert len(fixed) == 1
    target = (2,) * (n - 1) + (-2,)
    assert T.geom_frob(target) == target
    span = Lattice(IntMatrix.from_columns(fixed))
    assert target in span
    # the true Coxeter element is anisotropic
    assert is_anisotropic(twist(build_family("D", n), coxeter_element("D", n), 2))


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("D", 4), ("2A", 3), ("2D", 3)])
@pytest.mark.parametrize("q", [2, 3, 4])
def test_order_is_product_of_invariant_factors(family, rank, q):
    spec = build_family(family, rank)
    for cls in twisted_conjugacy_classes(spec.weyl, spec.F0).classes:
        T = twist(spec, cls.representative, q)
        cg = character_group(T)
        assert cg.order == torus_order(T)
        assert evaluate_polynomial(order_polynomial(spec, cls.representative), q) == torus_order(T)


@pytest.mark.parametrize("family,rank", [("B", 3), ("D", 4), ("2D", 3), ("2A", 3)])
def test_anisotropy_is_a_class_invariant(family, rank):
    spec = build_family(family, rank)
    W = spec.weyl.elements()
    rng = np.random.default_rng(0)
    F0 = spec.F0
    for cls in twisted_conjugacy_classes(spec.weyl, F0).classes:
        w = cls.representative
        base = is_anisotropic(twist(spec, w, 2))
        for i in rng.integers(len(W), size=5):
            x = W[i]
            w2 = x * w * F0 * x.inverse() * F0.inverse()
            assert is_anisotropic(twist(spec, w2, 2)) == base


def test_invariant_factors_independent_of_basis():
    spec = build_family("C", 3)
    T = twist(spec, coxeter_element("C", 3), 3)
    U = IntMatrix([[1, 2, 0], [0, 1, 0], [3, 0, 1]])
    rebased = Lattice(spec.lattice.basis @ U)
    M2 = rebased.restrict(T.ambient_matrix)
    assert smith_normal_form(M2).d == character_group(T).invariant_factors


@pytest.mark.parametrize("family,rank", [("A", 2), ("B", 3), ("C", 3), ("D", 4)])
def test_projection_is_equivariant(family, rank):
    spec = build_family(family, rank)
    T = twist(spec, coxeter_element(family, rank), 3)
    cg = character_group(T)
    w = T.w
    A = cg.action_matrix(w)
    mod = np.array(cg.moduli)
    for v in spec.lattice.basis.columns():
        lhs = np.array(cg.project(w(v)))
        rhs = (A @ np.array(cg.project(v))) % mod
        assert np.array_equal(lhs, rhs)


def test_projection_kernel_and_lift():
    spec = build_family("C", 3)
    T = twist(spec, coxeter_element("C", 3), 2)
    cg = character_group(T)
    zero = tuple(0 for _ in cg.moduli)
    for b in spec.lattice.basis.columns():
        assert cg.project(T.ambient_matrix.apply(b)) == zero
    for y in cg.elements():
        y = tuple(int(c) for c in y)
        assert cg.project(cg.lift(y)) == y
    assert len({tuple(y) for y in cg.elements()}) == cg.order


def test_order_polynomials():
    spec = build_family("B", 3)
    assert order_polynomial(spec, coxeter_element("B", 3)) == [1, 0, 0, 1]
    spec = build_family("2A", 2)
    assert order_polynomial(spec, S.cycle([1, 2, 3], 3)) == [1, -1, 1]


def test_describe():
    T = twist(build_family("B", 3), coxeter_element("B", 3), 2)
    d = describe(T, (1, 0, 0))
    assert d["torus_order"] == 9 and d["anisotropic"] and d["invariant_factors"] == [1, 1, 9]
    assert len(d["projection"]) == 1

"""Maximal tori of the classical adjoint groups, described on character lattices.

A family fixes the ambient ``Z^N``, the character lattice of the adjoint
maximal torus, the Weyl group and the automorphism ``F0`` through which
Frobenius acts on the split (or quasi-split) reference torus.  Twisting by
a Weyl group element ``w`` gives the torus whose geometric Frobenius acts on
characters by ``w * F0`` and whose relative q-Frobenius is ``q * (w * F0)``.
The characters of its rational points form ``Λ / (q w F0 - 1) Λ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
import sympy

from .intlinalg import (
    IntMatrix,
    Lattice,
    SmithDecomposition,
    Vector,
    determinant,
    integer_kernel,
    smith_normal_form,
    unimodular_inverse,
)
from .weyl import SignedPermutation, TooLargeError, WeylGroup, simple_roots

FAMILIES = ("A", "B", "C", "D", "2A", "2D")

MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4, "2A": 2, "2D": 3}

QUOTIENT_THRESHOLD = 10 ** 6


def is_prime_power(q: int) -> bool:
    if not isinstance(q, int) or q < 2:
        return False
    return len(sympy.factorint(q)) == 1


def check_prime_power(q: int) -> None:
    if not is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")


@dataclass(frozen=True)
class FamilySpec:
    """A classical adjoint family at a given root-system rank.

    For ``2A`` and ``2D`` the rank is that of the root system ``2A_{n-1}``
    and ``2D_{n-1}`` of the unitary group ``U_n`` and the non-split
    ``SO'_{2n}``, so the ambient dimension is ``rank + 1``.
    """

    family: str
    rank: int
    weyl: WeylGroup
    lattice: Lattice
    F0: SignedPermutation

    @property
    def ambient_dim(self) -> int:
        return self.weyl.n

    @property
    def lattice_descriptor(self) -> str:
        return self.lattice.name

    @property
    def split(self) -> bool:
        return self.family in ("A", "B", "C", "D")


def build_family(family: str, rank: int) -> FamilySpec:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if not isinstance(rank, int) or rank < MIN_RANK[family]:
        raise ValueError(f"family {family} needs rank >= {MIN_RANK[family]}, got {rank}")
    if family in ("A", "B", "C", "D"):
        weyl = WeylGroup(family, rank)
        n = weyl.n
        F0 = SignedPermutation.identity(n)
    elif family == "2A":
        weyl = WeylGroup("A", rank)
        n = weyl.n
        F0 = SignedPermutation.minus_identity(n)
    else:
        n = rank + 1
        weyl = WeylGroup("D", n)
        F0 = SignedPermutation.sign_flip(n, n)
    root_type = {"2A": "A", "2D": "D"}.get(family, family)
    names = {
        "A": f"{{x in Z^{n} : sum(x) = 0}}",
        "B": f"Z^{n}",
        "C": f"{{x in Z^{n} : sum(x) even}}",
        "D": f"{{x in Z^{n} : sum(x) even}}",
    }
    basis = IntMatrix.from_columns(simple_roots(root_type, weyl.rank))
    lattice = Lattice(basis, names[root_type])
    return FamilySpec(family, rank, weyl, lattice, F0)


@dataclass(frozen=True)
class CharacterGroup:
    """The finite abelian group ``Λ / M Λ`` in invariant-factor coordinates.

    Only the nontrivial factors (``d_i != 1``) are kept as coordinates.
    """

    lattice: Lattice
    snf: SmithDecomposition

    @cached_property
    def _U_inv(self) -> IntMatrix:
        return unimodular_inverse(self.snf.U)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.snf.d

    @cached_property
    def _support(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.snf.d) if d != 1)

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.snf.d[i] for i in self._support)

    @property
    def order(self) -> int:
        if any(d == 0 for d in self.snf.d):
            raise ValueError("character group is infinite")
        out = 1
        for d in self.snf.d:
            out *= d
        return out

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        c = self.lattice.coordinates(v)
        if c is None:
            raise ValueError(f"{tuple(v)} is not in the character lattice")
        u = self.snf.U.apply(c)
        return tuple(u[i] % self.snf.d[i] if self.snf.d[i] else u[i] for i in self._support)

    def lift(self, y: Sequence[int]) -> Vector:
        full = [0] * self.lattice.rank
        for i, x in zip(self._support, y):
            full[i] = int(x)
        return self.lattice.to_ambient(self._U_inv.apply(full))

    def action_matrix(self, s: SignedPermutation) -> np.ndarray:
        """Matrix of ``s`` on quotient coordinates; row ``i`` is taken mod ``moduli[i]``."""
        S = self.lattice.restrict(s.matrix())
        A = self.snf.U @ S @ self._U_inv
        sup = self._support
        return np.array(
            [[A[i, j] % self.snf.d[i] for j in sup] for i in sup], dtype=np.int64
        ).reshape(len(sup), len(sup))

    def elements(self, threshold: int = QUOTIENT_THRESHOLD) -> np.ndarray:
        """All elements as an ``(order, k)`` array, lexicographic in the coordinates."""
        if self.order > threshold:
            raise TooLargeError(f"character group of order {self.order} exceeds {threshold}")
        grids = np.meshgrid(*[np.arange(d, dtype=np.int64) for d in self.moduli], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).reshape(self.order, len(self.moduli))

    def encode(self, Y: np.ndarray) -> np.ndarray:
        """Mixed-radix index of quotient elements, consistent with ``elements``."""
        idx = np.zeros(len(Y), dtype=np.int64)
        for j, d in enumerate(self.moduli):
            idx = idx * d + Y[:, j]
        return idx


@dataclass(frozen=True)
class TwistedTorus:
    spec: FamilySpec
    w: SignedPermutation
    q: int

    def __post_init__(self):
        check_prime_power(self.q)
        if self.w not in self.spec.weyl:
            raise ValueError(f"{self.w} is not in the Weyl group of {self.spec.family}{self.spec.rank}")
        # raises if the lattice is not stable
        self.spec.lattice.restrict(self.geom_frob.matrix())

    @property
    def geom_frob(self) -> SignedPermutation:
        """``w * F0``: the action of Frobenius on characters."""
        return self.w * self.spec.F0

    @property
    def rel_frob(self) -> IntMatrix:
        return self.geom_frob.matrix().scale(self.q)

    @cached_property
    def ambient_matrix(self) -> IntMatrix:
        """``q w F0 - 1`` on the ambient ``Z^N``."""
        return self.rel_frob - IntMatrix.identity(self.spec.ambient_dim)

    @cached_property
    def M(self) -> IntMatrix:
        """``q w F0 - 1`` in lattice coordinates."""
        return self.spec.lattice.restrict(self.ambient_matrix)

    @cached_property
    def frobenius_on_lattice(self) -> IntMatrix:
        return self.spec.lattice.restrict(self.geom_frob.matrix())


def twist(spec: FamilySpec, w: SignedPermutation, q: int) -> TwistedTorus:
    return TwistedTorus(spec, w, q)


def fixed_sublattice(T: TwistedTorus) -> list[Vector]:
    """Ambient basis of the Frobenius-fixed characters."""
    A = T.frobenius_on_lattice
    K = integer_kernel(A - IntMatrix.identity(A.nrows))
    return [T.spec.lattice.to_ambient(k) for k in K]


def is_anisotropic(T: TwistedTorus) -> bool:
    A = T.frobenius_on_lattice
    return determinant(A - IntMatrix.identity(A.nrows)) != 0


def character_group(T: TwistedTorus) -> CharacterGroup:
    return CharacterGroup(T.spec.lattice, smith_normal_form(T.M))


def torus_order(T: TwistedTorus) -> int:
    return abs(determinant(T.M))


def order_polynomial(spec: FamilySpec, w: SignedPermutation) -> list[int]:
    """Coefficients, highest degree first, of ``P`` with ``|T(k)| = P(q)``.

    ``P(q) = ±det(q w F0 - 1)`` on the lattice, the sign chosen so that the
    values at prime powers are positive.
    """
    A = spec.lattice.restrict((w * spec.F0).matrix())
    r = A.nrows
    t = sympy.Symbol("t")
    charpoly = sympy.Matrix(A.tolist()).charpoly(t).all_coeffs()  # det(tI - A), highest first
    # det(qA - 1) = (-1)^r * sum_k a_k q^(r-k)  where charpoly = sum_k a_k t^k
    coeffs = [(-1) ** r * int(c) for c in reversed(charpoly)]
    value_at_2 = sum(c * 2 ** (r - i) for i, c in enumerate(coeffs))
    if value_at_2 < 0:
        coeffs = [-c for c in coeffs]
    return coeffs


def evaluate_polynomial(coeffs: Sequence[int], q: int) -> int:
    out = 0
    for c in coeffs:
        out = out * q + c
    return out


def describe(T: TwistedTorus, v: Optional[Sequence[int]] = None) -> dict:
    cg = character_group(T)
    out = {
        "family": T.spec.family,
        "rank": T.spec.rank,
        "q": T.q,
        "twist": T.w.to_json(),
        "anisotropic": is_anisotropic(T),
        "torus_order": torus_order(T),
        "invariant_factors": list(cg.invariant_factors),
    }
    if v is not None:
        out["projection"] = list(cg.project(v))
    return out

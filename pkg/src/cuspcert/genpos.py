"""Rational Weyl groups of twisted tori and characters in general position.

A character of ``T(k)`` is a class ``v mod (q w F0 - 1) Λ``.  It is in
general position when no non-identity element of the rational Weyl group
fixes that class.  Two independent routes decide this:

* lattice membership: ``s(v) - v`` is solved for in ``(q w F0 - 1) Λ`` with
  a Hermite-form integer solver;
* the orbit oracle: the group acts on the finite quotient in Smith
  coordinates and stabilizers are read off directly.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence

import numpy as np

from .intlinalg import LatticeSolver, Vector
from .torus import (
    QUOTIENT_THRESHOLD,
    CharacterGroup,
    FamilySpec,
    TwistedTorus,
    character_group,
    torus_order,
)
from .weyl import (
    ENUMERATION_THRESHOLD,
    SignedPermutation,
    TooLargeError,
    WeylGroup,
    centralizer_twisted,
)


class CrossCheckError(AssertionError):
    """Two independent computations of the same quantity disagree."""


# -- structural centralizers -------------------------------------------------

def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen:
            continue
        c = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = perm[j]
        out.append(c)
    return out


def permutation_centralizer(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """All permutations commuting with ``perm``, built from its cycle type.

    A commuting permutation sends each cycle onto a cycle of the same
    length, matching the cyclic order up to a rotation.
    """
    by_len = defaultdict(list)
    for c in _cycles(perm):
        by_len[len(c)].append(c)
    choices = []
    for length, cyc in sorted(by_len.items()):
        opts = []
        for target in itertools.permutations(range(len(cyc))):
            for shifts in itertools.product(range(length), repeat=len(cyc)):
                opts.append((cyc, target, shifts, length))
        choices.append(opts)
    out = []
    n = len(perm)
    for combo in itertools.product(*choices):
        img = [0] * n
        for cyc, target, shifts, length in combo:
            for a, b in enumerate(target):
                src, dst = cyc[a], cyc[b]
                for j in range(length):
                    img[src[j]] = dst[(j + shifts[a]) % length]
        out.append(tuple(img))
    return out


def _gf2_solutions(rows: list[tuple[int, int]], n: int) -> list[int]:
    """All ``x`` in ``GF(2)^n`` (as bitmasks) with ``<row, x> = rhs`` for each row."""
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, mask, rhs)
    for mask, rhs in rows:
        for bit, pm, pr in pivots:
            if mask >> bit & 1:
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return []
            continue
        bit = mask.bit_length() - 1
        # keep earlier pivots reduced against the new one
        pivots = [(b, m ^ mask, r ^ rhs) if m >> bit & 1 else (b, m, r) for b, m, r in pivots]
        pivots.append((bit, mask, rhs))
    pivot_bits = {b for b, _, _ in pivots}
    free = [i for i in range(n) if i not in pivot_bits]
    sols = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        x = 0
        for i, b in zip(free, bits):
            x |= b << i
        for b, m, r in pivots:
            # pivot value is rhs plus the free variables in its row
            val = r ^ (bin(m & x & ~(1 << b)).count("1") & 1)
            x |= val << b
        sols.append(x)
    return sols


def structural_centralizer(
    W: WeylGroup,
    g: SignedPermutation,
    limit: int = ENUMERATION_THRESHOLD,
) -> list[SignedPermutation]:
    """Elements of ``W`` commuting with the signed permutation ``g``.

    The permutation part of a commuting element centralizes the permutation
    part of ``g``; for each such candidate the signs are the solutions of a
    linear system over the two-element field,
    ``eps[g(i)] + eps[i] = bit(sign_g[i] * sign_g[pi(i)])``, together with
    the parity condition of type D (or all signs ``+1`` in type A).
    """
    candidates = permutation_centralizer(g.perm)
    if len(candidates) > limit:
        raise TooLargeError(f"{len(candidates)} candidate permutations exceed {limit}")
    n = g.n
    gbit = [int(s < 0) for s in g.signs]
    out = []
    for pi in candidates:
        rows = []
        for i in range(n):
            mask = (1 << g.perm[i]) ^ (1 << i)
            rows.append((mask, gbit[i] ^ gbit[pi[i]]))
        if W.family == "A":
            rows.extend((1 << i, 0) for i in range(n))
        elif W.family == "D":
            rows.append(((1 << n) - 1, 0))
        for x in _gf2_solutions(rows, n):
            signs = tuple(-1 if x >> i & 1 else 1 for i in range(n))
            out.append(SignedPermutation(pi, signs))
    return sorted(out)


# -- rational Weyl group -----------------------------------------------------

@dataclass(frozen=True)
class RationalWeylAction:
    """The rational Weyl group ``W_T(k)``, sorted in canonical order."""

    elements: tuple[SignedPermutation, ...]
    method: str

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def nonidentity(self) -> list[SignedPermutation]:
        return [s for s in self.elements if not s.is_identity()]

    def is_cyclic(self) -> bool:
        return any(s.order() == self.order for s in self.elements)

    @cached_property
    def generators(self) -> tuple[SignedPermutation, ...]:
        """A single generator when cyclic, otherwise a greedy generating set.

        Both choices take elements in canonical order.
        """
        for s in self.elements:
            if s.order() == self.order:
                return (s,)
        gens: list[SignedPermutation] = []
        span = {SignedPermutation.identity(self.elements[0].n)}
        for s in self.elements:
            if s in span:
                continue
            gens.append(s)
            span = _closure(span, gens)
        return tuple(gens)


def _closure(start: set, gens: list[SignedPermutation]) -> set:
    span = set(start)
    frontier = list(span)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in span:
                    span.add(b)
                    nxt.append(b)
        frontier = nxt
    return span


def rational_weyl_group(
    T: TwistedTorus,
    method: str = "structural",
    threshold: int = ENUMERATION_THRESHOLD,
) -> RationalWeylAction:
    """Twisted centralizer of ``w`` in ``W``: the elements commuting with ``w F0``.

    ``method`` is ``"structural"``, ``"brute_force"`` or ``"checked"``; the
    last computes both and raises ``CrossCheckError`` if they differ.
    Brute force raises ``TooLargeError`` above ``threshold``.  The group
    does not depend on ``q``, so results are cached per ``(family, w)``.
    """
    return _twisted_centralizer(T.spec, T.w, method, threshold)


@lru_cache(maxsize=256)
def _twisted_centralizer(spec: FamilySpec, w: SignedPermutation, method: str, threshold: int) -> RationalWeylAction:
    W = spec.weyl
    if method == "structural":
        return RationalWeylAction(tuple(structural_centralizer(W, w * spec.F0)), "structural")
    if method == "brute_force":
        elems = centralizer_twisted(W, w, spec.F0, threshold)
        return RationalWeylAction(tuple(sorted(elems)), "brute_force_centralizer")
    if method == "checked":
        a = _twisted_centralizer(spec, w, "structural", threshold)
        b = _twisted_centralizer(spec, w, "brute_force", threshold)
        if a.elements != b.elements:
            raise CrossCheckError(
                f"structural ({a.order}) and brute-force ({b.order}) centralizers differ"
            )
        return RationalWeylAction(a.elements, "structural+brute_force")
    raise ValueError(f"unknown method {method!r}")


# -- general position --------------------------------------------------------

@dataclass(frozen=True)
class GenPosVerdict:
    witness: Vector
    in_general_position: bool
    failing_element: Optional[SignedPermutation]
    method: str

    def __bool__(self) -> bool:
        return self.in_general_position


class GeneralPositionTester:
    """Both general-position routes for one torus and its rational Weyl group."""

    def __init__(self, T: TwistedTorus, W_T: RationalWeylAction):
        self.torus = T
        self.group = W_T

    @cached_property
    def solver(self) -> LatticeSolver:
        return LatticeSolver(self.torus.ambient_matrix, self.torus.spec.lattice)

    @cached_property
    def quotient(self) -> CharacterGroup:
        return character_group(self.torus)

    @cached_property
    def _actions(self) -> list[tuple[SignedPermutation, np.ndarray]]:
        return [(s, self.quotient.action_matrix(s)) for s in self.group.nonidentity()]

    def _check_member(self, v: Sequence[int]) -> Vector:
        v = tuple(int(x) for x in v)
        if v not in self.torus.spec.lattice:
            raise ValueError(f"{v} is not in the character lattice")
        return v

    def by_lattice_membership(self, v: Sequence[int]) -> GenPosVerdict:
        v = self._check_member(v)
        for s in self.group.nonidentity():
            u = tuple(a - b for a, b in zip(s(v), v))
            if self.solver.solve(u) is not None:
                return GenPosVerdict(v, False, s, "lattice_membership")
        return GenPosVerdict(v, True, None, "lattice_membership")

    def by_orbit_oracle(self, v: Sequence[int], threshold: int = QUOTIENT_THRESHOLD) -> GenPosVerdict:
        v = self._check_member(v)
        if torus_order(self.torus) > threshold:
            raise TooLargeError(f"|T(k)| = {torus_order(self.torus)} exceeds the oracle threshold {threshold}")
        mod = np.array(self.quotient.moduli, dtype=np.int64)
        y = np.array(self.quotient.project(v), dtype=np.int64)
        for s, A in self._actions:
            if np.array_equal((A @ y) % mod, y):
                return GenPosVerdict(v, False, s, "orbit_oracle")
        return GenPosVerdict(v, True, None, "orbit_oracle")


def is_general_position(T: TwistedTorus, W_T: RationalWeylAction, v: Sequence[int]) -> GenPosVerdict:
    return GeneralPositionTester(T, W_T).by_lattice_membership(v)


def orbit_oracle(
    T: TwistedTorus,
    W_T: RationalWeylAction,
    v: Sequence[int],
    threshold: int = QUOTIENT_THRESHOLD,
) -> GenPosVerdict:
    return GeneralPositionTester(T, W_T).by_orbit_oracle(v, threshold)


@dataclass(frozen=True)
class GeneralPositionCount:
    count: int
    group_order: int
    quotient_order: int
    orbit_representatives: np.ndarray  # quotient coordinates, one row per free orbit
    moduli: tuple[int, ...]

    @property
    def orbit_count(self) -> int:
        return len(self.orbit_representatives)


def count_general_position(
    T: TwistedTorus,
    W_T: RationalWeylAction,
    threshold: int = QUOTIENT_THRESHOLD,
) -> GeneralPositionCount:
    """Count quotient elements with trivial stabilizer by full enumeration.

    Each free orbit is represented by its smallest element in mixed-radix
    order.
    """
    tester = GeneralPositionTester(T, W_T)
    cg = tester.quotient
    if cg.order > threshold:
        raise TooLargeError(f"|T(k)| = {cg.order} exceeds the oracle threshold {threshold}")
    Y = cg.elements(threshold)
    mod = np.array(cg.moduli, dtype=np.int64)
    idx = cg.encode(Y)
    fixed = np.zeros(len(Y), dtype=bool)
    orbit_min = idx.copy()
    for _, A in tester._actions:
        Z = (Y @ A.T) % mod if len(mod) else Y
        fixed |= np.all(Z == Y, axis=1)
        np.minimum(orbit_min, cg.encode(Z), out=orbit_min)
    free = ~fixed
    reps = np.unique(orbit_min[free])
    return GeneralPositionCount(int(free.sum()), W_T.order, cg.order, Y[reps], cg.moduli)

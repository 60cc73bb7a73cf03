"""Classical Weyl groups as groups of signed permutations.

A signed permutation ``s`` of ``{0..n-1}`` acts on ``Z^n`` by
``e_i -> signs[i] * e_{perm[i]}``.  Products compose like linear maps:
``(a * b)(x) == a(b(x))``.

Type A_n lives on ``Z^(n+1)`` with all signs ``+1``; types B_n and C_n are
all signed permutations of ``Z^n``; type D_n keeps an even number of
``-1`` signs.

Exhaustive work (centralizers, twisted classes) is vectorized with numpy
over the whole group, held as an ``(order, n)`` array of "signed images"
``signs[i] * (perm[i] + 1)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .intlinalg import IntMatrix

ENUMERATION_THRESHOLD = 20_000_000

FAMILIES = ("A", "B", "C", "D")


class TooLargeError(RuntimeError):
    """A group or quotient exceeds the configured enumeration threshold."""


@dataclass(frozen=True, order=True)
class SignedPermutation:
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise ValueError(f"{self.perm} is not a permutation of 0..{n - 1}")
        if len(self.signs) != n or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad sign vector {self.signs}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def minus_identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (-1,) * n)

    @classmethod
    def sign_flip(cls, k: int, n: int) -> "SignedPermutation":
        """``t_k``: negate the ``k``-th coordinate (1-based)."""
        if not 1 <= k <= n:
            raise ValueError(f"coordinate {k} out of range 1..{n}")
        return cls(tuple(range(n)), tuple(-1 if i == k - 1 else 1 for i in range(n)))

    @classmethod
    def cycle(cls, points: Sequence[int], n: int) -> "SignedPermutation":
        """The cycle ``e_{p1} -> e_{p2} -> ... -> e_{p1}`` on 1-based points."""
        perm = list(range(n))
        pts = [p - 1 for p in points]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
        return cls(tuple(perm), (1,) * n)

    @classmethod
    def from_signed_images(cls, images: Sequence[int]) -> "SignedPermutation":
        """From ``[±(perm[i] + 1)]``, the signed one-line notation."""
        return cls(tuple(abs(int(x)) - 1 for x in images), tuple(1 if x > 0 else -1 for x in images))

    @classmethod
    def from_matrix(cls, M: IntMatrix) -> "SignedPermutation":
        perm, signs = [], []
        for j, col in enumerate(M.columns()):
            nz = [(i, x) for i, x in enumerate(col) if x]
            if len(nz) != 1 or nz[0][1] not in (1, -1):
                raise ValueError("not a signed permutation matrix")
            perm.append(nz[0][0])
            signs.append(nz[0][1])
        return cls(tuple(perm), tuple(signs))

    def signed_images(self) -> tuple[int, ...]:
        return tuple(s * (p + 1) for p, s in zip(self.perm, self.signs))

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return SignedPermutation(
            tuple(self.perm[p] for p in other.perm),
            tuple(s * self.signs[p] for p, s in zip(other.perm, other.signs)),
        )

    def inverse(self) -> "SignedPermutation":
        perm = [0] * self.n
        signs = [1] * self.n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    def __pow__(self, k: int) -> "SignedPermutation":
        base = self if k >= 0 else self.inverse()
        result = SignedPermutation.identity(self.n)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.n:
            raise ValueError(f"vector of length {len(x)} for a signed permutation of {self.n}")
        y = [0] * self.n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            y[p] = s * x[i]
        return tuple(y)

    def matrix(self) -> IntMatrix:
        rows = [[0] * self.n for _ in range(self.n)]
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            rows[p][i] = s
        return IntMatrix(rows, ncols=self.n)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(s == 1 for s in self.signs)

    def order(self) -> int:
        k, x = 1, self
        while not x.is_identity():
            x = x * self
            k += 1
        return k

    def negative_count(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def conjugate(self, x: "SignedPermutation") -> "SignedPermutation":
        """``x * self * x^-1``."""
        return x * self * x.inverse()

    def __str__(self) -> str:
        return "[" + " ".join(str(v) for v in self.signed_images()) + "]"

    def to_json(self) -> list[int]:
        return list(self.signed_images())


def _root_kind(root: Sequence[int]) -> Optional[str]:
    nz = [(i, x) for i, x in enumerate(root) if x]
    if len(nz) == 2 and all(abs(x) == 1 for _, x in nz):
        return "short_pair" if nz[0][1] != nz[1][1] else "long_pair"
    if len(nz) == 1 and abs(nz[0][1]) == 1:
        return "unit"
    if len(nz) == 1 and abs(nz[0][1]) == 2:
        return "double"
    return None


def reflection(family: str, root: Sequence[int]) -> SignedPermutation:
    """Orthogonal reflection in ``root``; ``root`` must be a root of ``family``.

    ``short_pair`` roots ``e_i - e_j`` belong to every family, ``e_i + e_j``
    to B, C and D, ``e_i`` to B only and ``2 e_i`` to C only.
    """
    kind = _root_kind(root)
    allowed = {
        "A": {"short_pair"},
        "B": {"short_pair", "long_pair", "unit"},
        "C": {"short_pair", "long_pair", "double"},
        "D": {"short_pair", "long_pair"},
    }[family]
    if kind not in allowed:
        raise ValueError(f"{tuple(root)} is not a root of type {family}")
    n = len(root)
    norm2 = sum(x * x for x in root)
    cols = []
    for i in range(n):
        # s(e_i) = e_i - 2 (e_i . a)/(a . a) a
        c = 2 * root[i]
        col = [int(i == j) * norm2 - c * root[j] for j in range(n)]
        cols.append([x // norm2 for x in col])
    return SignedPermutation.from_matrix(IntMatrix.from_columns(cols))


def ambient_dim(family: str, rank: int) -> int:
    return rank + 1 if family == "A" else rank


def check_rank(family: str, rank: int) -> None:
    low = {"A": 1, "B": 2, "C": 2, "D": 4}
    if family not in low:
        raise ValueError(f"unknown Weyl group family {family!r}")
    if rank < low[family]:
        raise ValueError(f"type {family} needs rank >= {low[family]}, got {rank}")


def simple_roots(family: str, rank: int) -> list[tuple[int, ...]]:
    """Simple roots in Bourbaki order and coordinates."""
    check_rank(family, rank)
    N = ambient_dim(family, rank)

    def e(*pairs):
        v = [0] * N
        for i, c in pairs:
            v[i - 1] += c
        return tuple(v)

    roots = [e((i, 1), (i + 1, -1)) for i in range(1, rank)]
    if family == "A":
        roots.append(e((rank, 1), (rank + 1, -1)))
    elif family == "B":
        roots.append(e((rank, 1)))
    elif family == "C":
        roots.append(e((rank, 2)))
    else:
        roots.append(e((rank - 1, 1), (rank, 1)))
    return roots


def coxeter_element(family: str, rank: int) -> SignedPermutation:
    """Product ``s_1 s_2 ... s_n`` of the simple reflections, in Bourbaki order."""
    refl = [reflection(family, r) for r in simple_roots(family, rank)]
    w = SignedPermutation.identity(ambient_dim(family, rank))
    for s in refl:
        w = w * s
    return w


def coxeter_number(family: str, rank: int) -> int:
    return {"A": rank + 1, "B": 2 * rank, "C": 2 * rank, "D": 2 * (rank - 1)}[family]


@dataclass(frozen=True)
class WeylGroup:
    family: str
    rank: int

    def __post_init__(self):
        check_rank(self.family, self.rank)

    @property
    def n(self) -> int:
        """Ambient dimension the group acts on."""
        return ambient_dim(self.family, self.rank)

    @property
    def order(self) -> int:
        n = self.rank
        if self.family == "A":
            return math.factorial(n + 1)
        if self.family == "D":
            return 2 ** (n - 1) * math.factorial(n)
        return 2 ** n * math.factorial(n)

    @cached_property
    def generators(self) -> tuple[SignedPermutation, ...]:
        return tuple(reflection(self.family, r) for r in simple_roots(self.family, self.rank))

    def __contains__(self, s: SignedPermutation) -> bool:
        if s.n != self.n:
            return False
        if self.family == "A":
            return all(x == 1 for x in s.signs)
        if self.family == "D":
            return s.negative_count() % 2 == 0
        return True

    def reflection(self, root: Sequence[int]) -> SignedPermutation:
        if len(root) != self.n:
            raise ValueError(f"root of length {len(root)} in ambient dimension {self.n}")
        return reflection(self.family, root)

    def sign_patterns(self) -> np.ndarray:
        n = self.n
        if self.family == "A":
            return np.ones((1, n), dtype=np.int8)
        pats = np.array(list(itertools.product((-1, 1), repeat=n)), dtype=np.int8)
        if self.family == "D":
            pats = pats[(pats < 0).sum(axis=1) % 2 == 0]
        return pats

    def iter_blocks(self, threshold: int = ENUMERATION_THRESHOLD, block: int = 1 << 20) -> Iterator[np.ndarray]:
        """Yield the whole group as signed-image arrays, in canonical order.

        Canonical order is lexicographic in ``(perm, signs)``.
        """
        if self.order > threshold:
            raise TooLargeError(f"|W({self.family}{self.rank})| = {self.order} exceeds {threshold}")
        signs = self.sign_patterns()
        per = max(1, block // len(signs))
        perms = itertools.permutations(range(1, self.n + 1))
        while True:
            chunk = list(itertools.islice(perms, per))
            if not chunk:
                return
            P = np.array(chunk, dtype=np.int8)
            yield (P[:, None, :] * signs[None, :, :]).reshape(-1, self.n)

    def as_array(self, threshold: int = ENUMERATION_THRESHOLD) -> np.ndarray:
        return np.concatenate(list(self.iter_blocks(threshold)))

    def elements(self, threshold: int = ENUMERATION_THRESHOLD) -> list[SignedPermutation]:
        return [SignedPermutation.from_signed_images(row) for row in self.as_array(threshold)]


def _compose_right(E: np.ndarray, g: SignedPermutation) -> np.ndarray:
    """Rows of ``E`` times ``g`` on the right."""
    return E[:, list(g.perm)] * np.array(g.signs, dtype=np.int8)


def _compose_left(g: SignedPermutation, E: np.ndarray) -> np.ndarray:
    """``g`` times rows of ``E`` on the left."""
    G = np.array(g.signed_images(), dtype=np.int8)
    return np.sign(E).astype(np.int8) * G[np.abs(E).astype(np.intp) - 1]


def centralizer_twisted(
    W: WeylGroup,
    w: SignedPermutation,
    F0: SignedPermutation,
    threshold: int = ENUMERATION_THRESHOLD,
) -> list[SignedPermutation]:
    """All ``s`` in ``W`` commuting with ``w * F0``, by exhaustive search.

    Raises ``TooLargeError`` when ``|W|`` exceeds ``threshold``.
    """
    g = w * F0
    found = []
    for E in W.iter_blocks(threshold):
        mask = np.all(_compose_right(E, g) == _compose_left(g, E), axis=1)
        found.extend(SignedPermutation.from_signed_images(row) for row in E[mask])
    return found


@dataclass(frozen=True)
class TwistedClass:
    representative: SignedPermutation
    size: int


@dataclass(frozen=True)
class TwistedClassTable:
    family: str
    rank: int
    F0: SignedPermutation
    classes: tuple[TwistedClass, ...]
    _labels: np.ndarray = field(repr=False, compare=False)
    _keys: np.ndarray = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.classes)

    def class_index(self, w: SignedPermutation) -> int:
        key = _encode(np.array([w.signed_images()], dtype=np.int8))[0]
        pos = int(np.searchsorted(self._keys, key))
        if pos >= len(self._keys) or self._keys[pos] != key:
            raise ValueError(f"{w} is not in W({self.family}{self.rank})")
        return int(self._labels[pos])


def _encode(E: np.ndarray) -> np.ndarray:
    """Order-preserving integer keys for rows in canonical (perm, signs) order."""
    n = E.shape[1]
    perm = np.abs(E).astype(np.int64) - 1
    neg = (E > 0).astype(np.int64)  # -1 sorts before +1
    key = np.zeros(len(E), dtype=np.int64)
    for i in range(n):
        key = key * n + perm[:, i]
    for i in range(n):
        key = key * 2 + neg[:, i]
    return key


def twisted_conjugacy_classes(
    W: WeylGroup,
    F0: SignedPermutation,
    threshold: int = ENUMERATION_THRESHOLD,
) -> TwistedClassTable:
    """Partition ``W`` under ``w ~ x w F0(x)^-1`` with ``F0(x) = F0 x F0^-1``.

    Orbits are computed as connected components of the graph joining ``w``
    to its twisted conjugates by the simple reflections, which generate
    ``W``.  Each class is represented by its canonically smallest element.
    """
    if F0.n != W.n:
        raise ValueError("F0 acts on the wrong dimension")
    for s in W.generators:
        if s.conjugate(F0) not in W:
            raise ValueError("F0 does not normalize W")
    E = W.as_array(threshold)
    keys = _encode(E)
    # E is produced in canonical order, so keys are already sorted
    assert np.all(keys[1:] > keys[:-1])
    size = len(E)
    src, dst = [], []
    for x in W.generators:
        y = F0 * x.inverse() * F0.inverse()
        img = _compose_right(_compose_left(x, E), y)
        src.append(np.arange(size))
        dst.append(np.searchsorted(keys, _encode(img)))
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(size, size))
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    first = np.full(ncomp, size, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(size))
    # relabel so classes are numbered by their smallest element
    order = np.argsort(first)
    relabel = np.empty(ncomp, dtype=np.int64)
    relabel[order] = np.arange(ncomp)
    labels = relabel[labels]
    sizes = np.bincount(labels, minlength=ncomp)
    classes = tuple(
        TwistedClass(SignedPermutation.from_signed_images(E[first[c]]), int(sizes[k]))
        for k, c in enumerate(order)
    )
    return TwistedClassTable(W.family, W.rank, F0, classes, labels, keys)

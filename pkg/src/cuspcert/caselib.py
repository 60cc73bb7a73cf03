"""Witness table and end-to-end certification of the classical cases.

For every classical adjoint family there is a twisted torus and a character
lattice vector that together satisfy the two hypotheses of the
Deligne-Lusztig cuspidality criterion: the torus is anisotropic (elliptic)
and the character is in general position.  ``certify_case`` checks both for
one ``(family, rank, q)`` and records the outcome as a JSON-ready
``Certificate``.
"""

from __future__ import annotations

import datetime as _dt
import json
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import __version__
from .genpos import (
    CrossCheckError,
    GeneralPositionTester,
    rational_weyl_group,
)
from .intlinalg import LatticeSolver, Vector
from .torus import (
    FAMILIES,
    MIN_RANK,
    QUOTIENT_THRESHOLD,
    TwistedTorus,
    build_family,
    character_group,
    check_prime_power,
    fixed_sublattice,
    is_anisotropic,
    torus_order,
    twist,
)
from .weyl import (
    ENUMERATION_THRESHOLD,
    SignedPermutation,
    coxeter_element,
    twisted_conjugacy_classes,
)

SCHEMA = "cuspcert-1"

DEFAULT_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32)

S = SignedPermutation


def _e(n: int, *pairs: tuple[int, int]) -> Vector:
    v = [0] * n
    for i, c in pairs:
        v[i - 1] += c
    return tuple(v)


@dataclass(frozen=True)
class PaperWitness:
    family: str
    rank: int
    twist_element: SignedPermutation
    witness_vector: Vector
    provenance: str


def paper_witness(family: str, rank: int) -> PaperWitness:
    """The torus and character used for each family in the existence proof."""
    spec = build_family(family, rank)
    n = spec.ambient_dim
    if family == "A":
        w, v, tag = S.cycle(range(1, n + 1), n), _e(n, (1, 1), (n, -1)), "split A_n"
    elif family == "B":
        w, v, tag = coxeter_element("B", rank), _e(n, (1, 1)), "split B_n"
    elif family == "C":
        w, v, tag = coxeter_element("C", rank), _e(n, (1, 2)), "split C_n"
    elif family == "D":
        m = n - 1
        w = S.sign_flip(n, n) * S.sign_flip(m, n) * S.cycle(range(1, m + 1), n)
        v, tag = _e(n, (m, 2)), "split D_n"
    elif family == "2A":
        if n % 2:
            w, v, tag = S.cycle(range(1, n + 1), n), _e(n, (1, 1), (n, -1)), "unitary, n odd"
        else:
            m = n - 1
            w, v, tag = S.cycle(range(1, m + 1), n), _e(n, (1, 1), (m, -1)), "unitary, n even"
    else:
        w, v, tag = S.cycle(range(1, n + 1), n), _e(n, (n, 2)), "non-split orthogonal"
    return PaperWitness(family, rank, w, v, tag)


def displayed_d_coxeter(n: int) -> SignedPermutation:
    """``(x_1, ..., x_n) -> (-x_n, x_1, ..., x_{n-2}, -x_{n-1})`` on ``Z^n``.

    This is the map written down for the D_n Coxeter element in the
    classical argument.  It is an n-cycle whose signs multiply to ``+1``,
    so it fixes ``(2, ..., 2, -2)`` and the torus it defines is isotropic.
    It is not the Bourbaki product of simple reflections, which
    ``coxeter_element("D", n)`` returns and which is anisotropic.
    """
    images = list(range(2, n)) + [-n, -1]
    return S.from_signed_images(images)


def resolve_twist(family: str, rank: int, name: str) -> SignedPermutation:
    """Twist vocabulary: ``paper``, ``coxeter``, ``bourbaki`` or ``index:<k>``.

    ``coxeter`` is the Coxeter element of the split families (for D the
    displayed map above, the deliberate negative control) and the full
    n-cycle for the twisted families.  ``bourbaki`` is always the product
    of simple reflections of the underlying Weyl group.  ``index:<k>`` is
    the k-th twisted conjugacy class representative.
    """
    spec = build_family(family, rank)
    n = spec.ambient_dim
    if name == "paper":
        return paper_witness(family, rank).twist_element
    if name == "coxeter":
        if family == "D":
            return displayed_d_coxeter(n)
        if family in ("2A", "2D"):
            return S.cycle(range(1, n + 1), n)
        return coxeter_element(family, rank)
    if name == "bourbaki":
        return coxeter_element(spec.weyl.family, spec.weyl.rank)
    if name.startswith("index:"):
        try:
            k = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad twist {name!r}") from None
        table = twisted_conjugacy_classes(spec.weyl, spec.F0)
        if not 0 <= k < len(table):
            raise ValueError(f"class index {k} out of range 0..{len(table) - 1}")
        return table.classes[k].representative
    raise ValueError(f"unknown twist {name!r}")


# -- certificates ------------------------------------------------------------

@dataclass
class Certificate:
    family: str
    rank: int
    q: int
    ambient_dim: int
    lattice: str
    twist_label: str
    twist: list[int]
    anisotropic: bool
    torus_order: int
    invariant_factors: list[int]
    rational_weyl_group: dict
    witness: list[int]
    general_position: bool
    oracle_checked: bool
    failures: list[str] = field(default_factory=list)
    verdict: str = "FAIL"
    schema: str = SCHEMA
    tool_version: str = __version__
    timestamp: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def certify_case(
    family: str,
    rank: int,
    q: int,
    twist_name: str = "paper",
    *,
    oracle: bool = True,
    cross_check: bool = True,
    enumeration_threshold: int = ENUMERATION_THRESHOLD,
    oracle_threshold: int = QUOTIENT_THRESHOLD,
    timestamp: bool = True,
) -> Certificate:
    """Check that the chosen torus is anisotropic and the witness is in general position.

    A mathematical failure yields a FAIL certificate; invalid input raises.
    With ``cross_check`` the structural rational Weyl group is compared to
    brute-force enumeration whenever ``|W|`` is within the threshold; with
    ``oracle`` the general-position verdict is compared to the orbit oracle
    whenever ``|T(k)|`` is within its threshold.
    """
    check_prime_power(q)
    spec = build_family(family, rank)
    w = resolve_twist(family, rank, twist_name)
    v = paper_witness(family, rank).witness_vector
    T = twist(spec, w, q)
    failures: list[str] = []

    anisotropic = is_anisotropic(T)
    if not anisotropic:
        fixed = ", ".join(str(list(x)) for x in fixed_sublattice(T))
        failures.append(f"torus is not anisotropic: Frobenius fixes {fixed}")

    order = torus_order(T)
    factors = list(character_group(T).invariant_factors)

    method = "structural"
    if cross_check and spec.weyl.order <= enumeration_threshold:
        method = "checked"
    try:
        W_T = rational_weyl_group(T, method, enumeration_threshold)
    except CrossCheckError as exc:
        failures.append(f"rational Weyl group cross-check failed: {exc}")
        W_T = rational_weyl_group(T, "structural")

    tester = GeneralPositionTester(T, W_T)
    verdict = tester.by_lattice_membership(v)
    if not verdict.in_general_position:
        failures.append(f"witness {list(v)} is fixed by {verdict.failing_element}")

    oracle_checked = False
    if oracle and order <= oracle_threshold:
        other = tester.by_orbit_oracle(v, oracle_threshold)
        oracle_checked = True
        if (other.in_general_position, other.failing_element) != (
            verdict.in_general_position,
            verdict.failing_element,
        ):
            failures.append("orbit oracle disagrees with lattice membership")

    cert = Certificate(
        family=family,
        rank=rank,
        q=q,
        ambient_dim=spec.ambient_dim,
        lattice=spec.lattice_descriptor,
        twist_label=twist_name,
        twist=w.to_json(),
        anisotropic=anisotropic,
        torus_order=order,
        invariant_factors=factors,
        rational_weyl_group={
            "order": W_T.order,
            "method": W_T.method,
            "generators": [g.to_json() for g in W_T.generators],
            "cyclic": W_T.is_cyclic(),
        },
        witness=list(v),
        general_position=verdict.in_general_position,
        oracle_checked=oracle_checked,
        failures=failures,
    )
    cert.verdict = "PASS" if anisotropic and verdict.in_general_position and not failures else "FAIL"
    if timestamp:
        cert.timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return cert


def valid_ranks(family: str, ranks: Iterable[int]) -> list[int]:
    return [r for r in ranks if r >= MIN_RANK[family]]


def _family_key(family: str) -> int:
    return FAMILIES.index(family)


def _certify_group(args) -> list[Certificate]:
    family, rank, qs, kwargs = args
    return [certify_case(family, rank, q, **kwargs) for q in qs]


def certify_range(
    families: Sequence[str],
    ranks: Iterable[int],
    qs: Iterable[int],
    *,
    workers: int = 1,
    **kwargs,
) -> list[Certificate]:
    """Certify every ``(family, rank, q)``; ranks below a family's minimum are skipped.

    Results are ordered by family (in the order A, B, C, D, 2A, 2D), rank
    and q whatever the number of worker processes.
    """
    qs = sorted(set(qs))
    for q in qs:
        check_prime_power(q)
    ranks = sorted(set(ranks))
    for f in families:
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f!r}")
    tasks = [
        (f, r, qs, kwargs)
        for f in sorted(set(families), key=_family_key)
        for r in valid_ranks(f, ranks)
    ]
    if not qs or not tasks:
        return []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(_certify_group, tasks))
    else:
        groups = [_certify_group(t) for t in tasks]
    return [c for g in groups for c in g]


def case_seed(family: str, rank: int, q: int) -> int:
    return zlib.crc32(f"{family}:{rank}:{q}".encode())


# -- closed forms ------------------------------------------------------------

def cyclic_generator(family: str, rank: int) -> SignedPermutation:
    """Generator of the cyclic rational Weyl group of the witness torus.

    For the split families and the unitary groups it is the twisting
    element itself.  For the non-split orthogonal groups it is the element
    of ``W(D_n)`` whose permutation part is the n-cycle (n odd) or its
    square (n even).
    """
    pw = paper_witness(family, rank)
    if family != "2D":
        return pw.twist_element
    spec = build_family(family, rank)
    c = pw.twist_element * spec.F0
    n = spec.ambient_dim
    return S.minus_identity(n) * c if n % 2 else c * c


def paper_coordinate(family: str, rank: int) -> int:
    """0-based index of the solution coordinate the closed forms describe."""
    n = build_family(family, rank).ambient_dim
    if family in ("B", "C"):
        return 0
    if family in ("A", "2D"):
        return n - 1
    # D and even unitary: the coordinate m = n - 1; odd unitary: n
    if family == "2A" and n % 2:
        return n - 1
    return n - 2


def series_solution(T: TwistedTorus, u: Sequence[int]) -> tuple[Fraction, ...]:
    """Rational ``x`` with ``(q A - 1) x = u`` where ``A = w F0``.

    Uses ``A^h = ±1`` for the first such ``h``:
    ``(q A - 1) sum_{k<h} q^k A^k = ±q^h - 1``.
    """
    g = T.geom_frob
    n = g.n
    h, p = 1, g
    while not (p.is_identity() or p == S.minus_identity(n)):
        p = p * g
        h += 1
    eps = 1 if p.is_identity() else -1
    den = eps * T.q ** h - 1
    acc = [0] * n
    term = tuple(u)
    for k in range(h):
        acc = [a + T.q ** k * t for a, t in zip(acc, term)]
        term = g(term)
    return tuple(Fraction(a, den) for a in acc)


def displayed_closed_form(family: str, rank: int, q: int, target: Sequence[int]) -> Optional[Fraction]:
    """The closed form quoted in the existence proof, where one is given.

    ``target`` is ``s(v) - v``; returns ``None`` outside the shapes the
    proof treats explicitly.
    """
    n = build_family(family, rank).ambient_dim
    t = list(target)
    nz = {i + 1: c for i, c in enumerate(t) if c}

    if family in ("B", "C"):
        scale = 1 if family == "B" else 2
        if nz == {1: -2 * scale}:
            return Fraction(2 * scale, q ** n + 1)
        if len(nz) == 2 and nz.get(1) == -scale:
            (j, c), = [(k, c) for k, c in nz.items() if k != 1]
            if c == scale:
                r = j - 1
                return scale * Fraction(q ** (n - r) + 1, q ** n + 1)
        return None

    if family == "A":
        # (e_{r+1} - e_r) - (e_1 - e_{n}) with n = rank + 1 coordinates
        N = rank
        for r in range(1, N + 1):
            expect = [0] * n
            expect[r] += 1
            expect[r - 1] -= 1
            expect[0] -= 1
            expect[n - 1] += 1
            if t == expect:
                num = -q ** N - q ** (N + 1 - r) + q ** (N - r) + 1
                return Fraction(num, q ** (N + 1) - 1)
        return None

    if family == "2A":
        m = n if n % 2 else n - 1
        if any(t[m:]):
            return None
        for r in range(1, m):
            expect = [0] * n
            expect[r] += 1
            expect[r - 1] -= 1
            expect[0] -= 1
            expect[m - 1] += 1
            if t == expect:
                Q = -q
                num = Q ** (m - 1) + Q ** (m - r) - Q ** (m - 1 - r) - 1
                return -Fraction(num, Q ** m - 1)
        return None

    if family in ("D", "2D"):
        # targets ±2 e_j - 2 e_K with K = m (split D) or n (2D); the proof gives
        # |x_K| = 2 (q^(K-j) ± 1) / (q^K + 1), the sign of x_K depends on the
        # placement of the negative entry of the twist
        K = n - 1 if family == "D" else n
        if family == "D" and t[n - 1]:
            return None
        others = [(k, c) for k, c in nz.items() if k != K]
        if nz.get(K) != -2 or len(others) != 1 or abs(others[0][1]) != 2:
            return None
        j, c = others[0]
        sign = 1 if c > 0 else -1
        if family == "D":
            return Fraction(2 * (sign * q ** (K - j) + 1), q ** K + 1)
        return Fraction(2 * (1 - sign * q ** (K - j)), q ** K + 1)
    return None


def nonintegrality_check(family: str, rank: int, q: int, r: int) -> bool:
    """Whether ``g^r(v) - v`` lies outside ``(q w F0 - 1) Λ``, decided twice.

    ``g`` generates the rational Weyl group of the witness torus and ``v``
    is the witness.  The exact rational solution from the geometric-series
    inverse is tested for lying in the lattice, and independently the
    Hermite-form solver is asked for a lattice solution.  Where the proof
    displays a closed form for the relevant coordinate it must match the
    rational solution.  Raises ``CrossCheckError`` on any disagreement.
    """
    check_prime_power(q)
    g = cyclic_generator(family, rank)
    h = g.order()
    if not 1 <= r < h:
        raise ValueError(f"r = {r} outside 1..{h - 1}")
    pw = paper_witness(family, rank)
    spec = build_family(family, rank)
    T = twist(spec, pw.twist_element, q)
    v = pw.witness_vector
    u = tuple(a - b for a, b in zip((g ** r)(v), v))
    x = series_solution(T, u)
    closed = displayed_closed_form(family, rank, q, u)
    coord = x[paper_coordinate(family, rank)]
    if closed is not None and closed != coord:
        raise CrossCheckError(
            f"{family}{rank} q={q} r={r}: displayed closed form {closed} != solution coordinate {coord}"
        )
    rational_member = all(c.denominator == 1 for c in x) and tuple(int(c) for c in x) in spec.lattice
    solved = LatticeSolver(T.ambient_matrix, spec.lattice).solve(u)
    if rational_member != (solved is not None):
        raise CrossCheckError(f"{family}{rank} q={q} r={r}: closed form and lattice solve disagree")
    return not rational_member

"""Twisted tori: anisotropy, orders and character groups."""

# %%
from cuspcert.caselib import paper_witness
from cuspcert.torus import (
    build_family,
    character_group,
    evaluate_polynomial,
    is_anisotropic,
    order_polynomial,
    torus_order,
    twist,
)
from cuspcert.weyl import twisted_conjugacy_classes

# Every rational maximal torus of the adjoint group of type 2A_2 (PSU_3), one per twisted class.
spec = build_family("2A", 2)
for cls in twisted_conjugacy_classes(spec.weyl, spec.F0).classes:
    w = cls.representative
    poly = order_polynomial(spec, w)
    T = twist(spec, w, 2)
    print(f"{str(w):10s} anisotropic={is_anisotropic(T)!s:5s}  |T(k)| = P(q) with P = {poly}",
          [evaluate_polynomial(poly, q) for q in (2, 3, 4, 5)])

# %%
# The tori used to build characters in general position, one per family.
for family, rank in [("A", 4), ("B", 4), ("C", 4), ("D", 5), ("2A", 4), ("2D", 4)]:
    pw = paper_witness(family, rank)
    T = twist(build_family(family, rank), pw.twist_element, 3)
    cg = character_group(T)
    print(f"{family}{rank}: w = {pw.twist_element}, |T(k)| = {torus_order(T)}, group Z/{cg.moduli}")

"""Weyl groups as signed permutations, Coxeter elements and twisted classes."""

# %%
from cuspcert.caselib import displayed_d_coxeter
from cuspcert.weyl import SignedPermutation as S, WeylGroup, coxeter_element, twisted_conjugacy_classes

for family, rank in [("A", 3), ("B", 3), ("C", 3), ("D", 4)]:
    W = WeylGroup(family, rank)
    c = coxeter_element(family, rank)
    print(f"W({family}{rank}) order {W.order:6d}  Coxeter element {c}  of order {c.order()}")

# %%
# In type D the product of the simple reflections is not an n-cycle.
# The n-cycle x -> (-x_n, x_1, ..., x_{n-2}, -x_{n-1}) has order n and fixes (2, ..., 2, -2).
n = 5
c, d = coxeter_element("D", n), displayed_d_coxeter(n)
print("product of simple reflections", c, "order", c.order())
print("signed n-cycle              ", d, "order", d.order(), "fixes", d((2, 2, 2, 2, -2)))

# %%
# Rational maximal tori are indexed by Frobenius-twisted classes.  F0 = t_4 is the graph
# automorphism of D_4 used by the non-split orthogonal group.
W = WeylGroup("D", 4)
for F0, label in [(S.identity(4), "split"), (S.sign_flip(4, 4), "twisted by t_4")]:
    table = twisted_conjugacy_classes(W, F0)
    print(f"D4 {label}: {len(table)} classes, sizes {[cl.size for cl in table.classes]}")

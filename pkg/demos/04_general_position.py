"""Characters in general position, decided two ways, and the one torus where none exists."""

# %%
from cuspcert.caselib import paper_witness
from cuspcert.genpos import GeneralPositionTester, count_general_position, rational_weyl_group
from cuspcert.torus import build_family, character_group, twist
from cuspcert.weyl import SignedPermutation as S


def tester_for(family, rank, q, w=None):
    pw = paper_witness(family, rank)
    T = twist(build_family(family, rank), w or pw.twist_element, q)
    return GeneralPositionTester(T, rational_weyl_group(T, "checked")), pw.witness_vector


# %%
# B_2 at q = 2: five characters, a group of order 4, and e_1 lies in the one free orbit.
t, v = tester_for("B", 2, 2)
print(t.by_lattice_membership(v), t.by_orbit_oracle(v), sep="\n")
print(count_general_position(t.torus, t.group))

# %%
# Unitary groups in three variables over F_4 and F_2.
for q in (4, 2):
    t, v = tester_for("2A", 2, q)
    res = count_general_position(t.torus, t.group)
    print(f"q={q}: |T(k)| = {res.quotient_order}, |W_T(k)| = {res.group_order}, free characters: {res.count}")
    print("   witness", t.by_lattice_membership(v))

# %%
# At q = 2 the Coxeter torus of PSU_3 has three characters and W_T(k) is cyclic of order 3.
# A group of order 3 cannot act nontrivially on Z/3, so every character is fixed.
# The torus of the trivial twist still carries characters in general position.
t, _ = tester_for("2A", 2, 2, S.identity(3))
res = count_general_position(t.torus, t.group)
cg = character_group(t.torus)
print("trivial twist:", res.count, "free characters, e.g.", [cg.lift(y) for y in res.orbit_representatives])

"""Exact integer linear algebra: Smith form, Hermite solves, sublattices."""

# %%
from cuspcert.intlinalg import IntMatrix, Lattice, determinant, smith_normal_form, solve_in_lattice
from cuspcert.weyl import coxeter_element

# The B2 Coxeter element rotates the plane by a quarter turn with a sign.
W = coxeter_element("B", 2).matrix()
print(W)

# %%
# With q = 2 the matrix 2W - 1 has determinant 5, so Z^2 / (2W - 1) Z^2 is cyclic of order 5.
M = W.scale(2) - IntMatrix.identity(2)
snf = smith_normal_form(M)
print("det", determinant(M), "invariant factors", snf.d)
assert snf.U @ M @ snf.V == snf.diagonal_matrix(2, 2)

# %%
# Entries stay exact however large they get.
n, q = 9, 32
big = coxeter_element("B", n).matrix().scale(q) - IntMatrix.identity(n)
print("q^n + 1 =", q ** n + 1, " |det| =", abs(determinant(big)))

# %%
# Sublattices are stored by a basis.  The even lattice of C_3 and D_3 has index 2 in Z^3.
even = Lattice(IntMatrix.from_columns([(1, -1, 0), (0, 1, -1), (0, 0, 2)]), "sum even")
print((1, 1, 0) in even, (1, 0, 0) in even, even.index_in_ambient())

# %%
# Solving M x = v with x in the lattice.  For the B_n Coxeter torus -2 e_1 is never reached.
for n in range(2, 6):
    Mn = coxeter_element("B", n).matrix().scale(3) - IntMatrix.identity(n)
    target = (-2,) + (0,) * (n - 1)
    print(n, solve_in_lattice(Mn, target, Lattice.standard(n)))

"""Involutory automorphisms of an abelian group, up to conjugacy."""
# %%
from aggroups.abelian import parse_type
from aggroups.involutions import classify_involutions, conjugate, involution_invariants, random_automorphism

t = parse_type("Z4xZ2")
cl = classify_involutions(t, method="direct")
print(f"{t}: {cl.total_involutions} involutions in {cl.count} classes")
for rep, size in cl.classes:
    print(f"  {rep.matrix}  class size {size}")

# %%
# A class is closed under conjugation: conjugating a representative by a
# random automorphism keeps the cheap invariants fixed.
phi = cl.representatives[1]
psi = conjugate(random_automorphism(t, seed=2), phi)
print(phi.matrix, "->", psi.matrix)
print(involution_invariants(psi) == involution_invariants(phi))

# %%
# For odd p the count depends only on the exponents, not on p.
for p in (3, 5, 7):
    print(p, classify_involutions(parse_type(f"Z{p}^2"), method="direct").count)

# Elementary abelian 2-groups: classes are told apart by the rank of phi + 1.
for k in range(1, 7):
    print(f"Z2^{k}", classify_involutions(parse_type(f"Z2^{k}")).count)

"""Isomorphism, subalgebras and congruences of AG-groups."""
# %%
from aggroups.abelian import parse_type
from aggroups.involutions import classify_involutions, conjugate, random_automorphism
from aggroups.structure import congruences, is_protic_normal, isomorphic, subalgebras
from aggroups.table import AGRepresentation, construct

t = parse_type("Z4xZ2")
reps = classify_involutions(t).representatives
tables = [construct(AGRepresentation(t, phi)) for phi in reps]

# Conjugate involutions give isomorphic tables; different classes do not.
psi = conjugate(random_automorphism(t, seed=3), reps[1])
other = construct(AGRepresentation(t, psi))
print([isomorphic(T, other) is not None for T in tables])

# %%
# Subalgebras are the phi-stable subgroups; each one is the class of the
# left unit in exactly one congruence.
T = tables[1]
subs = subalgebras(T)
cons = congruences(T)
print(len(subs), len(cons))
for H in subs:
    print(sorted(H), is_protic_normal(T, H))

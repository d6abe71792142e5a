"""Building AG-group tables and checking the defining laws."""
# %%
import numpy as np

from aggroups.abelian import parse_type
from aggroups.involutions import Endomorphism
from aggroups.table import (
    LAWS, AGRepresentation, CayleyTable, check, check_all, construct, divisions, from_module, reproduces, to_module,
)

# a*b = phi(a) + b on Z3 with phi = negation gives b - a.
t = parse_type("Z3")
T = construct(AGRepresentation(t, Endomorphism(t, ((2,),))))
print(np.array(T.tolist()))
print({law: r.holds for law, r in check_all(T).items()})

# %%
# A single changed cell is caught, with a witness that can be replayed.
rows = T.tolist()
rows[1][2] = rows[1][1]
bad = CayleyTable(rows)
for law in LAWS:
    r = check(bad, law)
    if not r.holds:
        print(f"{law:>16}: witness {r.witness}, replays {reproduces(bad, r)}")

# %%
# Term equivalence with modules: recover (G, +, phi, 0) and rebuild the table.
m = to_module(T)
print(m.addition.tolist(), m.phi.tolist(), m.zero)
print(from_module(m) == T)

# The right division is a/b = a * b^-1, so a/a is the same element for every a.
right, left = divisions(T)
print(np.diagonal(right))

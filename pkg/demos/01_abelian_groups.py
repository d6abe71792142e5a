"""Finite abelian groups in primary form, and how elements are numbered."""
# %%
from aggroups.abelian import (
    element_of, format_type, from_invariant_factors, groups_of_order, index, parse_type, to_invariant_factors,
)

# Every group of order 72, each written as a product of cyclic prime-power factors.
for t in groups_of_order(72):
    print(f"{format_type(t):>14}  invariant factors {to_invariant_factors(t)}")

# %%
# Elements are tuples of coordinates, numbered lexicographically with 0 as zero.
t = parse_type("Z4xZ2")
print([element_of(t, i) for i in range(t.order)])
print(index(t, (3, 1)))

# %%
# Invariant factors and primary form describe the same group.
print(format_type(from_invariant_factors([2, 6, 12])))

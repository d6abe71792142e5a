"""Counting AG-groups of a given order."""
# %%
from aggroups.enumeration import count, count_prime_power, odd_p_fastpath, validate_odd_p_fastpath

for n in (1, 4, 8, 12, 16, 27, 72, 100):
    r = count(n)
    detail = ", ".join(f"{t}:{c}" for t, c in r.per_group)
    print(f"a({n}) = {r.count}   [{detail}]")

# %%
# Prime powers. 2-groups go through a direct orbit computation.
print([count_prime_power(2, d) for d in range(1, 6)])

# For odd p the closed form is checked against direct classification first.
print(validate_odd_p_fastpath(81))
print([odd_p_fastpath(3, d) for d in range(1, 9)])

# %%
# The count is multiplicative over coprime orders.
print(count(72).count == count(8).count * count(9).count)

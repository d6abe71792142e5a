"""An independent check: search Cayley tables directly."""
# %%
from aggroups.bruteforce import find_all, labeled_models, verify_representation
from aggroups.enumeration import count

for n in range(1, 7):
    reps, stats = find_all(n)
    print(n, stats.to_dict(), count(n).count)

# %%
# Labeled tables with left unit 0, before reduction up to isomorphism.
print([len(labeled_models(n)) for n in range(1, 7)])

# Every table found by search is isomorphic to some AG(G, phi) and vice versa.
print(all(verify_representation(n) for n in range(1, 7)))

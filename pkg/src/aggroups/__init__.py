"""Abel-Grassmann groups through their linear representation.

An AG-group is a groupoid with (ab)c = (cb)a, a left unit and unique
two-sided inverses.  Every one of them is AG(G, phi): an abelian group G with
an involutory automorphism phi and product a*b = phi(a) + b.
"""
from .abelian import AbelianGroupType, groups_of_order, parse_type, format_type
from .involutions import (
    BudgetExceeded,
    Endomorphism,
    classify_involutions,
    involutory_automorphisms,
    random_automorphism,
)
from .table import AGRepresentation, CayleyTable, check, construct, from_module, to_module
from .structure import congruences, isomorphic, subalgebras
from .enumeration import count, count_prime_power, odd_p_fastpath

__version__ = "0.1.0"

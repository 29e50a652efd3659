"""Transfinite register machine toolkit.

Registers hold ordinals below a bound, time runs through the ordinals, and at
limit times every register and the active program line take the liminf of their
history. Two machine variants differ in how they treat a register whose liminf
reaches the bound: ITRM resets it to zero, wITRM crashes.
"""

from itrm.ordinal import Ordinal, OmegaSequence, omega, pair, unpair, tuple_code

__all__ = [
    "Ordinal",
    "OmegaSequence",
    "omega",
    "pair",
    "unpair",
    "tuple_code",
]

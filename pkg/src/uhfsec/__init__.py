"""Universal hashing for information-theoretic secrecy.

Hash families (finite-field, Toeplitz, modified Toeplitz), exact information
measures and leftover-hash bound calculators, binary linear codes, channel
models, and the two end-to-end primitives built from them: secret key
agreement and seeded wiretap coding with seed recycling.
"""

__version__ = "0.1.0"

from uhfsec.errors import BudgetExceededError, ConfigError, InvalidLengthError
from uhfsec.gf2 import FieldElement, GF2Field, find_valid_lengths, gf_inv, gf_mul

__all__ = [
    "BudgetExceededError",
    "ConfigError",
    "FieldElement",
    "GF2Field",
    "InvalidLengthError",
    "find_valid_lengths",
    "gf_inv",
    "gf_mul",
]

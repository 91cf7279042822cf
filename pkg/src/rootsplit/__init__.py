"""Split data into polynomial-root shares over a prime field.

The k roots of a random monic polynomial whose constant term encodes the
datum are the shares; their product mod p gives the datum back. Shares
can be extended to any-k-of-n via a modular linear system, hardened with a
composite modulus and secret exponent, serialized to files, and placed on a
simulated sensor network.
"""

__version__ = "0.1.0"

from .field import Modulus, is_probable_prime
from .partition import (
    CoefficientSet,
    RootShare,
    coefficient_space_lower_bound,
    combine_k,
    expand_coefficients,
    recover_from_root_and_coeffs,
    split_k,
    verify_share,
)
from .pipeline import join_data, split_data

__all__ = [
    "CoefficientSet",
    "Modulus",
    "RootShare",
    "coefficient_space_lower_bound",
    "combine_k",
    "expand_coefficients",
    "is_probable_prime",
    "join_data",
    "recover_from_root_and_coeffs",
    "split_data",
    "split_k",
    "verify_share",
]

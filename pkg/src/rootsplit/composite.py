"""Roots over Z_n, n = p*q, of a datum first raised to a secret exponent.

The product of all roots is only ``c = d^y mod n``. Undoing the exponent
takes ``y^-1 mod lcm(p-1, q-1)``, which needs the factors of n.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

from .field import Modulus, NotInvertible, RandomSource, default_rng, inverse_mod, is_probable_prime
from .partition import (
    CoefficientSet,
    PartitionError,
    RootShare,
    _check_group,
    _split_target,
    expand_coefficients,
    new_group_id,
)

__all__ = [
    "BadExponent",
    "CompositeKey",
    "CompositeShare",
    "KeyMismatch",
    "NotAUnit",
    "combine_to_ciphertext",
    "expand_coefficients_composite",
    "keygen",
    "random_prime",
    "recover_composite",
    "split_composite",
]

log = logging.getLogger(__name__)

MIN_BITS = 16
WARN_BITS = 2048

# Same shape as a prime-field root; the modulus kind is composite.
CompositeShare = RootShare


class BadExponent(PartitionError):
    pass


class KeyMismatch(PartitionError):
    pass


class NotAUnit(NotInvertible):
    """The datum shares a factor with n; ``gcd`` is that factor."""


@dataclass(frozen=True)
class CompositeKey:
    p: int
    q: int
    y: int

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("p and q must differ")
        for f in (self.p, self.q):
            if f < 3 or not is_probable_prime(f):
                raise ValueError(f"{f} is not an odd prime")
        if self.y < 3 or math.gcd(self.y, self.lambda_n) != 1:
            raise BadExponent(f"y={self.y} is not invertible mod lambda(n)={self.lambda_n}")
        if math.gcd(self.y, self.n) != 1:
            raise BadExponent(f"y={self.y} shares a factor with n")

    @property
    def n(self) -> int:
        return self.p * self.q

    @property
    def lambda_n(self) -> int:
        return math.lcm(self.p - 1, self.q - 1)

    @cached_property
    def y_inv(self) -> int:
        return inverse_mod(self.y, self.lambda_n)

    @cached_property
    def modulus(self) -> Modulus:
        return Modulus.composite(self.n)


def random_prime(bits: int, rng: RandomSource) -> int:
    """Random prime with exactly ``bits`` bits (top two bits set)."""
    while True:
        c = rng.getrandbits(bits) | (3 << (bits - 2)) | 1
        if is_probable_prime(c, rng=rng):
            return c


def keygen(bit_length: int, y: int = 65537, rng: RandomSource | None = None) -> CompositeKey:
    """Draw primes of ``bit_length // 2`` bits until ``y`` is usable.

    An even or too-small ``y`` can never work and raises ``BadExponent``;
    otherwise primes are redrawn until gcd(y, lambda(n)) = gcd(y, n) = 1.
    """
    if bit_length < MIN_BITS:
        raise ValueError(f"bit_length must be >= {MIN_BITS}")
    if y < 3 or y % 2 == 0:
        raise BadExponent(f"y={y} must be odd and >= 3 (lambda(n) is even)")
    if bit_length < WARN_BITS:
        log.warning("%d-bit composite key is for demonstration only", bit_length)
    rng = rng or default_rng()
    half = bit_length // 2
    while True:
        p = random_prime(half, rng)
        q = random_prime(bit_length - half, rng)
        if p == q:
            continue
        if math.gcd(y, math.lcm(p - 1, q - 1)) == 1 and math.gcd(y, p * q) == 1:
            return CompositeKey(p, q, y)


def split_composite(
    d: int,
    k: int,
    key: CompositeKey,
    rng: RandomSource | None = None,
    *,
    fixed_roots: Sequence[int] = (),
    group_id: bytes | None = None,
) -> list[CompositeShare]:
    n = key.n
    if not 1 <= d < n:
        raise ValueError(f"datum must lie in [1, {n - 1}]")
    g = math.gcd(d, n)
    if g != 1:
        raise NotAUnit(d, n, g)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = rng or default_rng()
    group_id = group_id if group_id is not None else new_group_id(rng)
    modulus = key.modulus
    roots = _split_target(pow(d, key.y, n), k, modulus, rng, fixed_roots)
    return [RootShare(group_id, i, k, r, modulus) for i, r in enumerate(roots, start=1)]


def combine_to_ciphertext(shares: Sequence[CompositeShare]) -> int:
    """Everything the full set of shares reveals: ``d^y mod n``."""
    first = _check_group(shares)
    n = first.modulus.value
    acc = 1
    for s in shares:
        acc = acc * s.value % n
    return acc


def recover_composite(shares: Sequence[CompositeShare], key: CompositeKey) -> int:
    if shares and shares[0].modulus.value != key.n:
        raise KeyMismatch("shares were not produced under this key")
    return pow(combine_to_ciphertext(shares), key.y_inv, key.n)


def expand_coefficients_composite(shares: Sequence[CompositeShare]) -> CoefficientSet:
    return expand_coefficients(shares)

"""Modular arithmetic over Z_p and Z_n on plain Python integers.

Python ints are unbounded, so the same code path serves p=31 and 2048-bit
composites. Values are immutable; every operation returns a new element.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Protocol

__all__ = [
    "FieldElement",
    "Modulus",
    "ModulusMismatch",
    "NotInvertible",
    "RandomSource",
    "default_rng",
    "is_probable_prime",
    "mod_add",
    "mod_inv",
    "mod_mul",
    "mod_pow",
    "sample_uniform",
]

PRIME = "prime"
COMPOSITE = "composite"

# Deterministic Miller-Rabin witnesses: correct for every v < 3.3e24.
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DETERMINISTIC_LIMIT = 3317044064679887385961981


class RandomSource(Protocol):
    def getrandbits(self, k: int) -> int: ...


def default_rng() -> RandomSource:
    return random.SystemRandom()


class ModulusMismatch(ValueError):
    pass


class NotInvertible(ArithmeticError):
    """Raised when an element shares a factor with the modulus.

    On a composite modulus ``gcd`` is a nontrivial factor of it, so callers
    must treat this as a leak rather than an ordinary failure.
    """

    def __init__(self, value: int, modulus: int, gcd: int):
        self.value = value
        self.modulus = modulus
        self.gcd = gcd
        super().__init__(f"{value} is not invertible mod {modulus} (gcd={gcd})")


def _miller_rabin_round(v: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, v)
    if x == 1 or x == v - 1:
        return True
    for _ in range(s - 1):
        x = x * x % v
        if x == v - 1:
            return True
    return False


def is_probable_prime(v: int, rounds: int = 64, rng: RandomSource | None = None) -> bool:
    """Miller-Rabin test, deterministic below 3.3e24 and randomized above."""
    if v < 2:
        raise ValueError(f"primality is only defined here for v >= 2, got {v}")
    for b in _DETERMINISTIC_BASES:
        if v == b:
            return True
        if v % b == 0:
            return False
    d, s = v - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_miller_rabin_round(v, d, s, a) for a in _DETERMINISTIC_BASES):
        return False
    if v < _DETERMINISTIC_LIMIT:
        return True
    rng = rng or default_rng()
    for _ in range(max(0, rounds - len(_DETERMINISTIC_BASES))):
        if not _miller_rabin_round(v, d, s, sample_uniform(2, v - 2, rng)):
            return False
    return True


def sample_uniform(lo: int, hi: int, rng: RandomSource) -> int:
    """Draw uniformly from ``[lo, hi]`` by rejection on ``getrandbits``."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    span = hi - lo + 1
    if span == 1:
        return lo
    bits = (span - 1).bit_length()
    while True:
        v = rng.getrandbits(bits)
        if v < span:
            return lo + v


@dataclass(frozen=True)
class Modulus:
    value: int
    kind: str = PRIME

    def __post_init__(self):
        if self.kind not in (PRIME, COMPOSITE):
            raise ValueError(f"unknown modulus kind {self.kind!r}")
        if self.value < 3 or self.value % 2 == 0:
            raise ValueError(f"modulus must be odd and >= 3, got {self.value}")
        if (self.kind == PRIME) != is_probable_prime(self.value):
            raise ValueError(f"{self.value} is not {'a prime' if self.kind == PRIME else 'composite'}")

    @classmethod
    def prime(cls, value: int) -> Modulus:
        return cls(value, PRIME)

    @classmethod
    def composite(cls, value: int) -> Modulus:
        return cls(value, COMPOSITE)

    @property
    def is_prime(self) -> bool:
        return self.kind == PRIME

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.value, self)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: Modulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.value:
            raise ValueError(f"{self.value} out of range for modulus {self.modulus.value}")

    def __int__(self) -> int:
        return self.value

    def __add__(self, other: FieldElement) -> FieldElement:
        return mod_add(self, other)

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mod_mul(self, other)

    def __pow__(self, exp: int) -> FieldElement:
        return mod_pow(self, exp)

    def inverse(self) -> FieldElement:
        return mod_inv(self)


def _check_same(a: FieldElement, b: FieldElement) -> Modulus:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"moduli differ: {a.modulus.value} vs {b.modulus.value}")
    return a.modulus


def mod_add(a: FieldElement, b: FieldElement) -> FieldElement:
    m = _check_same(a, b)
    return FieldElement((a.value + b.value) % m.value, m)


def mod_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    m = _check_same(a, b)
    return FieldElement(a.value * b.value % m.value, m)


def inverse_mod(value: int, modulus: int) -> int:
    """Extended-Euclid inverse on bare ints; raises NotInvertible with the gcd."""
    old_r, r = value % modulus, modulus
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise NotInvertible(value, modulus, math.gcd(value, modulus))
    return old_s % modulus


def mod_inv(a: FieldElement) -> FieldElement:
    return FieldElement(inverse_mod(a.value, a.modulus.value), a.modulus)


def mod_pow(base: FieldElement, exp: int) -> FieldElement:
    """Left-to-right square-and-multiply."""
    if exp < 0:
        raise ValueError("negative exponents are not supported; invert first")
    m = base.modulus.value
    result = 1 % m
    for bit in bin(exp)[2:]:
        result = result * result % m
        if bit == "1":
            result = result * base.value % m
    return FieldElement(result, base.modulus)

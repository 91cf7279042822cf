"""k-of-k partitioning of a field element into polynomial roots.

A datum d is split into k nonzero roots whose product is d mod p. The
monic polynomial with those roots has constant term (-1)^k * d, so the
roots can also be published next to the polynomial's middle coefficients,
and any single root plus those coefficients recovers d.
"""

from __future__ import annotations

import math
import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import product

from .field import Modulus, NotInvertible, RandomSource, default_rng, inverse_mod, sample_uniform

__all__ = [
    "AllZeroCoefficients",
    "BruteForceCount",
    "CoefficientSet",
    "DuplicateIndex",
    "InvalidK",
    "MixedGroups",
    "PartitionError",
    "RootShare",
    "TooLarge",
    "WrongShareCount",
    "ZeroDatum",
    "brute_force_root_multiset_count",
    "coefficient_space_lower_bound",
    "combine_k",
    "evaluate",
    "expand_coefficients",
    "poly_from_roots",
    "recover_from_root_and_coeffs",
    "split_k",
    "verify_share",
]

GROUP_ID_BYTES = 16
MAX_DEGENERATE_RETRIES = 16


class PartitionError(ValueError):
    pass


class InvalidK(PartitionError):
    pass


class ZeroDatum(PartitionError):
    pass


class WrongShareCount(PartitionError):
    pass


class MixedGroups(PartitionError):
    pass


class DuplicateIndex(PartitionError):
    pass


class AllZeroCoefficients(PartitionError):
    pass


class TooLarge(PartitionError):
    pass


def new_group_id(rng: RandomSource | None = None) -> bytes:
    if rng is None:
        return os.urandom(GROUP_ID_BYTES)
    return rng.getrandbits(8 * GROUP_ID_BYTES).to_bytes(GROUP_ID_BYTES, "big")


@dataclass(frozen=True)
class RootShare:
    """One root of the split polynomial.

    ``value`` is always a unit mod the modulus: in [1, p-1] for a prime,
    coprime to n for a composite.
    """

    group_id: bytes
    index: int
    k: int
    value: int
    modulus: Modulus

    def __post_init__(self):
        if self.k < 2:
            raise InvalidK(f"k must be >= 2, got {self.k}")
        if not 1 <= self.index <= self.k:
            raise ValueError(f"share index {self.index} outside [1, {self.k}]")
        if not 1 <= self.value < self.modulus.value:
            raise ValueError(f"root {self.value} outside [1, {self.modulus.value - 1}]")
        if math.gcd(self.value, self.modulus.value) != 1:
            raise NotInvertible(self.value, self.modulus.value, math.gcd(self.value, self.modulus.value))


@dataclass(frozen=True)
class CoefficientSet:
    """Monic degree-k polynomial ``x^k + a[k-2] x^(k-1) + ... + a[0] x + constant_term``.

    ``a[i-1]`` is the coefficient of ``x^i``.
    """

    k: int
    a: tuple[int, ...]
    constant_term: int
    modulus: Modulus = field(compare=True)

    def __post_init__(self):
        if len(self.a) != self.k - 1:
            raise ValueError(f"expected {self.k - 1} middle coefficients, got {len(self.a)}")
        m = self.modulus.value
        if not all(0 <= c < m for c in (*self.a, self.constant_term)):
            raise ValueError("coefficient out of range")

    def as_list(self) -> list[int]:
        """Low-to-high coefficient list including the leading 1."""
        return [self.constant_term, *self.a, 1]


def poly_from_roots(roots: Iterable[int], m: int) -> list[int]:
    """Expand prod(x - r) mod m; returns coefficients low to high."""
    poly = [1]
    for r in roots:
        shifted = [0, *poly]
        for i, c in enumerate(poly):
            shifted[i] = (shifted[i] - r * c) % m
        poly = shifted
    return poly


def evaluate(coeffs: Sequence[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % m
    return acc


def _check_k(k: int, modulus: Modulus):
    if k < 2 or k >= modulus.value:
        raise InvalidK(f"k must satisfy 2 <= k < {modulus.value}, got {k}")


def _check_datum(d: int, modulus: Modulus):
    if d % modulus.value == 0:
        raise ZeroDatum("the datum must be nonzero mod the modulus")
    if not 0 < d < modulus.value:
        raise ValueError(f"datum {d} outside [1, {modulus.value - 1}]")


def _draw_unit(m: int, rng: RandomSource) -> int:
    while True:
        r = sample_uniform(1, m - 1, rng)
        if math.gcd(r, m) == 1:
            return r


def _split_target(
    target: int,
    k: int,
    modulus: Modulus,
    rng: RandomSource,
    fixed_roots: Sequence[int],
) -> list[int]:
    m = modulus.value
    if len(fixed_roots) > k - 1:
        raise ValueError(f"at most {k - 1} roots can be fixed, got {len(fixed_roots)}")
    roots = [r % m for r in fixed_roots]
    for r in roots:
        if r == 0 or math.gcd(r, m) != 1:
            raise NotInvertible(r, m, math.gcd(r, m))
    while len(roots) < k - 1:
        roots.append(_draw_unit(m, rng))
    prefix = 1
    for r in roots:
        prefix = prefix * r % m
    roots.append(target * inverse_mod(prefix, m) % m)
    return roots


def _is_degenerate(roots: Sequence[int], m: int) -> bool:
    return not any(poly_from_roots(roots, m)[1:-1])


def _as_shares(roots: Sequence[int], k: int, modulus: Modulus, group_id: bytes) -> list[RootShare]:
    return [RootShare(group_id, i, k, r, modulus) for i, r in enumerate(roots, start=1)]


def split_k(
    d: int,
    k: int,
    modulus: Modulus,
    rng: RandomSource | None = None,
    *,
    fixed_roots: Sequence[int] = (),
    group_id: bytes | None = None,
    reject_degenerate: bool = False,
) -> list[RootShare]:
    """Split ``d`` into ``k`` roots whose product is ``d`` mod p.

    The first k-1 roots are uniform on [1, p-1] (or taken from
    ``fixed_roots``); the last one is ``d`` times the inverse of their product.

    With ``reject_degenerate`` the split is redrawn (up to 16 times) whenever
    every middle coefficient of the expanded polynomial vanishes. That keeps
    the published coefficients away from ``x^k +- d`` but conditions the first
    k-1 roots on d, so the default leaves it off and the root shares stay
    exactly independent of d.
    """
    if not modulus.is_prime:
        raise ValueError("split_k needs a prime modulus; use composite.split_composite")
    _check_k(k, modulus)
    _check_datum(d, modulus)
    rng = rng or default_rng()
    group_id = group_id if group_id is not None else new_group_id(rng)
    attempts = MAX_DEGENERATE_RETRIES + 1 if reject_degenerate and not fixed_roots else 1
    for _ in range(attempts):
        roots = _split_target(d, k, modulus, rng, fixed_roots)
        if not reject_degenerate or not _is_degenerate(roots, modulus.value):
            return _as_shares(roots, k, modulus, group_id)
    raise AllZeroCoefficients(f"every split of {d} drew all-zero middle coefficients")


def _check_group(shares: Sequence[RootShare]) -> RootShare:
    if not shares:
        raise WrongShareCount("no shares given")
    first = shares[0]
    for s in shares[1:]:
        if (s.group_id, s.modulus, s.k) != (first.group_id, first.modulus, first.k):
            raise MixedGroups("shares come from different groups, moduli or k")
    if len(shares) != first.k:
        raise WrongShareCount(f"need exactly {first.k} shares, got {len(shares)}")
    if len({s.index for s in shares}) != len(shares):
        raise DuplicateIndex("two shares carry the same index")
    return first


def combine_k(shares: Sequence[RootShare]) -> int:
    first = _check_group(shares)
    m = first.modulus.value
    acc = 1
    for s in shares:
        acc = acc * s.value % m
    return acc


def expand_coefficients(roots: Sequence[RootShare]) -> CoefficientSet:
    if not roots:
        raise WrongShareCount("no roots given")
    modulus = roots[0].modulus
    if any(r.modulus != modulus for r in roots):
        raise MixedGroups("roots use different moduli")
    k = len(roots)
    if k < 2:
        raise InvalidK("a polynomial needs at least two roots here")
    poly = poly_from_roots((r.value for r in roots), modulus.value)
    middle = tuple(poly[1:-1])
    if not any(middle):
        raise AllZeroCoefficients("all middle coefficients vanish; re-randomize the split")
    return CoefficientSet(k, middle, poly[0], modulus)


def _leading_sum(x: int, coeffs: CoefficientSet) -> int:
    m = coeffs.modulus.value
    return evaluate([0, *coeffs.a, 1], x, m)


def recover_from_root_and_coeffs(root: RootShare, coeffs: CoefficientSet) -> int:
    """Recover d from any one root and the middle coefficients.

    The constant term is not read: it is rebuilt as the value that makes
    ``root`` a zero of the polynomial.
    """
    if root.modulus != coeffs.modulus:
        raise MixedGroups("root and coefficients use different moduli")
    if coeffs.k < 2:
        raise InvalidK("degree must be >= 2")
    m = coeffs.modulus.value
    a0 = -_leading_sum(root.value, coeffs) % m
    return a0 if coeffs.k % 2 == 0 else -a0 % m


def verify_share(candidate: RootShare, coeffs: CoefficientSet) -> bool:
    if candidate.modulus != coeffs.modulus:
        raise MixedGroups("candidate and coefficients use different moduli")
    return evaluate(coeffs.as_list(), candidate.value, coeffs.modulus.value) == 0


def coefficient_space_lower_bound(p: int, k: int) -> tuple[int, int]:
    """Return ``(ceil(p^(k-1) / (k-1)!), C(p+k-2, k-1))`` exactly."""
    if p < 2 or k < 2:
        raise ValueError("need p >= 2 and k >= 2")
    num, den = p ** (k - 1), math.factorial(k - 1)
    return -(-num // den), math.comb(p + k - 2, k - 1)


@dataclass(frozen=True)
class BruteForceCount:
    tuples: int
    coefficient_sets: int
    root_multisets: int
    free_root_multisets: int
    degenerate_tuples: int


def brute_force_root_multiset_count(p: int, k: int, d: int) -> BruteForceCount:
    """Enumerate every choice of the first k-1 roots for a fixed datum.

    ``coefficient_sets`` counts distinct expanded polynomials (all-zero
    middle coefficients included), ``root_multisets`` distinct full root
    multisets, ``free_root_multisets`` distinct multisets of the k-1 freely
    chosen roots, and ``degenerate_tuples`` the choices whose middle
    coefficients all vanish.
    """
    if p > 13 or k > 4:
        raise TooLarge(f"enumeration limited to p <= 13 and k <= 4, got p={p}, k={k}")
    modulus = Modulus.prime(p)
    _check_k(k, modulus)
    _check_datum(d, modulus)
    coeffs, multisets, free = set(), set(), set()
    tuples = degenerate = 0
    for prefix in product(range(1, p), repeat=k - 1):
        tuples += 1
        roots = _split_target(d, k, modulus, None, prefix)
        poly = tuple(poly_from_roots(roots, p))
        coeffs.add(poly)
        multisets.add(tuple(sorted(roots)))
        free.add(tuple(sorted(prefix)))
        if not any(poly[1:-1]):
            degenerate += 1
    return BruteForceCount(tuples, len(coeffs), len(multisets), len(free), degenerate)

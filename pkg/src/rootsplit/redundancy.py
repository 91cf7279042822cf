"""Extend k root shares to n shares, any k of which rebuild the roots.

Each redundant share is a row ``(a_1, ..., a_k)`` of an expansion matrix
together with the dot product ``c = sum(a_j * r_j) mod p``. Shares carry
their own row, so a reconstructor needs nothing but k of them.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .field import Modulus, RandomSource, default_rng, inverse_mod, sample_uniform
from .partition import DuplicateIndex, MixedGroups, PartitionError, RootShare, WrongShareCount

__all__ = [
    "RANDOM",
    "STRUCTURED",
    "DimensionMismatch",
    "ExpansionMatrix",
    "RedundantShare",
    "SingularSubset",
    "TooManyRows",
    "add_share",
    "determinant",
    "expand",
    "make_expansion_matrix",
    "reconstruct_roots",
    "solve",
    "structured_row",
]

STRUCTURED = "structured"
RANDOM = "random"


class DimensionMismatch(PartitionError):
    pass


class SingularSubset(PartitionError):
    pass


class TooManyRows(PartitionError):
    pass


@dataclass(frozen=True)
class RedundantShare:
    group_id: bytes
    row_index: int
    k: int
    coeff_row: tuple[int, ...]
    combined: int
    modulus: Modulus

    def __post_init__(self):
        if self.row_index < 1:
            raise ValueError("row_index starts at 1")
        if len(self.coeff_row) != self.k:
            raise DimensionMismatch(f"row has {len(self.coeff_row)} entries, expected {self.k}")
        m = self.modulus.value
        if not all(0 <= a < m for a in (*self.coeff_row, self.combined)):
            raise ValueError("entry out of range")
        if not any(self.coeff_row):
            raise ValueError("coefficient row is all zero")


@dataclass(frozen=True)
class ExpansionMatrix:
    entries: tuple[tuple[int, ...], ...]
    modulus: Modulus
    mode: str = STRUCTURED

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])


def structured_row(index: int, k: int, m: int) -> tuple[int, ...]:
    """Power-basis row ``(1, b, b^2, ..., b^(k-1))`` at evaluation point ``b = index``."""
    return tuple(pow(index, j, m) for j in range(k))


def _random_row(k: int, m: int, rng: RandomSource) -> tuple[int, ...]:
    while True:
        row = tuple(sample_uniform(0, m - 1, rng) for _ in range(k))
        if any(row):
            return row


def rank(rows: Sequence[Sequence[int]], m: int) -> int:
    """Rank over Z_m for prime m."""
    work = [list(r) for r in rows]
    r = 0
    cols = len(work[0]) if work else 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(work)) if work[i][c] % m), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = inverse_mod(work[r][c], m)
        for i in range(r + 1, len(work)):
            f = work[i][c] * inv % m
            if f:
                work[i] = [(x - f * y) % m for x, y in zip(work[i], work[r])]
        r += 1
    return r


def determinant(rows: Sequence[Sequence[int]], m: int) -> int:
    """Determinant mod prime m by elimination."""
    work = [list(r) for r in rows]
    n = len(work)
    det = 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if work[i][c] % m), None)
        if pivot is None:
            return 0
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            det = -det
        det = det * work[c][c] % m
        inv = inverse_mod(work[c][c], m)
        for i in range(c + 1, n):
            f = work[i][c] * inv % m
            if f:
                work[i] = [(x - f * y) % m for x, y in zip(work[i], work[c])]
    return det % m


def make_expansion_matrix(
    n: int,
    k: int,
    modulus: Modulus,
    mode: str = STRUCTURED,
    rng: RandomSource | None = None,
) -> ExpansionMatrix:
    """Build an n x k expansion matrix of rank k.

    Structured rows use evaluation points 1..n, so every k-row subset is a
    Vandermonde matrix and therefore invertible. Random matrices are redrawn
    until they have full column rank, which says nothing about subsets.
    """
    if not n >= k >= 2:
        raise DimensionMismatch(f"need n >= k >= 2, got n={n}, k={k}")
    m = modulus.value
    if mode == STRUCTURED:
        if n >= m:
            raise TooManyRows(f"structured mode needs n < p, got n={n}, p={m}")
        entries = tuple(structured_row(i, k, m) for i in range(1, n + 1))
    elif mode == RANDOM:
        rng = rng or default_rng()
        while True:
            entries = tuple(_random_row(k, m, rng) for _ in range(n))
            if rank(entries, m) == k:
                break
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ExpansionMatrix(entries, modulus, mode)


def _dot(row: Sequence[int], roots: Sequence[int], m: int) -> int:
    return sum(a * r for a, r in zip(row, roots)) % m


def _root_values(roots: Sequence[RootShare]) -> tuple[list[int], RootShare]:
    if not roots:
        raise WrongShareCount("no roots given")
    first = roots[0]
    if any((r.group_id, r.modulus, r.k) != (first.group_id, first.modulus, first.k) for r in roots):
        raise MixedGroups("roots come from different groups")
    if len(roots) != first.k:
        raise WrongShareCount(f"need all {first.k} roots, got {len(roots)}")
    ordered = sorted(roots, key=lambda r: r.index)
    return [r.value for r in ordered], first


def expand(roots: Sequence[RootShare], matrix: ExpansionMatrix) -> list[RedundantShare]:
    values, first = _root_values(roots)
    if matrix.cols != first.k:
        raise DimensionMismatch(f"matrix has {matrix.cols} columns, roots number {first.k}")
    if matrix.modulus != first.modulus:
        raise MixedGroups("matrix and roots use different moduli")
    m = first.modulus.value
    return [
        RedundantShare(first.group_id, i, first.k, row, _dot(row, values, m), first.modulus)
        for i, row in enumerate(matrix.entries, start=1)
    ]


def add_share(
    roots: Sequence[RootShare],
    row_index: int,
    mode: str = STRUCTURED,
    rng: RandomSource | None = None,
) -> RedundantShare:
    """Issue one more share for the group; existing shares are untouched."""
    values, first = _root_values(roots)
    m = first.modulus.value
    if mode == STRUCTURED:
        if not 1 <= row_index < m:
            raise TooManyRows(f"structured row index must lie in [1, {m - 1}]")
        row = structured_row(row_index, first.k, m)
    elif mode == RANDOM:
        row = _random_row(first.k, m, rng or default_rng())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return RedundantShare(first.group_id, row_index, first.k, row, _dot(row, values, m), first.modulus)


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], m: int) -> list[int]:
    """Solve the square system ``rows @ x = rhs`` mod prime m.

    Pivot is the first row at or below the diagonal with a nonzero entry;
    rows are only normalized during back-substitution.
    """
    n = len(rows)
    aug = [[*(v % m for v in row), b % m] for row, b in zip(rows, rhs)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c]), None)
        if pivot is None:
            raise SingularSubset("the chosen rows are linearly dependent")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = inverse_mod(aug[c][c], m)
        for i in range(c + 1, n):
            f = aug[i][c] * inv % m
            if f:
                aug[i] = [(x - f * y) % m for x, y in zip(aug[i], aug[c])]
    x = [0] * n
    for c in reversed(range(n)):
        acc = aug[c][n] - sum(aug[c][j] * x[j] for j in range(c + 1, n))
        x[c] = acc * inverse_mod(aug[c][c], m) % m
    return x


def reconstruct_roots(shares: Sequence[RedundantShare]) -> list[RootShare]:
    if not shares:
        raise WrongShareCount("no shares given")
    first = shares[0]
    if any((s.group_id, s.modulus, s.k) != (first.group_id, first.modulus, first.k) for s in shares):
        raise MixedGroups("shares come from different groups")
    if len(shares) != first.k:
        raise WrongShareCount(f"need exactly {first.k} shares, got {len(shares)}")
    if len({s.row_index for s in shares}) != len(shares):
        raise DuplicateIndex("two shares carry the same row index")
    m = first.modulus.value
    values = solve([s.coeff_row for s in shares], [s.combined for s in shares], m)
    return [RootShare(first.group_id, j, first.k, v, first.modulus) for j, v in enumerate(values, start=1)]

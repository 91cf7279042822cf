"""Whole-file split and join on top of the per-element schemes."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Sequence

from .codec import (
    COMPOSITE,
    DEFAULT_PRIME,
    REDUNDANT,
    ROOT_K,
    ShareEnvelope,
    chunk_bytes,
    payload_from_values,
    unchunk,
)
from .composite import CompositeKey, KeyMismatch, combine_to_ciphertext, split_composite
from .field import Modulus, RandomSource, default_rng
from .partition import MixedGroups, PartitionError, RootShare, combine_k, new_group_id, split_k
from .redundancy import (
    STRUCTURED,
    RedundantShare,
    SingularSubset,
    expand,
    make_expansion_matrix,
    reconstruct_roots,
)

__all__ = ["Unrecoverable", "default_modulus", "join_ciphertext", "join_data", "split_data"]

log = logging.getLogger(__name__)

_default_modulus: Modulus | None = None


class Unrecoverable(PartitionError):
    def __init__(self, shares_available: int, shares_needed: int):
        self.shares_available = shares_available
        self.shares_needed = shares_needed
        super().__init__(f"have {shares_available} usable shares, need {shares_needed}")


def default_modulus() -> Modulus:
    global _default_modulus
    if _default_modulus is None:
        _default_modulus = Modulus.prime(DEFAULT_PRIME)
    return _default_modulus


def split_data(
    data: bytes,
    k: int,
    n: int = 0,
    *,
    modulus: Modulus | None = None,
    mode: str = STRUCTURED,
    key: CompositeKey | None = None,
    rng: RandomSource | None = None,
    group_id: bytes | None = None,
) -> list[ShareEnvelope]:
    """Split a byte string into share envelopes.

    ``key`` selects the composite scheme, ``n > 0`` the redundant k-of-n
    scheme, otherwise plain k-of-k roots. Every chunk is split independently.
    """
    rng = rng or default_rng()
    group_id = group_id if group_id is not None else new_group_id(rng)
    if key is not None:
        if n:
            raise ValueError("the composite scheme has no redundant variant")
        modulus = key.modulus
    else:
        modulus = modulus or default_modulus()
    payload = chunk_bytes(data, modulus)
    length = payload.original_length

    if key is not None:
        per_chunk = [split_composite(d, k, key, rng, group_id=group_id) for d in payload.chunks]
        return _root_envelopes(COMPOSITE, per_chunk, k, modulus, group_id, length)
    if not n:
        per_chunk = [split_k(d, k, modulus, rng, group_id=group_id) for d in payload.chunks]
        return _root_envelopes(ROOT_K, per_chunk, k, modulus, group_id, length)

    matrix = make_expansion_matrix(n, k, modulus, mode, rng)
    rows: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for d in payload.chunks:
        roots = split_k(d, k, modulus, rng, group_id=group_id)
        if mode != STRUCTURED:
            matrix = make_expansion_matrix(n, k, modulus, mode, rng)
        for i, share in enumerate(expand(roots, matrix)):
            rows[i].append((*share.coeff_row, share.combined))
    return [
        ShareEnvelope(REDUNDANT, modulus.value, k, n, group_id, i + 1, length, tuple(rows[i]))
        for i in range(n)
    ]


def _root_envelopes(scheme, per_chunk, k, modulus, group_id, length) -> list[ShareEnvelope]:
    return [
        ShareEnvelope(scheme, modulus.value, k, 0, group_id, i + 1, length, tuple(c[i].value for c in per_chunk))
        for i in range(k)
    ]


def _check_compatible(envs: Sequence[ShareEnvelope]) -> ShareEnvelope:
    if not envs:
        raise Unrecoverable(0, 0)
    first = envs[0]
    head = (first.scheme, first.modulus, first.k, first.n, first.group_id, first.original_length, first.chunk_count)
    for e in envs[1:]:
        if (e.scheme, e.modulus, e.k, e.n, e.group_id, e.original_length, e.chunk_count) != head:
            raise MixedGroups("share files belong to different groups or disagree on their headers")
    return first


def _distinct(envs: Iterable[ShareEnvelope]) -> list[ShareEnvelope]:
    seen: dict[int, ShareEnvelope] = {}
    for e in envs:
        seen.setdefault(e.share_index, e)
    return [seen[i] for i in sorted(seen)]


def _modulus_for(first: ShareEnvelope) -> Modulus:
    if first.scheme == COMPOSITE:
        return Modulus.composite(first.modulus)
    if first.modulus == DEFAULT_PRIME:
        return default_modulus()
    return Modulus.prime(first.modulus)


def _chunk_roots(envs: Sequence[ShareEnvelope], modulus: Modulus, c: int) -> list[RootShare]:
    first = envs[0]
    return [RootShare(first.group_id, e.share_index, first.k, e.values[c], modulus) for e in envs]


def _redundant_chunk(envs: Sequence[ShareEnvelope], modulus: Modulus, c: int) -> list[RootShare]:
    first = envs[0]
    shares = [
        RedundantShare(first.group_id, e.share_index, first.k, tuple(e.values[c][:-1]), e.values[c][-1], modulus)
        for e in envs
    ]
    for subset in itertools.combinations(shares, first.k):
        try:
            return reconstruct_roots(list(subset))
        except SingularSubset:
            log.debug("singular share subset %s", [s.row_index for s in subset])
    raise SingularSubset("no invertible subset among the available shares")


def _gather(envs: Sequence[ShareEnvelope]) -> tuple[ShareEnvelope, list[ShareEnvelope], Modulus]:
    first = _check_compatible(envs)
    usable = _distinct(envs)
    if len(usable) < first.k:
        raise Unrecoverable(len(usable), first.k)
    return first, usable, _modulus_for(first)


def join_ciphertext(envs: Sequence[ShareEnvelope]) -> list[int]:
    """Per-chunk products of composite shares: ``d^y mod n`` and nothing more."""
    first, usable, modulus = _gather(envs)
    if first.scheme != COMPOSITE:
        raise ValueError("join_ciphertext only applies to composite shares")
    return [combine_to_ciphertext(_chunk_roots(usable, modulus, c)) for c in range(first.chunk_count)]


def join_data(envs: Sequence[ShareEnvelope], key: CompositeKey | None = None) -> bytes:
    """Rebuild the original bytes; the scheme comes from the envelope headers."""
    first, usable, modulus = _gather(envs)
    chunks = []
    if first.scheme == COMPOSITE:
        if key is None:
            raise KeyMismatch("composite shares need the key to recover data")
        if key.n != first.modulus:
            raise KeyMismatch("shares were not produced under this key")
        chunks = [pow(c, key.y_inv, key.n) for c in join_ciphertext(usable)]
    elif first.scheme == ROOT_K:
        chunks = [combine_k(_chunk_roots(usable, modulus, c)) for c in range(first.chunk_count)]
    else:
        chunks = [combine_k(_redundant_chunk(usable, modulus, c)) for c in range(first.chunk_count)]
    return unchunk(payload_from_values(chunks, first.original_length, modulus))

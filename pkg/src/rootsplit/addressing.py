"""Deterministic sensor-ID sequences for placing shares.

The seed is the SHA-256 of the data being stored and stays with the owner.
Draw i is the first 8 bytes of ``SHA-256(seed || i)`` (i as 8-byte
big-endian) read as a big-endian integer, reduced mod the network size;
repeats are skipped. Any language with SHA-256 reproduces the sequence.
"""

from __future__ import annotations

import hashlib

__all__ = ["CountExceedsNetwork", "derive_seed", "sensor_sequence"]

SEED_BYTES = 32


class CountExceedsNetwork(ValueError):
    pass


def derive_seed(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def _draw(seed: bytes, i: int, network_size: int) -> int:
    digest = hashlib.sha256(seed + i.to_bytes(8, "big")).digest()
    return int.from_bytes(digest[:8], "big") % network_size


def sensor_sequence(seed: bytes, count: int, network_size: int) -> list[int]:
    """First ``count`` distinct node IDs in ``[0, network_size)`` for this seed.

    Prefix-stable: asking for more IDs only appends to a shorter answer.
    """
    if len(seed) != SEED_BYTES:
        raise ValueError(f"seed must be {SEED_BYTES} bytes")
    if network_size < 1:
        raise ValueError("network must have at least one node")
    if not 0 <= count <= network_size:
        raise CountExceedsNetwork(f"cannot pick {count} distinct nodes out of {network_size}")
    seen: set[int] = set()
    out: list[int] = []
    i = 0
    while len(out) < count:
        node = _draw(seed, i, network_size)
        if node not in seen:
            seen.add(node)
            out.append(node)
        i += 1
    return out

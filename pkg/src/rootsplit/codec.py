"""Byte streams to field elements, and the on-disk share and key formats.

Share file layout (all integers big-endian)::

    magic          4   b"RSH1"
    version        1   1
    scheme         1   1=root_k, 2=redundant, 3=composite
    modulus        var uint16 length + minimal unsigned bytes
    k              2
    n              2   0 unless scheme=redundant
    group_id       16
    share_index    2
    chunk_count    4
    original_len   8
    payload        per chunk: one integer (root_k, composite) or
                   k row entries then c (redundant), each length-prefixed

Integers use the same length-prefixed form as the modulus: a uint16 byte
count followed by the value with no leading zero bytes (zero is empty).
"""

from __future__ import annotations

import struct
from collections.abc import Sequence
from dataclasses import dataclass

from .field import Modulus

__all__ = [
    "COMPOSITE",
    "DEFAULT_PRIME",
    "REDUNDANT",
    "ROOT_K",
    "BadMagic",
    "BadVersion",
    "ChunkOutOfRange",
    "ChunkedPayload",
    "CodecError",
    "FieldOutOfRange",
    "ModulusTooSmall",
    "ShareEnvelope",
    "TruncatedFile",
    "chunk_bytes",
    "chunk_width",
    "decode_key_file",
    "decode_share_file",
    "encode_key_file",
    "encode_share_file",
    "unchunk",
]

DEFAULT_PRIME = 2**255 - 19

MAGIC = b"RSH1"
KEY_MAGIC = b"RSK1"
VERSION = 1

ROOT_K = 1
REDUNDANT = 2
COMPOSITE = 3
SCHEMES = {ROOT_K: "root_k", REDUNDANT: "redundant", COMPOSITE: "composite"}

_HEADER = struct.Struct(">HH16sHIQ")


class CodecError(ValueError):
    pass


class ModulusTooSmall(CodecError):
    pass


class ChunkOutOfRange(CodecError):
    pass


class BadMagic(CodecError):
    pass


class BadVersion(CodecError):
    pass


class TruncatedFile(CodecError):
    pass


class FieldOutOfRange(CodecError):
    pass


def chunk_width(modulus: int) -> int:
    """Largest m with 2^(8m) <= modulus - 1, so offset chunks stay below the modulus."""
    return ((modulus - 1).bit_length() - 1) // 8


@dataclass(frozen=True)
class ChunkedPayload:
    chunks: tuple[int, ...]
    original_length: int
    chunk_bytes: int
    modulus: Modulus


def chunk_bytes(data: bytes, modulus: Modulus) -> ChunkedPayload:
    """Cut ``data`` into m-byte big-endian groups, mapping each value v to v+1."""
    m = chunk_width(modulus.value)
    if m == 0:
        raise ModulusTooSmall(f"modulus {modulus.value} cannot hold one byte per chunk")
    chunks = []
    for i in range(0, len(data), m):
        piece = data[i : i + m].ljust(m, b"\0")
        chunks.append(int.from_bytes(piece, "big") + 1)
    return ChunkedPayload(tuple(chunks), len(data), m, modulus)


def unchunk(payload: ChunkedPayload) -> bytes:
    m = payload.chunk_bytes
    top = 1 << (8 * m)
    out = bytearray()
    for c in payload.chunks:
        if not 1 <= c <= top:
            raise ChunkOutOfRange(f"chunk value {c} outside [1, 2^{8 * m}]")
        out += (c - 1).to_bytes(m, "big")
    if len(out) < payload.original_length:
        raise ChunkOutOfRange("too few chunks for the recorded length")
    return bytes(out[: payload.original_length])


@dataclass(frozen=True)
class ShareEnvelope:
    """One share file. ``values`` holds one entry per chunk.

    For root_k and composite shares each entry is an int; for redundant
    shares it is a tuple of the k row entries followed by c.
    """

    scheme: int
    modulus: int
    k: int
    n: int
    group_id: bytes
    share_index: int
    original_length: int
    values: tuple

    @property
    def chunk_count(self) -> int:
        return len(self.values)

    @property
    def scheme_name(self) -> str:
        return SCHEMES[self.scheme]


def _put_int(out: bytearray, v: int):
    if v < 0:
        raise FieldOutOfRange("negative integer")
    raw = v.to_bytes((v.bit_length() + 7) // 8, "big")
    if len(raw) > 0xFFFF:
        raise FieldOutOfRange("integer too long to encode")
    out += struct.pack(">H", len(raw)) + raw


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedFile(f"need {n} bytes at offset {self.pos}, file has {len(self.data)}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def int(self) -> int:
        (length,) = struct.unpack(">H", self.take(2))
        raw = self.take(length)
        if raw[:1] == b"\0":
            raise FieldOutOfRange(f"non-minimal integer encoding at offset {self.pos - length}")
        return int.from_bytes(raw, "big")

    def done(self):
        if self.pos != len(self.data):
            raise FieldOutOfRange(f"{len(self.data) - self.pos} trailing bytes")


def _validate(env: ShareEnvelope):
    if env.scheme not in SCHEMES:
        raise FieldOutOfRange(f"unknown scheme {env.scheme}")
    if env.modulus < 3:
        raise FieldOutOfRange("modulus must be >= 3")
    if not 2 <= env.k <= 0xFFFF:
        raise FieldOutOfRange(f"k={env.k} out of range")
    if env.scheme == REDUNDANT:
        if not env.k <= env.n <= 0xFFFF:
            raise FieldOutOfRange(f"n={env.n} must satisfy k <= n")
    elif env.n != 0:
        raise FieldOutOfRange("n must be 0 for root shares")
    if len(env.group_id) != 16:
        raise FieldOutOfRange("group_id must be 16 bytes")
    top = env.k if env.scheme != REDUNDANT else 0xFFFF
    if not 1 <= env.share_index <= top:
        raise FieldOutOfRange(f"share_index {env.share_index} out of range")
    if not 0 <= env.original_length < 2**64:
        raise FieldOutOfRange("original_length out of range")
    if len(env.values) >= 2**32:
        raise FieldOutOfRange("too many chunks")
    m = env.modulus
    for v in env.values:
        if env.scheme == REDUNDANT:
            if len(v) != env.k + 1 or not all(0 <= x < m for x in v) or not any(v[:-1]):
                raise FieldOutOfRange("bad redundant share entry")
        elif not 1 <= v < m:
            raise FieldOutOfRange(f"root value {v} outside [1, {m - 1}]")


def encode_share_file(env: ShareEnvelope) -> bytes:
    _validate(env)
    out = bytearray(MAGIC)
    out += bytes([VERSION, env.scheme])
    _put_int(out, env.modulus)
    out += _HEADER.pack(env.k, env.n, env.group_id, env.share_index, env.chunk_count, env.original_length)
    for v in env.values:
        for x in v if env.scheme == REDUNDANT else (v,):
            _put_int(out, x)
    return bytes(out)


def decode_share_file(data: bytes) -> ShareEnvelope:
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise BadMagic("not a share file")
    version, scheme = r.take(2)
    if version != VERSION:
        raise BadVersion(f"unsupported version {version}")
    if scheme not in SCHEMES:
        raise FieldOutOfRange(f"unknown scheme {scheme}")
    modulus = r.int()
    k, n, group_id, index, count, length = _HEADER.unpack(r.take(_HEADER.size))
    values: list = []
    for _ in range(count):
        if scheme == REDUNDANT:
            values.append(tuple(r.int() for _ in range(k + 1)))
        else:
            values.append(r.int())
    r.done()
    env = ShareEnvelope(scheme, modulus, k, n, group_id, index, length, tuple(values))
    _validate(env)
    return env


def encode_key_file(p: int, q: int, y: int) -> bytes:
    """``b"RSK1"``, version byte, then length-prefixed p, q and y."""
    out = bytearray(KEY_MAGIC)
    out.append(VERSION)
    for v in (p, q, y):
        _put_int(out, v)
    return bytes(out)


def decode_key_file(data: bytes) -> tuple[int, int, int]:
    r = _Reader(data)
    if r.take(4) != KEY_MAGIC:
        raise BadMagic("not a key file")
    (version,) = r.take(1)
    if version != VERSION:
        raise BadVersion(f"unsupported version {version}")
    p, q, y = r.int(), r.int(), r.int()
    r.done()
    return p, q, y


def payload_from_values(values: Sequence[int], original_length: int, modulus: Modulus) -> ChunkedPayload:
    return ChunkedPayload(tuple(values), original_length, chunk_width(modulus.value), modulus)

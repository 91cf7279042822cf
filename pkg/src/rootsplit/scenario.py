"""Line-oriented simulation scenarios.

Format::

    N=<nodes> SEED=<hex>
    STORE <root|redundant|composite> <k> <n> <file>
    FAIL <node id>
    CAPTURE <node id>
    KEYLEAK <group>
    COLLECT <group>

``#`` starts a comment. ``<group>`` is the 1-based ordinal of a STORE
event or the file name it stored. A 32-byte SEED is used as-is; any other
length is hashed with SHA-256 first. Files are read relative to the
scenario file.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from pathlib import Path

from .addressing import derive_seed
from .composite import CompositeKey, keygen
from .field import Modulus
from .partition import new_group_id
from .pipeline import Unrecoverable, split_data
from .redundancy import STRUCTURED
from .simnet import (
    Network,
    SimReport,
    adversary_report,
    capture_key,
    capture_node,
    collect_and_reconstruct,
    fail_node,
    new_network,
    scatter,
)

__all__ = ["CollectResult", "Scenario", "ScenarioError", "parse_scenario", "run_scenario"]

SCHEME_NAMES = {"root": "root_k", "root_k": "root_k", "redundant": "redundant", "composite": "composite"}
DEMO_KEY_BITS = 64
DEMO_KEY_EXPONENT = 65537


class ScenarioError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass(frozen=True)
class Event:
    line_no: int
    verb: str
    args: tuple[str, ...]


@dataclass
class Scenario:
    size: int
    seed: bytes
    events: list[Event]
    base_dir: Path = field(default_factory=Path)


@dataclass(frozen=True)
class CollectResult:
    label: str
    group_id: bytes
    scheme: str
    report: SimReport
    data_matches: bool

    def lines(self) -> list[str]:
        return [
            f"group={self.label}",
            f"group_id={self.group_id.hex()}",
            f"scheme={self.scheme}",
            *self.report.lines(),
            f"data_matches={str(self.data_matches).lower()}",
        ]


_ARITY = {"STORE": 4, "FAIL": 1, "CAPTURE": 1, "KEYLEAK": 1, "COLLECT": 1}


def _parse_header(line: str, line_no: int) -> tuple[int, bytes]:
    fields = dict(part.split("=", 1) for part in line.split() if "=" in part)
    if set(fields) != {"N", "SEED"} or len(line.split()) != 2:
        raise ScenarioError(line_no, "header must be 'N=<int> SEED=<hex>'")
    try:
        size = int(fields["N"])
        raw = bytes.fromhex(fields["SEED"])
    except ValueError as e:
        raise ScenarioError(line_no, f"bad header value: {e}") from None
    if size < 1 or not raw:
        raise ScenarioError(line_no, "N must be >= 1 and SEED non-empty")
    return size, raw if len(raw) == 32 else hashlib.sha256(raw).digest()


def parse_scenario(text: str, base_dir: Path | str = ".") -> Scenario:
    header = None
    events = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = _parse_header(line, line_no)
            continue
        verb, *args = line.split()
        if verb not in _ARITY:
            raise ScenarioError(line_no, f"unknown event {verb!r}")
        if len(args) != _ARITY[verb]:
            raise ScenarioError(line_no, f"{verb} takes {_ARITY[verb]} argument(s)")
        if verb in ("FAIL", "CAPTURE") and not args[0].isdigit():
            raise ScenarioError(line_no, f"node id must be a non-negative integer, got {args[0]!r}")
        if verb == "STORE":
            if args[0] not in SCHEME_NAMES:
                raise ScenarioError(line_no, f"unknown scheme {args[0]!r}")
            if not (args[1].isdigit() and args[2].isdigit()):
                raise ScenarioError(line_no, "k and n must be integers")
        events.append(Event(line_no, verb, tuple(args)))
    if header is None:
        raise ScenarioError(1, "missing header")
    return Scenario(header[0], header[1], events, Path(base_dir))


@dataclass
class _Stored:
    label: str
    group_id: bytes
    scheme: str
    data: bytes
    key: CompositeKey | None


def _lookup(stored: list[_Stored], ref: str, line_no: int) -> _Stored:
    if ref.isdigit() and 1 <= int(ref) <= len(stored):
        return stored[int(ref) - 1]
    for s in reversed(stored):
        if s.label == ref:
            return s
    raise ScenarioError(line_no, f"no stored group {ref!r}")


def _store(net: Network, ev: Event, scn: Scenario, rng: random.Random, modulus: Modulus | None) -> _Stored:
    scheme, k, n, name = SCHEME_NAMES[ev.args[0]], int(ev.args[1]), int(ev.args[2]), ev.args[3]
    try:
        data = (scn.base_dir / name).read_bytes()
    except OSError as e:
        raise ScenarioError(ev.line_no, f"cannot read {name}: {e.strerror}") from None
    key = keygen(DEMO_KEY_BITS, DEMO_KEY_EXPONENT, rng) if scheme == "composite" else None
    group_id = new_group_id(rng)
    try:
        envs = split_data(
            data,
            k,
            n if scheme == "redundant" else 0,
            modulus=modulus,
            mode=STRUCTURED,
            key=key,
            rng=rng,
            group_id=group_id,
        )
        scatter(net, group_id, envs, derive_seed(data))
    except ValueError as e:
        raise ScenarioError(ev.line_no, str(e)) from None
    return _Stored(name, group_id, scheme, data, key)


def run_scenario(scn: Scenario, modulus: Modulus | None = None) -> tuple[Network, list[CollectResult]]:
    """Replay the events in order; one result per COLLECT."""
    net = new_network(scn.size, scn.seed)
    rng = random.Random(int.from_bytes(scn.seed, "big"))
    stored: list[_Stored] = []
    results = []
    for ev in scn.events:
        if ev.verb == "STORE":
            stored.append(_store(net, ev, scn, rng, modulus))
        elif ev.verb in ("FAIL", "CAPTURE"):
            node_id = int(ev.args[0])
            if node_id >= net.size:
                raise ScenarioError(ev.line_no, f"unknown node {node_id}")
            (fail_node if ev.verb == "FAIL" else capture_node)(net, node_id)
        elif ev.verb == "KEYLEAK":
            capture_key(net, _lookup(stored, ev.args[0], ev.line_no).group_id)
        else:
            s = _lookup(stored, ev.args[0], ev.line_no)
            try:
                matches = collect_and_reconstruct(net, s.group_id, s.key) == s.data
            except Unrecoverable:
                matches = False
            results.append(CollectResult(s.label, s.group_id, s.scheme, adversary_report(net, s.group_id), matches))
    return net, results

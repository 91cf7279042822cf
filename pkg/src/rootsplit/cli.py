"""Command-line front end.

Exit codes: 0 success, 1 operational failure, 2 usage error, 3 data
unrecoverable (simulate only).
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path

from . import __version__
from .codec import (
    CodecError,
    ModulusTooSmall,
    decode_key_file,
    decode_share_file,
    encode_key_file,
    encode_share_file,
)
from .composite import BadExponent, CompositeKey, KeyMismatch, keygen
from .field import Modulus, NotInvertible, default_rng
from .partition import PartitionError, coefficient_space_lower_bound
from .pipeline import Unrecoverable, default_modulus, join_ciphertext, join_data, split_data
from .redundancy import RANDOM, STRUCTURED
from .scenario import ScenarioError, parse_scenario, run_scenario

log = logging.getLogger("rootsplit")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNRECOVERABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rng(args):
    return random.Random(args.seed) if args.seed is not None else default_rng()


def _modulus(args) -> Modulus:
    if args.prime_hex is None:
        return default_modulus()
    try:
        return Modulus.prime(int(args.prime_hex, 16))
    except ValueError as e:
        raise UsageError(f"--prime-hex: {e}") from None


def _read_key(path: str) -> CompositeKey:
    p, q, y = decode_key_file(Path(path).read_bytes())
    return CompositeKey(p, q, y)


def cmd_split(args) -> int:
    if args.k < 2:
        raise UsageError("k must be at least 2")
    if args.n and args.n < args.k:
        raise UsageError("n must be at least k")
    if args.composite and args.n:
        raise UsageError("--composite cannot be combined with -n")
    if args.composite and args.prime_hex:
        raise UsageError("--composite takes its modulus from the key file")
    data = Path(args.input).read_bytes()
    key = _read_key(args.composite) if args.composite else None
    modulus = None if key else _modulus(args)
    if modulus is not None and args.k >= modulus.value:
        raise UsageError(f"k must be below the modulus {modulus.value}")
    try:
        envs = split_data(data, args.k, args.n, modulus=modulus, mode=args.mode, key=key, rng=_rng(args))
    except ModulusTooSmall as e:
        raise UsageError(str(e)) from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    group = envs[0].group_id.hex()
    for env in envs:
        (out / f"{group}-{env.share_index}.rsh").write_bytes(encode_share_file(env))
    print(group)
    return EXIT_OK


def cmd_join(args) -> int:
    envs = [decode_share_file(Path(f).read_bytes()) for f in args.shares]
    key = _read_key(args.key) if args.key else None
    if envs and envs[0].scheme_name == "composite" and key is None:
        print(
            "warning: no key given; composite shares reveal only the ciphertext d^y mod n, not the data",
            file=sys.stderr,
        )
        text = "".join(f"chunk={i} ciphertext={c:x}\n" for i, c in enumerate(join_ciphertext(envs)))
        _write(args.out, text.encode())
        return EXIT_OK
    _write(args.out, join_data(envs, key))
    return EXIT_OK


def _write(out: str | None, data: bytes):
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_keygen(args) -> int:
    key = keygen(args.bits, args.exponent, _rng(args))
    Path(args.out).write_bytes(encode_key_file(key.p, key.q, key.y))
    print(f"n={key.n:x}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    path = Path(args.scenario)
    scn = parse_scenario(path.read_text(), path.parent)
    net, results = run_scenario(scn, _modulus(args) if args.prime_hex else None)
    lines = [f"nodes={net.size}", f"fingerprint={net.fingerprint()}"]
    for r in results:
        lines += r.lines()
    print("\n".join(lines))
    if args.figure:
        from .report import plot_network

        plot_network(net, results, args.figure)
    return EXIT_OK if all(r.report.retrievable and r.data_matches for r in results) else EXIT_UNRECOVERABLE


def cmd_bound(args) -> int:
    if args.p < 2 or args.k < 2:
        raise UsageError("need p >= 2 and k >= 2")
    lower, multisets = coefficient_space_lower_bound(args.p, args.k)
    print(f"lower_bound={lower}")
    print(f"multiset_count={multisets}")
    if args.figure:
        from .report import plot_bound

        plot_bound(args.p, range(2, max(args.k, 3) + 1), args.figure)
    return EXIT_OK


def _int(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rootsplit", description="Split data into polynomial-root shares.")
    parser.add_argument("-V", "--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p, prime=True):
        p.add_argument("--seed", type=int, help="seed a deterministic RNG (reproducible output)")
        if prime:
            p.add_argument("--prime-hex", help="prime modulus in hex (default 2^255-19)")

    p = sub.add_parser("split", help="split a file into share files")
    p.add_argument("input")
    p.add_argument("-k", type=int, required=True, help="threshold / number of roots")
    p.add_argument("-n", type=int, default=0, help="total redundant shares (any k of n recover)")
    p.add_argument("--mode", choices=[STRUCTURED, RANDOM], default=STRUCTURED)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--composite", metavar="KEYFILE", help="split d^y mod n under this key")
    common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("join", help="rebuild a file from share files")
    p.add_argument("shares", nargs="+")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--key", metavar="KEYFILE", help="key for composite shares")
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("keygen", help="generate a composite-modulus key")
    p.add_argument("--bits", type=int, default=2048)
    p.add_argument("--exponent", type=_int, default=65537)
    p.add_argument("--out", required=True)
    common(p, prime=False)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("simulate", help="run a sensor-network scenario")
    p.add_argument("scenario")
    p.add_argument("--figure", metavar="PNG", help="also render placement and collection counts")
    p.add_argument("--prime-hex", help="prime modulus in hex (default 2^255-19)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound", help="brute-force search-space size for coefficients")
    p.add_argument("p", type=_int)
    p.add_argument("k", type=int)
    p.add_argument("--figure", metavar="PNG", help="plot both counts for k = 2..K")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as e:
        print(f"scenario error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Unrecoverable as e:
        short = e.shares_needed - e.shares_available
        print(f"unrecoverable: {e} (short by {short})", file=sys.stderr)
        return EXIT_FAIL
    except (BadExponent, KeyMismatch) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
    except NotInvertible as e:
        print(f"{type(e).__name__}: {e} -- this value exposes a factor of the modulus", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, CodecError, PartitionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

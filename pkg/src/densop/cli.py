"""Command-line front end.

Exit codes: 0 = verdict or table delivered (including a "no" verdict),
1 = a verification suite found a counterexample or an internal re-check
failed, 2 = bad input (malformed rationals, resonant shift where a
non-resonant one is required, unknown suite).

Output is deterministic: the same command line and seed produce the same
bytes.  DENSOP_SEED overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from .classify import ModuleParams, is_singular_second_order, iso_search
from .engine import (
    InternalVerificationError,
    resonant_quantization_exists,
    vect_equivariant_principal_symbol,
)
from .linalg import ShapeError
from .scalars import Q, format_rational, parse_rational
from .serialize import (
    iso_result_to_json,
    matrix_from_json,
    operator_from_json,
    symbol_vector_from_json,
    symbol_vector_to_json,
    operator_to_json,
    table_to_json,
    verdict_to_json,
)
from .tables import (
    InvalidPrincipalSymbolError,
    ResonanceError,
    apply_quantization,
    apply_symbol,
    quantization_table,
    resonance_report,
    symbol_table,
)
from . import verify as verify_mod

DEFAULT_SEED = 20240


@dataclass(frozen=True)
class RunConfig:
    """Reproducibility contract: identical config and inputs give
    byte-identical output.  Randomness only drives test-case generation and
    solution-set sampling; the mathematics is exact either way."""

    seed: int
    sample_count: int = 64
    fmt: str = "json"
    dump_system: "str | None" = None

    @staticmethod
    def from_args(args) -> "RunConfig":
        env = os.environ.get("DENSOP_SEED")
        return RunConfig(
            int(env) if env is not None else args.seed,
            getattr(args, "samples", 64),
            getattr(args, "format", "json"),
            getattr(args, "dump_system", None),
        )


def _emit(payload, fmt: str = "json"):
    if fmt == "table":
        _emit_table(payload)
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def _emit_table(payload, indent: int = 0):
    pad = "  " * indent
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                print("%s%s:" % (pad, key))
                _emit_table(value, indent + 1)
            else:
                print("%s%s: %s" % (pad, key, value))
    elif isinstance(payload, list):
        for value in payload:
            _emit_table(value, indent)
    else:
        print("%s%s" % (pad, payload))


def _fail(reason: str, detail=None, code: int = 2):
    payload = {"error": reason}
    if detail is not None:
        payload["detail"] = detail
    print(json.dumps(payload, sort_keys=True))
    return code


def _parse_weights(text: str):
    return tuple(parse_rational(part) for part in text.split(","))


def _parse_module(text: str, k: int) -> ModuleParams:
    """Weight-list syntax "l1,l2,...:mu"."""
    weights, sep, mu = text.partition(":")
    if not sep:
        raise ValueError("expected 'l1,l2,...:mu', got %r" % text)
    lams = _parse_weights(weights)
    return ModuleParams(len(lams), k, lams, parse_rational(mu))


def _seed(args) -> int:
    return RunConfig.from_args(args).seed


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _table_or_exit(args, kind: str):
    lams = _parse_weights(args.lam)
    mu = parse_rational(args.mu)
    if args.m != len(lams):
        raise ValueError("--m %d disagrees with %d weights" % (args.m, len(lams)))
    blocks = None
    if args.blocks:
        blocks = [matrix_from_json(b) for b in _load_json(args.blocks)]
    if kind == "symbol":
        return symbol_table(lams, mu, args.k, blocks)
    return quantization_table(lams, mu, args.k, blocks)


def cmd_symbol(args) -> int:
    try:
        lams = _parse_weights(args.lam)
        mu = parse_rational(args.mu)
        delta = mu - sum(lams, Q(0))
        if args.resonant_check:
            report = resonance_report(args.k, delta)
            _emit(
                {
                    "k": args.k,
                    "delta": format_rational(delta),
                    "is_resonant": report.is_resonant,
                    "resonant_values": sorted(
                        format_rational(v) for v in report.resonant_values
                    ),
                },
                args.format,
            )
            return 0
        table = _table_or_exit(args, args.kind)
        payload = table_to_json(table)
        if args.operator:
            if args.kind != "symbol":
                return _fail("input operator only applies to symbol tables")
            A = operator_from_json(_load_json(args.operator))
            payload = {
                "table": payload,
                "symbol": symbol_vector_to_json(apply_symbol(table, A)),
            }
        if args.symbol:
            if args.kind != "quantization":
                return _fail("input symbol only applies to quantization tables")
            v = symbol_vector_from_json(_load_json(args.symbol))
            payload = {
                "table": payload,
                "operator": operator_to_json(apply_quantization(table, v)),
            }
        _emit(payload, args.format)
        return 0
    except ResonanceError as exc:
        return _fail("resonant", str(exc))
    except (ValueError, OSError, KeyError, ShapeError) as exc:
        return _fail("bad input", str(exc))


def cmd_verify(args) -> int:
    seed = _seed(args)
    try:
        if args.suite == "action-oracle":
            report = verify_mod.suite_action_oracle(
                args.m, args.k, args.cases, seed
            )
        elif args.suite == "inverse":
            report = verify_mod.suite_inverse(args.m, args.k, args.cases, seed)
        elif args.suite == "sl2":
            if args.lam and args.mu:
                lams = _parse_weights(args.lam)
                mu = parse_rational(args.mu)
            else:
                rng = random.Random(seed)
                lams, mu = verify_mod.nonresonant_weights(rng, args.m, args.k)
            report = verify_mod.suite_sl2(lams, mu, args.k, seed)
        elif args.suite == "closed-forms":
            report = verify_mod.suite_closed_forms(args.m, args.cases, seed)
        elif args.suite == "cocycle":
            report = verify_mod.suite_cocycle(args.cases, seed)
        elif args.suite == "lie-law":
            report = verify_mod.suite_lie_law(args.m, args.k, args.cases, seed)
        else:
            return _fail("unknown suite", args.suite)
    except ResonanceError as exc:
        return _fail("resonant", str(exc))
    except ValueError as exc:
        return _fail("bad input", str(exc))
    payload = {
        "suite": report.suite,
        "passed": report.passed,
        "cases": report.cases,
        "seed": seed,
    }
    if report.counterexample is not None:
        payload["counterexample"] = report.counterexample
    _emit(payload, args.format)
    return 0 if report.passed else 1


def _dump_system(args, system):
    if args.dump_system:
        with open(args.dump_system, "w", encoding="utf-8") as handle:
            for row in system.dump_rows():
                handle.write(json.dumps(row, sort_keys=True))
                handle.write("\n")


def cmd_classify(args) -> int:
    config = RunConfig.from_args(args)
    seed = config.seed
    rng = random.Random(seed)
    try:
        if args.mode == "resonance":
            delta = parse_rational(args.delta)
            report = resonance_report(args.k, delta)
            _emit(
                {
                    "k": args.k,
                    "delta": format_rational(delta),
                    "is_resonant": report.is_resonant,
                    "resonant_values": sorted(
                        format_rational(v) for v in report.resonant_values
                    ),
                },
                args.format,
            )
            return 0
        if args.mode == "singular":
            params = _parse_module(args.src, 2)
            verdict = is_singular_second_order(params)
            _emit(
                {
                    "module": args.src,
                    "delta": format_rational(params.shift),
                    "singular": verdict,
                },
                args.format,
            )
            return 0
        if args.mode == "resonant-exists":
            lams = _parse_weights(args.lam)
            delta = parse_rational(args.delta)
            verdict = resonant_quantization_exists(
                lams, delta, args.k, args.m, rng, config.sample_count
            )
            if args.dump_system:
                from .engine import quantization_system

                _dump_system(
                    args,
                    quantization_system(args.m, args.k, lams, delta),
                )
            _emit(verdict_to_json(verdict), args.format)
            return 0
        if args.mode == "vect-principal":
            lams = _parse_weights(args.lam)
            if args.delta:
                delta = parse_rational(args.delta)
            else:
                mu = parse_rational(args.mu)
                delta = mu - sum(lams, Q(0))
            verdict = vect_equivariant_principal_symbol(
                lams, delta, args.k, args.m, rng, config.sample_count
            )
            if args.dump_system:
                from .engine import quantization_system

                _dump_system(
                    args,
                    quantization_system(
                        args.m, args.k, lams, delta, max_field_degree=args.k + 3
                    ),
                )
            _emit(verdict_to_json(verdict), args.format)
            return 0
        if args.mode == "iso":
            src = _parse_module(args.src, args.k)
            dst = _parse_module(args.dst, args.k)
            result = iso_search(
                src,
                dst,
                rng,
                config.sample_count,
                allow_experimental=args.k > 2,
            )
            payload = iso_result_to_json(result)
            if args.k > 2:
                payload["classification"] = "unclassified research output"
            if args.dump_system:
                from .engine import iso_system

                _dump_system(
                    args,
                    iso_system(
                        src.arity,
                        args.k,
                        src.in_weights,
                        dst.in_weights,
                        src.shift,
                        args.k + 3,
                    ),
                )
            _emit(payload, args.format)
            return 0
        return _fail("unknown classify mode", args.mode)
    except ResonanceError as exc:
        return _fail("resonant", str(exc))
    except InternalVerificationError as exc:
        print(json.dumps({"error": "internal verification", "detail": str(exc)}))
        return 1
    except (ValueError, OSError, KeyError, ShapeError, InvalidPrincipalSymbolError) as exc:
        return _fail("bad input", str(exc))


VALUE_FLAGS = ("--lambda", "--mu", "--delta", "--src", "--dst")


def _rewrite_negative_values(argv):
    """Join flag values that begin with '-' (negative rationals) so argparse
    does not read them as options."""
    out = []
    skip = False
    for pos, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token in VALUE_FLAGS and pos + 1 < len(argv):
            nxt = argv[pos + 1]
            if nxt.startswith("-"):
                out.append("%s=%s" % (token, nxt))
                skip = True
                continue
        out.append(token)
    return out


def _common_flags(parser):
    parser.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS
    )
    parser.add_argument(
        "--samples", type=int, default=argparse.SUPPRESS
    )
    parser.add_argument(
        "--format", choices=("json", "table"), default=argparse.SUPPRESS
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="densop",
        description=(
            "Exact symbol calculus and classification for multilinear "
            "differential operators on weighted densities."
        ),
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--samples", type=int, default=64)
    parser.add_argument(
        "--format", choices=("json", "table"), default="json"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for kind in ("symbol", "quantize"):
        p = sub.add_parser(kind, help="generate a %s coefficient table" % kind)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--lambda", dest="lam", required=True)
        p.add_argument("--mu", required=True)
        p.add_argument("--blocks", help="JSON file with principal blocks")
        p.add_argument("--operator", help="JSON operator to push through")
        p.add_argument("--symbol", help="JSON symbol vector to quantize")
        p.add_argument("--resonant-check", action="store_true")
        _common_flags(p)
        p.set_defaults(
            func=cmd_symbol,
            kind="symbol" if kind == "symbol" else "quantization",
        )

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument(
        "suite",
        choices=(
            "action-oracle",
            "inverse",
            "sl2",
            "closed-forms",
            "cocycle",
            "lie-law",
        ),
    )
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--cases", type=int, default=64)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mu")
    _common_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="existence and isomorphism verdicts")
    p.add_argument(
        "mode",
        choices=("resonance", "singular", "iso", "vect-principal", "resonant-exists"),
    )
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mu")
    p.add_argument("--delta")
    p.add_argument("--src", help="module as 'l1,l2,...:mu'")
    p.add_argument("--dst", help="module as 'l1,l2,...:mu'")
    p.add_argument("--dump-system", dest="dump_system")
    _common_flags(p)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_rewrite_negative_values(list(argv)))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""JSON wire formats.

Rationals render as "p/q" (or "n" for integers); multi-indices as
comma-joined naturals ("2,0,1"); table entries under "s|i" keys.  Operator
and symbol coefficient arrays are ascending in degree and omitted indices
mean zero.
"""

from __future__ import annotations

from .action import MOperator, SymbolVector
from .indexing import format_index, parse_index
from .poly import Poly
from .scalars import format_rational, parse_rational
from .tables import CoeffTable


def rational_str(v) -> str:
    return format_rational(v)


def poly_to_json(poly: Poly) -> list:
    return [rational_str(c) for c in poly.coeffs]


def poly_from_json(data) -> Poly:
    return Poly([parse_rational(c) for c in data])


def operator_to_json(A: MOperator) -> dict:
    return {
        "m": A.arity,
        "k": A.order,
        "lambda": [rational_str(v) for v in A.in_weights],
        "mu": rational_str(A.out_weight),
        "coeffs": {
            format_index(idx): poly_to_json(poly)
            for idx, poly in sorted(A.coeffs.items())
        },
    }


def operator_from_json(data) -> MOperator:
    return MOperator(
        int(data["m"]),
        int(data["k"]),
        tuple(parse_rational(v) for v in data["lambda"]),
        parse_rational(data["mu"]),
        {
            parse_index(key): poly_from_json(val)
            for key, val in data.get("coeffs", {}).items()
        },
    )


def symbol_vector_to_json(v: SymbolVector) -> dict:
    return {
        "m": v.arity,
        "k": v.order,
        "delta": rational_str(v.shift),
        "components": {
            format_index(idx): poly_to_json(poly)
            for idx, poly in sorted(v.components.items())
        },
    }


def symbol_vector_from_json(data) -> SymbolVector:
    return SymbolVector(
        int(data["m"]),
        int(data["k"]),
        parse_rational(data["delta"]),
        {
            parse_index(key): poly_from_json(val)
            for key, val in data.get("components", {}).items()
        },
    )


def table_to_json(table: CoeffTable) -> dict:
    return {
        "kind": table.kind,
        "m": table.arity,
        "k": table.order,
        "lambda": [rational_str(v) for v in table.in_weights],
        "mu": rational_str(table.out_weight),
        "entries": {
            "%s|%s"
            % (format_index(s), format_index(i)): rational_str(v)
            for (s, i), v in sorted(table.entries.items())
        },
    }


def table_from_json(data) -> CoeffTable:
    entries = {}
    for key, val in data.get("entries", {}).items():
        s_text, _, i_text = key.partition("|")
        entries[(parse_index(s_text), parse_index(i_text))] = parse_rational(val)
    from .tables import _layers, _prepare_blocks  # reconstruct blocks

    m, k = int(data["m"]), int(data["k"])
    skew = data["kind"] == "skew_symbol"
    layers = _layers(m, k, skew)
    blocks = []
    for p, idxs in layers.items():
        blocks.append(
            [[entries.get((s, i), parse_rational("0")) for s in idxs] for i in idxs]
        )
    blocks_by_p = _prepare_blocks(layers, k, blocks, skew)
    start = 1 if skew else 0
    full = [[] for _ in range(start)] + [blocks_by_p[p] for p in sorted(blocks_by_p)]
    return CoeffTable(
        data["kind"],
        m,
        k,
        tuple(parse_rational(v) for v in data["lambda"]),
        parse_rational(data["mu"]),
        entries,
        full,
    )


def matrix_to_json(mat) -> list:
    return [[rational_str(v) for v in row] for row in mat]


def matrix_from_json(data):
    return [[parse_rational(v) for v in row] for row in data]


def verdict_to_json(verdict) -> dict:
    out = {"exists": verdict.exists, "free_dimension": verdict.free_dimension}
    if verdict.witness is not None:
        out["witness"] = {
            "%s|%s" % (format_index(s), format_index(i)): rational_str(v)
            for (s, i), v in sorted(verdict.witness.items())
            if v != 0
        }
    if verdict.certificate:
        certs = []
        for cert in verdict.certificate:
            entry = dict(cert)
            if entry.get("vector"):
                entry["vector"] = [rational_str(v) for v in entry["vector"]]
            certs.append(entry)
        out["certificates"] = certs
    if verdict.note:
        out["note"] = verdict.note
    return out


def iso_result_to_json(result) -> dict:
    out = {"exists": result.exists}
    if result.reason:
        out["reason"] = result.reason
    if result.tau_blocks is not None:
        out["tau_blocks"] = [matrix_to_json(b) for b in result.tau_blocks]
    if result.derivative_terms is not None:
        out["derivative_terms"] = {
            key: rational_str(v) for key, v in result.derivative_terms.items()
        }
    if result.free_parameters is not None:
        out["free_parameters"] = result.free_parameters
    out["verified"] = result.verified
    if result.note:
        out["note"] = result.note
    return out

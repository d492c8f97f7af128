"""JSON file formats for algebras and systems.

Algebra files: {dim, step, brackets: [{i, j, coeffs: [[k, "p/q"], ...]}]};
unlisted pairs bracket to zero.  System files: {algebra, automorphism (m x m
"p/q" entries), translation (per-coordinate lists of {monomial, coeff}
records), symbols, optional second_generator}.  Everything is exact text;
no floats ever enter a file.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import NilLieAlgebra
from .group import UnipotentAutomorphism
from .scalars import ExtScalar, SymbolContext, parse_rat, rat_str
from .structure import AffineNilsystem


def algebra_to_dict(alg: NilLieAlgebra) -> dict:
    brackets = []
    for (i, j) in sorted(alg.brackets):
        coeffs = [[k, rat_str(c)] for k, c in sorted(alg.brackets[(i, j)].items())]
        brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {"dim": alg.dim, "step": alg.step, "brackets": brackets}


def algebra_from_dict(data: dict) -> NilLieAlgebra:
    brackets = {}
    for rec in data.get("brackets", []):
        brackets[(int(rec["i"]), int(rec["j"]))] = {
            int(k): parse_rat(c) for k, c in rec["coeffs"]
        }
    return NilLieAlgebra(int(data["dim"]), int(data["step"]), brackets)


def _coord_records(ctx: SymbolContext, coords: list) -> list:
    return [ExtScalar.lift(t, ctx).to_records() for t in coords]


def _coords_from_records(ctx: SymbolContext, recs: list) -> list:
    return [ExtScalar.from_records(ctx, r) for r in recs]


def _matrix_strs(A: UnipotentAutomorphism) -> list[list[str]]:
    return [[rat_str(Fraction(x)) for x in row] for row in A.matrix]


def system_to_dict(sys: AffineNilsystem) -> dict:
    ctx = sys.context
    data = {
        "algebra": algebra_to_dict(sys.algebra),
        "symbols": list(ctx.names),
        "automorphism": _matrix_strs(sys.A),
        "translation": _coord_records(ctx, sys.g_tau),
    }
    if sys.name:
        data["name"] = sys.name
    if sys.second is not None:
        A2, g2 = sys.second
        data["second_generator"] = {
            "automorphism": _matrix_strs(A2),
            "translation": _coord_records(ctx, g2),
        }
    return data


def system_from_dict(data: dict) -> AffineNilsystem:
    alg = algebra_from_dict(data["algebra"])
    ctx = SymbolContext(tuple(data.get("symbols", [])))
    A = UnipotentAutomorphism(
        alg, [[parse_rat(x) for x in row] for row in data["automorphism"]]
    )
    g_tau = _coords_from_records(ctx, data["translation"])
    second = None
    if "second_generator" in data:
        sg = data["second_generator"]
        A2 = UnipotentAutomorphism(
            alg, [[parse_rat(x) for x in row] for row in sg["automorphism"]]
        )
        second = (A2, _coords_from_records(ctx, sg["translation"]))
    return AffineNilsystem(
        alg, A, g_tau, context=ctx, second=second, name=data.get("name", "")
    )


def save_system(path: str, sys: AffineNilsystem) -> None:
    with open(path, "w") as fh:
        json.dump(system_to_dict(sys), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_system(path: str) -> AffineNilsystem:
    with open(path) as fh:
        return system_from_dict(json.load(fh))

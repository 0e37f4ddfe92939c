"""Command line front end.

Exit codes: 0 success, 2 unreadable input, 3 mathematically invalid input,
4 failed internal consistency check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from .covers import (
    building_data,
    congruence_hodge,
    congruence_hodge_qp,
    cover_hodge,
    pushforward_decomposition,
    riemann_hurwitz_genus,
)
from .errors import InputError, InvariantError, SpecParseError
from .geometry import CurveModel, singular_points
from .parabolic import decompose_boundaries, h1_complement_order, torsion_points
from .polytopes import count_lattice_points, ehrhart_qp, vertices
from .problem import load_json, parse_polytope, parse_problem, problem_to_json
from .strata import compute_strata, refined_decomposition

BIG = 2**63
VERIFY_LIMIT = 10


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= BIG else x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def render_table(report: Any, indent: int = 0) -> str:
    """Plain-text rendering of a report: nested keys, scalars and short lists on one line."""
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(report, list):
        for v in report:
            if _flat(v):
                lines.append(f"{pad}- {_scalar(v)}")
            else:
                lines.append(f"{pad}-")
                lines.append(render_table(v, indent + 1))
    else:
        lines.append(f"{pad}{_scalar(report)}")
    return "\n".join(lines)


def _flat(v: Any) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return not isinstance(v, dict)


def _scalar(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return "null" if v is None else str(v)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_decompose(problem, args) -> dict:
    geom = problem.geometry
    canonical = decompose_boundaries(geom.divisors)
    refined = refined_decomposition(geom)
    out = {
        "problem": problem_to_json(problem),
        "polytopes": [
            dict(c.to_json(), vertices=[list(v) for v in vertices(c.polytope)]) for c in canonical.cells
        ],
        "refined": [c.to_json() for c in refined.cells],
        "e_matrix": [list(r) for r in geom.resolution.e_matrix.rows],
    }
    if not isinstance(problem.source, CurveModel) and len(problem.source.lines) >= 2:
        out["singular_points"] = [{"point": list(p), "multiplicity": m} for p, m in singular_points(problem.source)]
    return out


def cmd_strata(problem, args) -> dict:
    table = compute_strata(problem.geometry, args.qmax)
    out = table.to_json()
    out["polytopes"] = [
        {"id": c.id, "representative": c.representative.to_json()} for c in table.decomposition.cells
    ]
    return out


def cmd_hodge(problem, args) -> dict:
    geom = problem.geometry
    q = 1 if args.q is None else args.q
    out: dict = {"q": q}
    if args.qp or args.N is None:
        qp = congruence_hodge_qp(geom, q)
        out["quasi_polynomial"] = qp.to_json()
        if args.N is not None:
            out["N"] = args.N
            out["value"] = qp(args.N)
        if args.verify:
            direct = [congruence_hodge(geom, q, n) for n in range(1, VERIFY_LIMIT + 1)]
            evals = [qp(n) for n in range(1, VERIFY_LIMIT + 1)]
            if direct != evals:
                raise InvariantError(f"quasi-polynomial {evals} disagrees with direct summation {direct}")
            out["verify"] = {"N": list(range(1, VERIFY_LIMIT + 1)), "values": direct, "status": "OK"}
    else:
        out["N"] = args.N
        out["value"] = congruence_hodge(geom, q, args.N)
        if args.verify:
            qv = congruence_hodge_qp(geom, q)(args.N)
            if qv != out["value"]:
                raise InvariantError(f"direct value {out['value']} disagrees with quasi-polynomial {qv}")
            out["verify"] = {"status": "OK"}
    return out


def cmd_cover(problem, args) -> dict:
    g = problem.subgroup()
    if g is None:
        raise InputError("the cover command needs 'subgroup' generators")
    geom = problem.geometry
    bd = building_data(g)
    out = {
        "order": g.order,
        "invariant_factors": list(g.invariant_factors),
        "building_data": bd.to_json(),
        "pushforward_X": [list(c) for c in pushforward_decomposition(g)],
        "pushforward_Z": [list(c) for c in pushforward_decomposition(g, geom.resolution)],
        "hodge": {str(q): cover_hodge(geom, g, q) for q in range(geom.dim + 1)},
    }
    if isinstance(problem.source, CurveModel):
        rh = riemann_hurwitz_genus(problem.source, g)
        genus = out["hodge"]["1"]
        if rh != genus:
            raise InvariantError(f"Hodge number {genus} disagrees with Riemann-Hurwitz genus {rh}")
        out["riemann_hurwitz"] = {"genus": rh, "check": "OK"}
    return out


def cmd_count(problem, args) -> dict:
    n = 2 if args.N is None else args.N
    geom = problem.geometry
    pts = torsion_points(decompose_boundaries(geom.divisors), n)
    expected = h1_complement_order(geom.divisors, n)
    if len(pts) != expected:
        raise InvariantError(f"{len(pts)} torsion points but |H_1(U, Z/{n})| = {expected}")
    out = {"N": n, "count": len(pts), "h1_order": expected, "check": "OK"}
    if args.verify:
        out["points"] = [x.to_json() for x in pts]
    return out


def cmd_ehrhart(data, args) -> dict:
    p = parse_polytope(data)
    qp = ehrhart_qp(p)
    out = {"polytope": p.to_json(), "vertices": [list(v) for v in vertices(p)]}
    if args.qp or args.N is None:
        out["quasi_polynomial"] = qp.to_json()
    if args.N is not None:
        out["N"] = args.N
        out["count"] = count_lattice_points(p, None, args.N)
    if args.verify:
        ns = range(1, 3 * qp.period + 4)
        direct = [count_lattice_points(p, None, n) for n in ns]
        if direct != [qp(n) for n in ns]:
            raise InvariantError("quasi-polynomial disagrees with enumeration")
        out["verify"] = {"N": list(ns), "values": direct, "status": "OK"}
    return out


COMMANDS = {
    "decompose": (cmd_decompose, "polytope decomposition of the boundary set"),
    "strata": (cmd_strata, "cohomology jump loci V^q_i"),
    "hodge": (cmd_hodge, "Hodge numbers h^{q,0}(N) of congruence covers"),
    "cover": (cmd_cover, "building data and Hodge numbers of an abelian cover"),
    "ehrhart": (cmd_ehrhart, "Ehrhart quasi-polynomial of a half-open polytope"),
    "count": (cmd_count, "number of N-torsion points, checked against H_1(U, Z/N)"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table", help="plain-text report")
    common.add_argument("--verify", action="store_true", help="cross-check against an independent computation")
    common.add_argument("--qmax", type=int, default=None, help="largest q for strata")
    common.add_argument("--q", type=int, default=None, help="form degree q for hodge")
    common.add_argument("--N", type=int, default=None, help="level / dilation factor")
    common.add_argument("--qp", action="store_true", help="report the quasi-polynomial")
    common.add_argument("input", nargs="?", default="-", help="JSON file (default: stdin)")
    common.set_defaults(fmt="json")

    parser = argparse.ArgumentParser(prog="pictau", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from exc


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Run a command and return ``(exit code, text)`` without touching stdout."""
    args = build_parser().parse_args(argv)
    try:
        if args.N is not None and args.N < 1:
            raise InputError("--N must be >= 1")
        data = load_json(_read(args.input))
        func = COMMANDS[args.command][0]
        if args.command == "ehrhart":
            report = func(data, args)
        else:
            report = func(parse_problem(data), args)
    except SpecParseError as exc:
        return 2, f"error: {exc}\n"
    except InvariantError as exc:
        return 4, f"internal error: {exc}\n"
    except InputError as exc:
        return 3, f"error: {exc}\n"
    if args.fmt == "table":
        return 0, render_table(_jsonable(report)) + "\n"
    return 0, dumps(report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = run(argv)
    (sys.stdout if code == 0 else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

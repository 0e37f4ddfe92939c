"""JSON problem descriptions: a variety, a divisor on it and optional subgroup generators.

Example::

    {"variety": "P2",
     "divisor": {"lines": [[1, 0, 0], [1, 1, 0], [1, 2, 0]]},
     "subgroup": [{"bundle_degree": 1, "alpha": ["1/3", "1/3", "1/3"]}]}

For ``"P1"`` the divisor is ``{"points": [0, "1/2", "inf"]}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

from .covers import CharacterSubgroup
from .errors import SpecParseError
from .exact import as_fraction
from .geometry import CurveModel, LineArrangement, ResolvedGeometry, resolve
from .parabolic import BoundaryRealization
from .polytopes import HalfOpenPolytope


@dataclass(frozen=True)
class ProblemSpec:
    source: Union[LineArrangement, CurveModel]
    generators: Optional[tuple[tuple[int, tuple[Fraction, ...]], ...]] = None

    @property
    def geometry(self) -> ResolvedGeometry:
        return resolve(self.source)

    def subgroup(self) -> Optional[CharacterSubgroup]:
        if self.generators is None:
            return None
        d = self.source.divisors
        gens = tuple(BoundaryRealization(d, (deg,), alpha) for deg, alpha in self.generators)
        return CharacterSubgroup(d, gens)


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SpecParseError(f"{where}: expected an integer or a 'p/q' string, got {x!r}")
    try:
        return as_fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecParseError(f"{where}: {exc}") from exc


def _integer(x: Any, where: str) -> int:
    v = _rational(x, where)
    if v.denominator != 1:
        raise SpecParseError(f"{where}: expected an integer, got {x!r}")
    return int(v)


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"malformed JSON: {exc}") from exc


def parse_problem(data: Any) -> ProblemSpec:
    if not isinstance(data, dict):
        raise SpecParseError("problem must be a JSON object")
    variety = data.get("variety")
    if isinstance(variety, dict):
        variety = variety.get("name")
    if variety not in ("P1", "P2"):
        raise SpecParseError(f"variety must be 'P1' or 'P2', got {variety!r}")
    div = data.get("divisor")
    if not isinstance(div, dict):
        raise SpecParseError("missing 'divisor' object")
    if variety == "P2":
        lines = div.get("lines")
        if not isinstance(lines, list) or not all(isinstance(ln, list) and len(ln) == 3 for ln in lines):
            raise SpecParseError("P2 divisor needs 'lines': a list of [a, b, c]")
        source = LineArrangement(
            tuple(tuple(_rational(x, f"lines[{i}]") for x in ln) for i, ln in enumerate(lines))
        )
    else:
        points = div.get("points")
        if not isinstance(points, list):
            raise SpecParseError("P1 divisor needs 'points': a list of numbers or 'inf'")
        source = CurveModel(
            tuple(None if p == "inf" else _rational(p, f"points[{i}]") for i, p in enumerate(points))
        )
    gens = None
    if "subgroup" in data:
        raw = data["subgroup"]
        if not isinstance(raw, list):
            raise SpecParseError("'subgroup' must be a list of generators")
        parsed = []
        for i, g in enumerate(raw):
            if not isinstance(g, dict) or "bundle_degree" not in g or not isinstance(g.get("alpha"), list):
                raise SpecParseError(f"subgroup[{i}] needs 'bundle_degree' and 'alpha'")
            deg = _integer(g["bundle_degree"], f"subgroup[{i}].bundle_degree")
            alpha = tuple(_rational(a, f"subgroup[{i}].alpha") for a in g["alpha"])
            parsed.append((deg, alpha))
        gens = tuple(parsed)
    return ProblemSpec(source, gens)


def parse_polytope(data: Any) -> HalfOpenPolytope:
    if not isinstance(data, dict) or "dim" not in data or not isinstance(data.get("constraints"), list):
        raise SpecParseError("polytope needs 'dim' and a 'constraints' list")
    dim = _integer(data["dim"], "dim")
    rows = []
    for i, c in enumerate(data["constraints"]):
        if not isinstance(c, dict) or not isinstance(c.get("a"), list) or c.get("rel") not in ("le", "lt", "eq"):
            raise SpecParseError(f"constraints[{i}] needs 'a', 'rel' in le/lt/eq and 'b'")
        if len(c["a"]) != dim:
            raise SpecParseError(f"constraints[{i}] has {len(c['a'])} coefficients in dimension {dim}")
        a = [_rational(x, f"constraints[{i}].a") for x in c["a"]]
        rows.append((a, c["rel"], _rational(c.get("b"), f"constraints[{i}].b")))
    return HalfOpenPolytope.from_constraints(dim, rows)


def problem_to_json(problem: ProblemSpec) -> dict:
    src = problem.source
    if isinstance(src, LineArrangement):
        out = {"variety": "P2", "divisor": {"lines": [[str(x) for x in ln] for ln in src.lines]}}
    else:
        out = {"variety": "P1", "divisor": {"points": ["inf" if p is None else str(p) for p in src.points]}}
    if problem.generators is not None:
        out["subgroup"] = [
            {"bundle_degree": deg, "alpha": [str(a) for a in alpha]} for deg, alpha in problem.generators
        ]
    return out

"""JSON documents for problems, self-maps, measures and verdicts.

Documents are validated against ``schema/problem.schema.json`` first and
then converted, so every failure carries the field path of the offending
value and, where it can be located in the source text, its line and column.
"""
from __future__ import annotations

import cmath
import json
import math
from importlib import resources
from typing import Any, Optional, Sequence

import jsonschema

from .containment import AtomCheck, Problem, Verdict, ZeroCheck
from .families import KINDS as FAMILY_KINDS
from .families import FamilySpec
from .inner import (
    AtomicMeasure,
    BlaschkeProduct,
    Chain,
    Constant,
    Identity,
    Inner,
    InnerFunction,
    Mob,
    Scale,
    SelfMap,
)
from .moebius import AutomorphismClass, Moebius
from .oracle import GridSpec, OracleReport

_SCHEMA: Optional[dict] = None


def schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        text = resources.files("beurling").joinpath("schema/problem.schema.json").read_text()
        _SCHEMA = json.loads(text)
    return _SCHEMA


class InputError(ValueError):
    """A document that does not describe a valid object, with its location."""

    def __init__(self, message: str, path: Sequence = (), line: Optional[int] = None,
                 column: Optional[int] = None):
        self.message = message
        self.path = tuple(path)
        self.line = line
        self.column = column
        super().__init__(self.describe())

    def describe(self) -> str:
        where = "/" + "/".join(str(p) for p in self.path)
        if self.line is not None:
            where += f" (line {self.line}, column {self.column})"
        return f"{where}: {self.message}"


# ---------------------------------------------------------------------------
# Locating values in the source text


_WS = " \t\r\n"


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in _WS:
        pos += 1
    return pos


def locate(text: str, path: Sequence) -> Optional[int]:
    """Offset in ``text`` where the value at ``path`` starts, or None."""
    dec = json.JSONDecoder()
    pos = _skip_ws(text, 0)
    for key in path:
        if pos >= len(text):
            return None
        if text[pos] == "{" and isinstance(key, str):
            pos = _skip_ws(text, pos + 1)
            while True:
                if pos >= len(text) or text[pos] != '"':
                    return None
                name, pos = json.decoder.scanstring(text, pos + 1)
                pos = _skip_ws(text, pos)
                pos = _skip_ws(text, pos + 1)  # past ':'
                if name == key:
                    break
                _, pos = dec.raw_decode(text, pos)
                pos = _skip_ws(text, pos)
                if pos >= len(text) or text[pos] != ",":
                    return None
                pos = _skip_ws(text, pos + 1)
        elif text[pos] == "[" and isinstance(key, int):
            pos = _skip_ws(text, pos + 1)
            for _ in range(key):
                _, pos = dec.raw_decode(text, pos)
                pos = _skip_ws(text, pos)
                if pos >= len(text) or text[pos] != ",":
                    return None
                pos = _skip_ws(text, pos + 1)
        else:
            return None
    return pos


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def with_location(err: InputError, text: Optional[str]) -> InputError:
    if text is None or err.line is not None:
        return err
    off = locate(text, err.path)
    if off is None:
        return err
    line, col = _line_col(text, off)
    return InputError(err.message, err.path, line, col)


def load_document(text: str, kind: str) -> dict:
    """Parse JSON text and validate it against the named schema definition."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e.msg}", (), e.lineno, e.colno) from None
    validate(doc, kind, text)
    return doc


def validate(doc: Any, kind: str, text: Optional[str] = None) -> None:
    sch = schema()
    if kind not in sch["$defs"]:
        raise KeyError(f"no schema definition {kind!r}")
    sub = {"$ref": f"#/$defs/{kind}", "$defs": sch["$defs"]}
    validator = jsonschema.Draft202012Validator(sub)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = jsonschema.exceptions.best_match(errors)
        raise with_location(InputError(e.message, list(e.absolute_path)), text)


# ---------------------------------------------------------------------------
# Documents -> objects


def _complex(d: dict) -> complex:
    return complex(d["re"], d["im"])


def _unit(angle: float) -> complex:
    return cmath.exp(1j * angle)


def _convert(path: list, fn, *args):
    try:
        return fn(*args)
    except InputError:
        raise
    except (ValueError, TypeError, ArithmeticError) as e:
        raise InputError(str(e), path) from None


def inner_from_doc(d: dict, path: Sequence = ()) -> InnerFunction:
    path = list(path)
    for i, z in enumerate(d["zeros"]):
        if not abs(_complex(z)) < 1.0:
            raise InputError(f"zero {_complex(z)} must lie in the open unit disk",
                             path + ["zeros", i])
    B = _convert(path + ["zeros"], BlaschkeProduct,
                 tuple((_complex(z), z["mult"]) for z in d["zeros"]), _unit(d["gamma_angle"]))
    mu = _convert(path + ["atoms"], AtomicMeasure,
                  tuple((a["angle"], a["weight"]) for a in d["atoms"]))
    return InnerFunction(B, mu)


def measure_from_doc(d: dict, path: Sequence = ()) -> AtomicMeasure:
    return _convert(list(path) + ["atoms"], AtomicMeasure,
                    tuple((a["angle"], a["weight"]) for a in d["atoms"]))


def moebius_from_doc(d: dict, path: Sequence = ()) -> Moebius:
    a = _complex(d["a"])
    if not abs(a) < 1.0:
        raise InputError(f"automorphism zero {a} must lie in the open unit disk", list(path) + ["a"])
    return Moebius(_unit(d["gamma_angle"]), a)


def selfmap_from_doc(d: dict, path: Sequence = ()) -> SelfMap:
    path = list(path)
    t = d["type"]
    if t == "identity":
        return Identity()
    if t == "constant":
        return _convert(path, Constant, _complex(d))
    if t == "moebius":
        return Mob(moebius_from_doc(d, path))
    if t == "inner":
        theta = inner_from_doc(d["theta"], path + ["theta"])
        return _convert(path + ["theta"], Inner, theta)
    if t == "scale":
        return _convert(path, Scale, _complex(d))
    if t == "chain":
        return Chain(tuple(selfmap_from_doc(m, path + ["maps", i]) for i, m in enumerate(d["maps"])))
    raise InputError(f"unknown self-map type {t!r}", path + ["type"])


def grid_from_doc(d: Optional[dict], base: GridSpec = GridSpec(), path: Sequence = ("grid",)) -> GridSpec:
    if not d:
        return base
    return _convert(
        list(path), GridSpec,
        tuple(d.get("radii", base.radii)),
        d.get("angles", base.angular_count),
        d.get("exclusion_radius", base.exclusion_radius),
        base.refine_factor,
    )


def problem_from_doc(d: dict) -> tuple[Problem, GridSpec]:
    t1 = inner_from_doc(d["theta1"], ["theta1"])
    phi = selfmap_from_doc(d["phi"], ["phi"])
    t2 = inner_from_doc(d["theta2"], ["theta2"])
    problem = _convert(["mode"], Problem, t1, phi, t2, d.get("mode", "auto"))
    return problem, grid_from_doc(d.get("grid"))


def family_from_doc(d: dict) -> FamilySpec:
    if d["kind"] not in FAMILY_KINDS:
        raise InputError(f"unknown family kind {d['kind']!r}; expected one of {FAMILY_KINDS}",
                         ["kind"])
    inner = None
    if "inner" in d:
        sub = d["inner"]
        # a constant ball element may sit on the unit circle, unlike a constant self-map
        inner = _complex(sub) if sub["type"] == "constant" else selfmap_from_doc(sub, ["inner"])
    return _convert(
        [], FamilySpec,
        d["kind"],
        tuple(_complex(z) for z in d["zeros"]),
        tuple(d["mults"]),
        inner,
        d.get("branch"),
        d.get("j"),
        d.get("exponent_override"),
        _unit(d.get("gamma_angle", 0.0)),
    )


def points_from_doc(d: dict) -> list[complex]:
    return [_complex(p) for p in d["points"]]


# ---------------------------------------------------------------------------
# Objects -> documents


def _angle(u: complex) -> float:
    return float(cmath.phase(u))


def _point(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _number(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def inner_to_doc(theta: InnerFunction) -> dict:
    return {
        "gamma_angle": _angle(theta.unimodular_constant),
        "zeros": [{**_point(a), "mult": m} for a, m in theta.blaschke.factors],
        "atoms": measure_to_doc(theta.measure)["atoms"],
    }


def measure_to_doc(mu: AtomicMeasure) -> dict:
    return {"atoms": [{"angle": t, "weight": w} for t, w in mu.atoms]}


def moebius_to_doc(m: Moebius) -> dict:
    return {"gamma_angle": _angle(m.gamma), "a": _point(m.a)}


def selfmap_to_doc(phi: SelfMap) -> dict:
    if isinstance(phi, Identity):
        return {"type": "identity"}
    if isinstance(phi, Constant):
        return {"type": "constant", **_point(phi.c)}
    if isinstance(phi, Mob):
        return {"type": "moebius", **moebius_to_doc(phi.m)}
    if isinstance(phi, Inner):
        return {"type": "inner", "theta": inner_to_doc(phi.theta)}
    if isinstance(phi, Scale):
        return {"type": "scale", **_point(phi.s)}
    if isinstance(phi, Chain):
        return {"type": "chain", "maps": [selfmap_to_doc(m) for m in phi.maps]}
    raise TypeError(f"cannot serialize {type(phi).__name__}")


def problem_to_doc(problem: Problem, grid: Optional[GridSpec] = None) -> dict:
    doc = {
        "theta1": inner_to_doc(problem.theta1),
        "phi": selfmap_to_doc(problem.phi),
        "theta2": inner_to_doc(problem.theta2),
        "mode": problem.mode,
    }
    if grid is not None:
        doc["grid"] = {"radii": list(grid.radii), "angles": grid.angular_count,
                       "exclusion_radius": grid.exclusion_radius}
    return doc


def family_to_doc(spec: FamilySpec) -> dict:
    doc = {
        "kind": spec.kind,
        "zeros": [_point(z) for z in spec.zeros],
        "mults": list(spec.mults),
        "gamma_angle": _angle(spec.gamma),
    }
    if spec.j is not None:
        doc["j"] = spec.j
    if spec.branch is not None:
        doc["branch"] = spec.branch
    if spec.exponent_override is not None:
        doc["exponent_override"] = spec.exponent_override
    if isinstance(spec.inner, SelfMap):
        doc["inner"] = selfmap_to_doc(spec.inner)
    elif spec.inner is not None:
        doc["inner"] = {"type": "constant", **_point(spec.inner)}
    return doc


def check_to_doc(c) -> dict:
    if isinstance(c, ZeroCheck):
        return {
            "kind": "zero", "point": _point(c.point), "required": c.required,
            "observed": _number(c.observed), "ok": c.ok,
            "image": None if c.image is None else _point(c.image),
        }
    if isinstance(c, AtomCheck):
        return {"kind": "atom", "angle": c.angle, "required": c.required,
                "available": c.available, "ok": c.ok}
    raise TypeError(f"unknown check {c!r}")


def verdict_to_doc(v: Verdict) -> dict:
    w = v.witness
    return {
        "contained": v.contained,
        "witness": None if w is None else check_to_doc(w),
        "theorem_route": v.route,
        "boundary_case": v.boundary_case,
        "checks": [check_to_doc(c) for c in v.zero_checks + v.atom_checks],
        "notes": list(v.notes),
    }


def report_to_doc(r: Optional[OracleReport]) -> Optional[dict]:
    if r is None:
        return None
    return {
        "flag": r.flag,
        "sup_estimate": _number(r.sup_estimate) if not math.isnan(r.sup_estimate) else None,
        "log_sup": _number(r.log_sup),
        "argmax": None if r.argmax is None else _point(r.argmax),
        "samples_used": r.samples_used,
    }


def classification_to_doc(c: AutomorphismClass) -> dict:
    return {
        "tag": c.tag,
        "fixed_points": [{**_point(f.point), "location": f.location} for f in c.fixed_points],
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2)

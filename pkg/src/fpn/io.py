"""Input formats (ring patterns, module specs, polynomial strings) and
canonical report serialisation."""

from __future__ import annotations

import csv
import io as _io
import json
import re
from fractions import Fraction
from pathlib import Path

from .core import Factor, GradedRing, Monomial, PatternError, RelationSchema, RingPattern, VarRef
from .field import FieldSpec


class SpecError(ValueError):
    """Bad input file; ``code`` is stable, ``where`` locates the problem."""

    def __init__(self, code: str, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.code = code
        self.where = where


# ---------------------------------------------------------------------------
# polynomials

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_poly(ring: GradedRing, text: str, where: str = "") -> dict:
    """``"x1*x2 + 2*y1^2 - x3"`` -> packed polynomial (reduced in the ring)."""
    f = ring.field
    text = text.strip()
    if text in ("", "0"):
        return {}
    pos = 0
    out: dict = {}
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise SpecError("parse", f"cannot parse polynomial {text!r} at offset {pos}", where)
        sign, body = m.group(1), m.group(2).strip()
        pos = m.end()
        coeff = Fraction(1)
        factors = []
        for piece in body.split("*"):
            piece = piece.strip()
            if re.fullmatch(r"\d+(/\d+)?", piece):
                coeff *= Fraction(piece)
            elif piece:
                factors.append(piece)
            else:
                raise SpecError("parse", f"empty factor in {body!r}", where)
        if sign == "-":
            coeff = -coeff
        try:
            mono = Monomial.parse("*".join(factors)) if factors else Monomial()
            key = ring.pack(mono)
        except PatternError as e:
            raise SpecError("unknown-family", str(e), where) from None
        except ValueError as e:
            raise SpecError("parse", str(e), where) from None
        c = f(coeff)
        w = f.norm(out.get(key, 0) + c)
        if w:
            out[key] = w
        else:
            out.pop(key, None)
    return ring.reduce_packed(out)


def format_poly(ring: GradedRing, poly: dict) -> str:
    return ring.format_poly(poly)


# ---------------------------------------------------------------------------
# ring patterns


def _need(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SpecError("schema", f"missing field {key!r}", where)
    return obj[key]


def pattern_from_json(data: dict, name: str = "") -> RingPattern:
    try:
        field = FieldSpec.from_json(_need(data, "field", "field"))
    except ValueError as e:
        raise SpecError("schema", str(e), "field") from None
    families = []
    for i, fam in enumerate(_need(data, "families", "")):
        where = f"families[{i}]"
        rng = _need(fam, "range", where)
        if rng == "unbounded":
            rng = None
        elif isinstance(rng, list) and len(rng) == 2:
            rng = (int(rng[0]), int(rng[1]))
        else:
            raise SpecError("schema", f"bad range {rng!r}", where)
        families.append((str(_need(fam, "name", where)), rng))
    known = {f for f, _ in families}
    schemas = []
    for i, rel in enumerate(data.get("relations", [])):
        where = f"relations[{i}]"
        bounds = []
        for j, b in enumerate(rel.get("bounds", [])):
            bw = f"{where}.bounds[{j}]"
            bounds.append((str(_need(b, "var", bw)), int(b.get("min", 1)), b.get("max")))
        bound_names = {b[0] for b in bounds}
        factors = []
        for j, fac in enumerate(_need(rel, "factors", where)):
            fw = f"{where}.factors[{j}]"
            fam = _need(fac, "family", fw)
            if fam not in known:
                raise SpecError("unknown-family", f"unknown family {fam!r}", fw)
            idx = _need(fac, "index", fw)
            if isinstance(idx, int):
                var, off = None, idx
            elif "value" in idx:
                var, off = None, int(idx["value"])
            else:
                var, off = idx.get("var"), int(idx.get("offset", 0))
            if var is not None and var not in bound_names:
                raise SpecError("unbound-index", f"index variable {var!r} has no bound", fw)
            factors.append(Factor(fam, var, off, int(fac.get("exp", 1))))
        schemas.append(RelationSchema(tuple(factors), tuple(bounds)))
    try:
        return RingPattern(field, tuple(families), tuple(schemas), name=name or data.get("name", ""))
    except PatternError as e:
        raise SpecError(e.code, str(e), "relations") from None


def pattern_to_json(p: RingPattern) -> dict:
    rels = []
    for s in p.schemas:
        facs = []
        for f in s.factors:
            idx = {"value": f.offset} if f.var is None else {"var": f.var, "offset": f.offset}
            facs.append({"family": f.family, "index": idx, "exp": f.exp})
        bounds = []
        for var, lo, hi in s.bounds:
            b = {"var": var, "min": lo}
            if hi is not None:
                b["max"] = hi
            bounds.append(b)
        rels.append({"factors": facs, "bounds": bounds})
    return {
        "name": p.name,
        "field": p.field.to_json(),
        "families": [{"name": f, "range": "unbounded" if r is None else list(r)} for f, r in p.families],
        "relations": rels,
    }


def module_from_json(data: dict, where: str = "module"):
    from .tower import ModulePattern

    kind = _need(data, "kind", where)
    if kind in ("ideal", "quotient"):
        gen = _need(data, "gen", where)
        try:
            mono = Monomial.parse(gen)
        except ValueError as e:
            raise SpecError("parse", str(e), where) from None
        return ModulePattern(kind, gen=mono)
    if kind == "free":
        return ModulePattern("free", shifts=tuple(int(a) for a in data.get("shifts", [0])))
    if kind == "matrix":
        src = tuple(int(a) for a in _need(data, "shifts_source", where))
        tgt = tuple(int(a) for a in _need(data, "shifts_target", where))
        entries = _need(data, "entries", where)
        if len(entries) != len(tgt) or any(len(row) != len(src) for row in entries):
            raise SpecError("schema", "entries must be len(shifts_target) x len(shifts_source)", where)
        for r, row in enumerate(entries):
            for c, text in enumerate(row):
                _check_vars(text, f"{where}.entries[{r}][{c}]")
        return ModulePattern("matrix", shifts_source=src, shifts_target=tgt, entries=tuple(tuple(row) for row in entries))
    if kind == "sum":
        parts = tuple(module_from_json(p, f"{where}.parts[{i}]") for i, p in enumerate(_need(data, "parts", where)))
        return ModulePattern("sum", parts=parts)
    if kind == "kernel":
        return ModulePattern("kernel", parts=(module_from_json(_need(data, "of", where), f"{where}.of"),))
    raise SpecError("schema", f"unknown module kind {kind!r}", where)


def _check_vars(text: str, where: str) -> None:
    for name in re.findall(r"[A-Za-z_]+\d+", text):
        VarRef.parse(name)


def check_module_against(pattern: RingPattern, module, level: int) -> None:
    """Instantiate once so unknown variables and inhomogeneous entries surface as SpecErrors."""
    try:
        module.instantiate(pattern, level, cap=2)
    except SpecError:
        raise
    except PatternError as e:
        code = e.code if e.code in ("unknown-family", "non-homogeneous") else "schema"
        raise SpecError(code, str(e), "module") from None


def parse_spec(path) -> tuple:
    """Read a JSON ring pattern (with optional ``module``) from ``path``."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SpecError("parse", e.msg, f"{path}:{e.lineno}:{e.colno}") from None
    pattern = pattern_from_json(data, name=data.get("name", path.stem))
    module = None
    if "module" in data:
        module = module_from_json(data["module"])
        check_module_against(pattern, module, max(module.base_level, 1))
    return pattern, module


# ---------------------------------------------------------------------------
# report serialisation


def _no_floats(obj, where="report"):
    if isinstance(obj, float):
        raise TypeError(f"float in {where}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _no_floats(v, f"{where}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _no_floats(v, f"{where}[{i}]")


def canonical_json(obj) -> str:
    _no_floats(obj)
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def tower_csv(report_json: dict) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "step", "rank"])
    for entry in report_json["levels"]:
        for s in entry["betti"]:
            w.writerow([entry["level"], s["step"], s["rank"]])
    return buf.getvalue()


def parse_module_arg(text: str):
    """``ideal:x1``, ``quotient:x1*x2``, ``free``, ``free:0,1`` or inline JSON."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return module_from_json(json.loads(text), "argument")
        except json.JSONDecodeError as e:
            raise SpecError("parse", e.msg, f"argument:{e.lineno}:{e.colno}") from None
    kind, _, arg = text.partition(":")
    if kind == "free":
        shifts = [int(a) for a in arg.split(",")] if arg else [0]
        return module_from_json({"kind": "free", "shifts": shifts}, "argument")
    if kind in ("ideal", "quotient"):
        if not arg:
            raise SpecError("parse", f"{kind} needs a monomial, e.g. {kind}:x1", "argument")
        return module_from_json({"kind": kind, "gen": arg}, "argument")
    raise SpecError("parse", f"cannot read module {text!r}", "argument")


BUILTIN = {"example-1.2": "ring-1.2.json", "example-1.3": "ring-1.3.json", "free": "ring-free.json"}


def load_ring(name_or_path: str) -> tuple:
    """A shipped pattern name or a JSON file path."""
    if name_or_path in BUILTIN:
        from importlib.resources import files

        text = files("fpn").joinpath("data", BUILTIN[name_or_path]).read_text()
        data = json.loads(text)
        pattern = pattern_from_json(data, name=data.get("name", name_or_path))
        module = module_from_json(data["module"]) if "module" in data else None
        return pattern, module
    if not Path(name_or_path).exists():
        raise SpecError("parse", f"no such file or shipped pattern: {name_or_path}")
    return parse_spec(name_or_path)

"""Monomials, monomial quotient rings and infinite-variable ring patterns.

A :class:`GradedRing` is ``k[vars]/I`` with ``I`` generated by monomials of
degree at least two. Inside a ring, monomials are packed into Python ints
(8 bits per variable, first variable most significant) so that the hot
loops of the kernel engine reduce to integer arithmetic; :class:`Monomial`
is the ring-independent form used for input, output and patterns.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import NamedTuple

from .field import FieldSpec, format_scalar

_W = 8
_VMASK = (1 << (_W - 1)) - 1  # exponent bits of one field


class PatternError(ValueError):
    """Invalid ring pattern, relation schema, or truncation request."""

    def __init__(self, message: str, code: str = "pattern"):
        super().__init__(message)
        self.code = code


class VarRef(NamedTuple):
    family: str
    index: int

    def __str__(self):
        return f"{self.family}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "VarRef":
        m = re.fullmatch(r"([A-Za-z_]+)(\d+)", text.strip())
        if not m:
            raise ValueError(f"bad variable {text!r}")
        return cls(m.group(1), int(m.group(2)))


@dataclass(frozen=True, order=False)
class Monomial:
    """Product of variables with positive exponents, stored sorted by variable."""

    exps: tuple = ()

    def __post_init__(self):
        for v, e in self.exps:
            if e <= 0:
                raise ValueError("monomial exponents must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "Monomial":
        return cls(tuple(sorted((VarRef(*v), int(e)) for v, e in d.items() if e)))

    @classmethod
    def var(cls, family: str, index: int, exp: int = 1) -> "Monomial":
        return cls(((VarRef(family, index), exp),))

    @classmethod
    def parse(cls, text: str) -> "Monomial":
        text = text.strip()
        if text == "1":
            return cls()
        d: dict = {}
        for part in text.split("*"):
            name, _, e = part.strip().partition("^")
            v = VarRef.parse(name)
            d[v] = d.get(v, 0) + (int(e) if e else 1)
        return cls.from_dict(d)

    def as_dict(self) -> dict:
        return dict(self.exps)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    @property
    def variables(self) -> tuple:
        return tuple(v for v, _ in self.exps)

    def is_one(self) -> bool:
        return not self.exps

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = self.as_dict()
        for v, e in other.exps:
            d[v] = d.get(v, 0) + e
        return Monomial.from_dict(d)

    def divides(self, other: "Monomial") -> bool:
        od = other.as_dict()
        return all(od.get(v, 0) >= e for v, e in self.exps)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        d = self.as_dict()
        for v, e in other.exps:
            if d.get(v, 0) < e:
                raise ValueError(f"{other} does not divide {self}")
            d[v] -= e
        return Monomial.from_dict(d)

    def gcd(self, other: "Monomial") -> "Monomial":
        od = other.as_dict()
        return Monomial.from_dict({v: min(e, od.get(v, 0)) for v, e in self.exps})

    def lcm(self, other: "Monomial") -> "Monomial":
        d = self.as_dict()
        for v, e in other.exps:
            d[v] = max(d.get(v, 0), e)
        return Monomial.from_dict(d)

    def sort_key(self):
        # graded, then lex in (family, index) order with x1 > x2 > ...
        return (self.degree, tuple((v, -e) for v, e in self.exps))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(f"{v}^{e}" if e > 1 else str(v) for v, e in self.exps)

    __repr__ = __str__


ONE = Monomial()


def minimalize(monos) -> list:
    """Divisibility-minimal subset, canonically ordered."""
    ms = sorted(set(monos), key=Monomial.sort_key)
    out: list = []
    for m in ms:
        if not any(o.divides(m) for o in out):
            out.append(m)
    return out


class GradedRing:
    """k[vars]/(relations) for monomial relations of degree >= 2.

    Treated as immutable; a few lookup tables are memoised lazily.
    """

    def __init__(self, field: FieldSpec, variables, relations):
        self.field = field
        self.variables = tuple(sorted(VarRef(*v) for v in variables))
        if len(set(self.variables)) != len(self.variables):
            raise PatternError("duplicate variables")
        vset = set(self.variables)
        rels = []
        for r in relations:
            if r.degree < 2:
                raise PatternError(f"relation {r} has degree < 2", "low-degree")
            for v in r.variables:
                if v not in vset:
                    raise PatternError(f"relation {r} uses undeclared variable {v}", "unknown-family")
            rels.append(r)
        self.relations = tuple(minimalize(rels))
        n = len(self.variables)
        self.nvars = n
        self._index = {v: i for i, v in enumerate(self.variables)}
        self._guard = sum(1 << (_W * i + _W - 1) for i in range(n))
        self._vbits = sum(_VMASK << (_W * i) for i in range(n))
        self._ones = sum(1 << (_W * i) for i in range(n))
        self._top = _W * (n - 1) if n else 0
        self.rel_packed = tuple(self.pack(r) for r in self.relations)
        self._std_cache: dict = {}
        self._basis_cache: dict = {}

    # identity ---------------------------------------------------------
    def _key(self):
        return (self.field, self.variables, self.relations)

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        rels = ", ".join(map(str, self.relations))
        vs = ",".join(map(str, self.variables))
        return f"GradedRing({self.field}[{vs}]/({rels}))"

    @property
    def max_relation_degree(self) -> int:
        return max((r.degree for r in self.relations), default=2)

    # packed monomials ---------------------------------------------------
    def _shift(self, i: int) -> int:
        return _W * (self.nvars - 1 - i)

    def pack(self, m: Monomial) -> int:
        x = 0
        for v, e in m.exps:
            if v not in self._index:
                raise PatternError(f"variable {v} not in ring", "unknown-family")
            if e > _VMASK:
                raise ValueError("exponent too large for packed form")
            x += e << self._shift(self._index[v])
        return x

    def unpack(self, x: int) -> Monomial:
        exps = []
        for i, v in enumerate(self.variables):
            e = (x >> self._shift(i)) & _VMASK
            if e:
                exps.append((v, e))
        return Monomial(tuple(exps))

    def var(self, v) -> int:
        if isinstance(v, str):
            v = VarRef.parse(v)
        return 1 << self._shift(self._index[VarRef(*v)])

    def var_packed(self) -> list:
        return [1 << self._shift(i) for i in range(self.nvars)]

    def exponents(self, x: int) -> tuple:
        return tuple((x >> self._shift(i)) & _VMASK for i in range(self.nvars))

    def deg(self, x: int) -> int:
        return ((x * self._ones) >> self._top) & 0xFF

    def divides(self, a: int, b: int) -> bool:
        g = self._guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        g = self._guard
        ge = (((a | g) - b) & g) >> (_W - 1)
        mask = ge * _VMASK
        return (a & mask) | (b & ~mask & self._vbits)

    def gcd(self, a: int, b: int) -> int:
        g = self._guard
        ge = (((a | g) - b) & g) >> (_W - 1)
        mask = ge * _VMASK
        return (b & mask) | (a & ~mask & self._vbits)

    def is_standard(self, x: int) -> bool:
        s = self._std_cache.get(x)
        if s is None:
            g = self._guard
            s = True
            for r in self.rel_packed:
                if ((x | g) - r) & g == g:
                    s = False
                    break
            self._std_cache[x] = s
        return s

    def is_standard_monomial(self, m: Monomial) -> bool:
        return self.is_standard(self.pack(m))

    # bases ---------------------------------------------------------------
    def standard_basis_packed(self, d: int) -> list:
        """Packed standard monomials of degree d in canonical (descending) order."""
        if d < 0:
            return []
        got = self._basis_cache.get(d)
        if got is not None:
            return got
        out = []
        n = self.nvars
        shifts = [self._shift(i) for i in range(n)]

        def rec(i, rem, acc):
            if rem == 0:
                out.append(acc)
                return
            if i == n:
                return
            for e in range(rem, -1, -1):
                m = acc + (e << shifts[i])
                if e and not self.is_standard(m):
                    continue
                rec(i + 1, rem - e, m)

        rec(0, d, 0)
        out.sort(reverse=True)
        self._basis_cache[d] = out
        return out

    def standard_basis(self, d: int) -> list:
        return [self.unpack(x) for x in self.standard_basis_packed(d)]

    def dim(self, d: int) -> int:
        return len(self.standard_basis_packed(d))

    # ring arithmetic on packed polynomials {packed: coeff} ----------------
    def reduce_packed(self, poly: dict) -> dict:
        f = self.field
        out = {}
        for m, c in poly.items():
            c = f.norm(c)
            if c and self.is_standard(m):
                w = f.norm(out.get(m, 0) + c)
                if w:
                    out[m] = w
                else:
                    out.pop(m, None)
        return out

    def mul_packed(self, a: dict, b: dict) -> dict:
        f = self.field
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = m1 + m2
                if not self.is_standard(m):
                    continue
                w = f.norm(out.get(m, 0) + c1 * c2)
                if w:
                    out[m] = w
                else:
                    out.pop(m, None)
        return out

    def poly_degree(self, poly: dict):
        degs = {self.deg(m) for m in poly}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    # public element interface: {Monomial: coeff} ----------------------
    def to_packed(self, element: dict) -> dict:
        out: dict = {}
        for m, c in element.items():
            k = self.pack(m)
            out[k] = out.get(k, 0) + c
        return {k: self.field(c) for k, c in out.items() if self.field(c)}

    def from_packed(self, poly: dict) -> dict:
        return {self.unpack(m): c for m, c in poly.items()}

    def format_poly(self, poly: dict) -> str:
        if not poly:
            return "0"
        parts = []
        for m in sorted(poly, reverse=True):
            c, mono = poly[m], str(self.unpack(m))
            cs = format_scalar(c)
            parts.append(mono if cs == "1" else (cs if mono == "1" else f"{cs}*{mono}"))
        return " + ".join(parts)


def standard_basis(ring: GradedRing, degree: int) -> list:
    """Standard monomials of the given degree, canonically ordered."""
    return ring.standard_basis(degree)


def reduce(ring: GradedRing, element: dict) -> dict:
    """Normal form of ``{Monomial: coeff}``: drop monomials lying in the ideal."""
    return ring.from_packed(ring.reduce_packed(ring.to_packed(element)))


def multiply(ring: GradedRing, a: dict, b: dict) -> dict:
    return ring.from_packed(ring.mul_packed(ring.to_packed(a), ring.to_packed(b)))


# ---------------------------------------------------------------------------
# patterns


@dataclass(frozen=True)
class Factor:
    """``family_{var + offset} ^ exp``; ``var=None`` means the constant index ``offset``."""

    family: str
    var: str | None
    offset: int
    exp: int = 1


@dataclass(frozen=True)
class RelationSchema:
    factors: tuple
    bounds: tuple = ()  # ((var, min, max-or-None), ...)

    @property
    def degree(self) -> int:
        return sum(f.exp for f in self.factors)

    def bound_vars(self) -> list:
        return sorted({f.var for f in self.factors if f.var is not None})


@dataclass(frozen=True)
class RingPattern:
    """A monomial quotient ring in possibly infinitely many variables.

    ``families`` is a tuple of ``(name, range)`` with ``range`` either
    ``None`` (indices 1, 2, 3, ...) or a closed ``(lo, hi)``.
    """

    field: FieldSpec
    families: tuple
    schemas: tuple = ()
    name: str = ""
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        names = [f for f, _ in self.families]
        if len(set(names)) != len(names):
            raise PatternError("duplicate family names")
        for fam, rng in self.families:
            if rng is not None and not (1 <= rng[0] <= rng[1]):
                raise PatternError(f"bad range for family {fam}")
        fams = set(names)
        for s in self.schemas:
            bounds = {b[0]: b for b in s.bounds}
            for f in s.factors:
                if f.family not in fams:
                    raise PatternError(f"unknown family {f.family!r}", "unknown-family")
                if f.exp < 1:
                    raise PatternError("factor exponent must be >= 1")
                if f.var is None:
                    if f.offset < 1:
                        raise PatternError("constant index must be >= 1")
                else:
                    if f.var not in bounds:
                        raise PatternError(f"index variable {f.var!r} has no bound", "unbound-index")
                    if f.offset < 0:
                        raise PatternError("index offset must be >= 0")
            for var, lo, hi in s.bounds:
                if lo < 1:
                    raise PatternError(f"lower bound of {var!r} must be >= 1")
            if s.degree < 2:
                raise PatternError("relation schema of degree < 2", "low-degree")

    def family_range(self, name: str, level: int) -> tuple:
        for fam, rng in self.families:
            if fam == name:
                return (1, level) if rng is None else tuple(rng)
        raise PatternError(f"unknown family {name!r}", "unknown-family")

    def variables(self, level: int) -> list:
        out = []
        for fam, _ in self.families:
            lo, hi = self.family_range(fam, level)
            out.extend(VarRef(fam, i) for i in range(lo, hi + 1))
        return sorted(out)

    def instantiate(self, schema: RelationSchema, level: int) -> list:
        top = max([self.family_range(f, level)[1] for f, _ in self.families] + [1])
        vars_ = schema.bound_vars()
        bounds = {b[0]: b for b in schema.bounds}
        ranges = []
        for v in vars_:
            _, lo, hi = bounds[v]
            hi = top if hi is None else min(hi, top)
            ranges.append(range(lo, hi + 1))
        out = []
        for values in product(*ranges):
            env = dict(zip(vars_, values))
            d: dict = {}
            ok = True
            for f in schema.factors:
                idx = f.offset if f.var is None else env[f.var] + f.offset
                lo, hi = self.family_range(f.family, level)
                if not lo <= idx <= hi:
                    ok = False
                    break
                key = VarRef(f.family, idx)
                d[key] = d.get(key, 0) + f.exp
            if ok:
                out.append(Monomial.from_dict(d))
        return out

    def truncate(self, level: int) -> GradedRing:
        if level < 1:
            raise PatternError(f"truncation level must be >= 1, got {level}", "bad-level")
        got = self._cache.get(level)
        if got is None:
            rels = []
            for s in self.schemas:
                rels.extend(self.instantiate(s, level))
            got = GradedRing(self.field, self.variables(level), rels)
            self._cache[level] = got
        return got


def truncate_pattern(pattern: RingPattern, level: int) -> GradedRing:
    return pattern.truncate(level)


def _fac(family, var, offset=0, exp=1):
    return Factor(family, var, offset, exp)


def example_12_pattern(field: FieldSpec | None = None) -> RingPattern:
    """k[x1, x2, ...]/(x_i x_j : i, j >= 1), squares included."""
    from .field import F2

    return RingPattern(
        field or F2,
        (("x", None),),
        (RelationSchema((_fac("x", "i"), _fac("x", "j")), (("i", 1, None), ("j", 1, None))),),
        name="example-1.2",
    )


def example_13_pattern(field: FieldSpec | None = None) -> RingPattern:
    """k[..., x2, x1, y1, y2, ...]/(x_{j+1} x_j, x1 y1, y1 y_i)."""
    from .field import F2

    return RingPattern(
        field or F2,
        (("x", None), ("y", None)),
        (
            RelationSchema((_fac("x", "j", 1), _fac("x", "j")), (("j", 1, None),)),
            RelationSchema((_fac("x", None, 1), _fac("y", None, 1))),
            RelationSchema((_fac("y", None, 1), _fac("y", "i")), (("i", 1, None),)),
        ),
        name="example-1.3",
    )


def free_pattern(field: FieldSpec, families=("x",)) -> RingPattern:
    return RingPattern(field, tuple((f, None) for f in families), (), name="free")

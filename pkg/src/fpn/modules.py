"""Finitely presented graded modules and exact degreewise kernels.

Elements of a free module ``F = (+)_c R(-a_c)`` are dicts ``{(c, m): coeff}``
with ``m`` a packed standard monomial. A homogeneous matrix stores its
nonzero entries as packed polynomials keyed by ``(row, col)``.

Kernels are computed in one of two ways. The general path row-reduces the
full degree-d piece of the source for each d. When every entry is a scalar
times a monomial and the free modules carry compatible multidegrees, the
map splits over multidegrees; minimal kernel generators can then only sit
at lcm's of the "events" (source generators, relation multiples of source
and target generators), so only those multidegrees are visited.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .core import _VMASK, _W, GradedRing, Monomial, PatternError, minimalize
from .linalg import Echelon, nullspace


@dataclass(frozen=True)
class GradedFreeModule:
    """(+)_i R(-shifts[i]); optional packed multidegrees per generator."""

    shifts: tuple = ()
    multidegrees: tuple | None = None

    def __post_init__(self):
        if self.multidegrees is not None and len(self.multidegrees) != len(self.shifts):
            raise ValueError("multidegrees and shifts differ in length")

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def basis(self, ring: GradedRing, d: int) -> list:
        return [(c, s) for c, a in enumerate(self.shifts) for s in ring.standard_basis_packed(d - a)]

    def dim(self, ring: GradedRing, d: int) -> int:
        return sum(ring.dim(d - a) for a in self.shifts)

    def __add__(self, other: "GradedFreeModule") -> "GradedFreeModule":
        md = None
        if self.multidegrees is not None and other.multidegrees is not None:
            md = self.multidegrees + other.multidegrees
        return GradedFreeModule(self.shifts + other.shifts, md)


class HomMatrix:
    """Degree-preserving map source -> target given by homogeneous entries."""

    def __init__(self, ring: GradedRing, source: GradedFreeModule, target: GradedFreeModule, entries: dict):
        self.ring = ring
        self.source = source
        self.target = target
        clean = {}
        for (r, c), poly in entries.items():
            if not (0 <= r < target.rank and 0 <= c < source.rank):
                raise IndexError(f"entry ({r},{c}) outside {target.rank}x{source.rank}")
            poly = ring.reduce_packed(poly)
            if not poly:
                continue
            want = source.shifts[c] - target.shifts[r]
            for m in poly:
                if ring.deg(m) != want:
                    raise PatternError(
                        f"entry ({r},{c}) = {ring.format_poly(poly)} is not homogeneous of degree {want}",
                        "non-homogeneous",
                    )
            clean[(r, c)] = poly
        self.entries = clean
        self._cols = None

    @property
    def shape(self):
        return (self.target.rank, self.source.rank)

    def column(self, c: int) -> dict:
        if self._cols is None:
            cols: dict = {}
            for (r, cc), poly in self.entries.items():
                cols.setdefault(cc, {})[r] = poly
            self._cols = cols
        return self._cols.get(c, {})

    def apply_basis(self, c: int, s: int) -> dict:
        ring = self.ring
        f = ring.field
        out: dict = {}
        for r, poly in self.column(c).items():
            for m, a in poly.items():
                t = s + m
                if ring.is_standard(t):
                    k = (r, t)
                    w = f.norm(out.get(k, 0) + a)
                    if w:
                        out[k] = w
                    else:
                        del out[k]
        return out

    def apply(self, elem: dict) -> dict:
        f = self.ring.field
        out: dict = {}
        for (c, s), coeff in elem.items():
            for k, v in self.apply_basis(c, s).items():
                w = f.norm(out.get(k, 0) + coeff * v)
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return out

    def is_multigraded(self) -> bool:
        smd, tmd = self.source.multidegrees, self.target.multidegrees
        if smd is None or tmd is None:
            return False
        for (r, c), poly in self.entries.items():
            if len(poly) != 1:
                return False
            (m,) = poly
            if m + tmd[r] != smd[c]:
                return False
        return True

    def has_unit_entries(self) -> bool:
        return any(0 in poly for poly in self.entries.values())

    def compose(self, other: "HomMatrix") -> "HomMatrix":
        """self o other (other: A -> B, self: B -> C)."""
        ring = self.ring
        f = ring.field
        out: dict = {}
        for (k, c), q in other.entries.items():
            for r, p in self.column(k).items():
                prod = ring.mul_packed(p, q)
                acc = out.setdefault((r, c), {})
                for m, v in prod.items():
                    w = f.norm(acc.get(m, 0) + v)
                    if w:
                        acc[m] = w
                    else:
                        acc.pop(m, None)
        return HomMatrix(ring, other.source, self.target, out)

    def is_zero(self) -> bool:
        return not self.entries

    def format(self) -> list:
        rows, cols = self.shape
        return [[self.ring.format_poly(self.entries.get((r, c), {})) for c in range(cols)] for r in range(rows)]

    def __repr__(self):
        return f"HomMatrix({self.shape[0]}x{self.shape[1]}, src={list(self.source.shifts)}, tgt={list(self.target.shifts)})"


@dataclass(frozen=True)
class KernelGen:
    degree: int
    vector: dict  # {(col, packed monomial): coeff}
    multidegree: int | None = None


@dataclass
class KernelGens:
    generators: list
    degree_cap: int
    complete: bool
    path: str = "degree"

    @property
    def degrees(self) -> list:
        return [g.degree for g in self.generators]


@dataclass
class FPModule:
    """coker(presentation: F1 -> F0)."""

    ring: GradedRing
    presentation: HomMatrix
    provenance: tuple = ("matrix",)
    minimal: bool = dc_field(default=False)

    @property
    def generators(self) -> GradedFreeModule:
        return self.presentation.target

    def describe(self) -> str:
        kind = self.provenance[0]
        if kind in ("ideal", "quotient"):
            return f"{kind}({self.provenance[1]})"
        return kind


# ---------------------------------------------------------------------------
# annihilators and module constructors


def ann_packed(ring: GradedRing, u: int) -> list:
    if not ring.is_standard(u):
        raise ValueError(f"{ring.unpack(u)} is zero in the ring")
    cands = set()
    for r in ring.rel_packed:
        v = r - ring.gcd(r, u)
        if ring.is_standard(v):
            cands.add(v)
    mins = minimalize(ring.unpack(v) for v in cands)
    return [ring.pack(m) for m in mins]


def ann_gens(ring: GradedRing, u: Monomial) -> list:
    """Minimal monomial generators of Ann_R(u) for a standard monomial u."""
    return [ring.unpack(v) for v in ann_packed(ring, ring.pack(u))]


def ideal_module(ring: GradedRing, u: Monomial) -> FPModule:
    pu = ring.pack(u)
    gens = ann_packed(ring, pu)
    du = u.degree
    src = GradedFreeModule(tuple(du + ring.deg(v) for v in gens), tuple(pu + v for v in gens))
    tgt = GradedFreeModule((du,), (pu,))
    mat = HomMatrix(ring, src, tgt, {(0, i): {v: 1} for i, v in enumerate(gens)})
    return FPModule(ring, mat, ("ideal", u), minimal=True)


def quotient_module(ring: GradedRing, u: Monomial) -> FPModule:
    pu = ring.pack(u)
    if not ring.is_standard(pu):
        raise ValueError(f"{u} is zero in the ring")
    src = GradedFreeModule((u.degree,), (pu,))
    tgt = GradedFreeModule((0,), (0,))
    mat = HomMatrix(ring, src, tgt, {(0, 0): {pu: 1}})
    return FPModule(ring, mat, ("quotient", u), minimal=not u.is_one())


def free_module(ring: GradedRing, shifts=(0,)) -> FPModule:
    md = tuple(_power_of_first(ring, a) for a in shifts)
    mat = HomMatrix(ring, GradedFreeModule((), ()), GradedFreeModule(tuple(shifts), md), {})
    return FPModule(ring, mat, ("free", tuple(shifts)), minimal=True)


def _power_of_first(ring: GradedRing, a: int):
    # any monomial of degree a serves as multidegree of a free summand
    if ring.nvars == 0:
        return None if a else 0
    return a * ring.var_packed()[0]


def infer_multidegrees(ring: GradedRing, source: GradedFreeModule, target: GradedFreeModule, entries: dict):
    """Multidegrees making a monomial matrix multigraded, or None if there are none.

    Each nonzero entry m at (r, c) forces md(c) = md(r) * m; we propagate
    exponent offsets through each connected block, then lift the block so
    every exponent is >= 0 and the degrees match the shifts.
    """
    if any(len(p) != 1 for p in entries.values()):
        return None
    n = ring.nvars
    adj: dict = {}
    for (r, c), poly in entries.items():
        (m,) = poly
        e = ring.exponents(m)
        adj.setdefault(("t", r), []).append((("s", c), e, 1))
        adj.setdefault(("s", c), []).append((("t", r), e, -1))
    nodes = [("t", r) for r in range(target.rank)] + [("s", c) for c in range(source.rank)]
    shift = {("t", r): a for r, a in enumerate(target.shifts)}
    shift.update({("s", c): a for c, a in enumerate(source.shifts)})
    off: dict = {}
    for root in nodes:
        if root in off:
            continue
        off[root] = (0,) * n
        block, stack = [root], [root]
        while stack:
            u = stack.pop()
            for v, e, sign in adj.get(u, ()):
                want = tuple(a + sign * b for a, b in zip(off[u], e))
                if v in off:
                    if off[v] != want:
                        return None
                else:
                    off[v] = want
                    block.append(v)
                    stack.append(v)
        lift = [max(0, -min(off[v][i] for v in block)) for i in range(n)] if n else []
        base = sum(lift) + sum(off[root])
        extra = shift[root] - base
        if extra < 0 or (extra and not n):
            return None
        if n:
            lift[0] += extra
        for v in block:
            off[v] = tuple(a + b for a, b in zip(off[v], lift))
    def pack(e):
        return sum(k << ring._shift(i) for i, k in enumerate(e))
    if any(k > 127 for v in off.values() for k in v):
        return None
    smd = tuple(pack(off[("s", c)]) for c in range(source.rank))
    tmd = tuple(pack(off[("t", r)]) for r in range(target.rank))
    return smd, tmd


def with_multidegrees(matrix: HomMatrix) -> HomMatrix:
    """The same matrix with inferred multidegrees when that is possible."""
    if matrix.is_multigraded():
        return matrix
    got = infer_multidegrees(matrix.ring, matrix.source, matrix.target, matrix.entries)
    if got is None:
        return matrix
    smd, tmd = got
    return HomMatrix(
        matrix.ring,
        GradedFreeModule(matrix.source.shifts, smd),
        GradedFreeModule(matrix.target.shifts, tmd),
        matrix.entries,
    )


def make_module(ring: GradedRing, kind: str, arg) -> FPModule:
    if kind == "ideal":
        return ideal_module(ring, arg)
    if kind == "quotient":
        return quotient_module(ring, arg)
    if kind == "matrix":
        if isinstance(arg, HomMatrix):
            return FPModule(ring, arg, ("matrix",))
        raise TypeError("matrix modules take a HomMatrix")
    if kind == "free":
        return free_module(ring, arg)
    raise ValueError(f"unknown module kind {kind!r}")


def direct_sum(a: FPModule, b: FPModule) -> FPModule:
    if a.ring != b.ring:
        raise ValueError("direct sum over different rings")
    pa, pb = a.presentation, b.presentation
    r0, c0 = pa.shape
    entries = dict(pa.entries)
    for (r, c), poly in pb.entries.items():
        entries[(r + r0, c + c0)] = poly
    mat = HomMatrix(a.ring, pa.source + pb.source, pa.target + pb.target, entries)
    return FPModule(a.ring, mat, ("sum", a.provenance, b.provenance), minimal=a.minimal and b.minimal)


# ---------------------------------------------------------------------------
# degreewise linear algebra


def image_echelon(matrix: HomMatrix, d: int) -> Echelon:
    """Row-reduced span of the image of the degree-d piece of the source."""
    ech = Echelon(matrix.ring.field)
    for c, s in matrix.source.basis(matrix.ring, d):
        v = matrix.apply_basis(c, s)
        if v:
            ech.add(v)
    return ech


def graded_dims(module: FPModule, cap: int) -> list:
    """dim (F0 / im d1)_d for d = 0..cap."""
    ring = module.ring
    pres = module.presentation
    return [pres.target.dim(ring, d) - image_echelon(pres, d).rank for d in range(cap + 1)]


def _mul_elem(ring: GradedRing, t: int, elem: dict) -> dict:
    out = {}
    for (c, s), v in elem.items():
        m = s + t
        if ring.is_standard(m):
            out[(c, m)] = v
    return out


def _kernel_degreewise(matrix: HomMatrix, cap: int) -> list:
    ring = matrix.ring
    f = ring.field
    shifts = matrix.source.shifts
    gens: list = []
    if not shifts:
        return gens
    for d in range(min(shifts), cap + 1):
        basis = matrix.source.basis(ring, d)
        if not basis:
            continue
        index = {b: i for i, b in enumerate(basis)}
        kern = nullspace(f, [matrix.apply_basis(c, s) for c, s in basis])
        if not kern:
            continue
        lower = Echelon(f)
        for g in gens:
            for t in ring.standard_basis_packed(d - g.degree):
                v = _mul_elem(ring, t, g.vector)
                if v:
                    lower.add({index[k]: c for k, c in v.items()})
        for k in kern:
            if lower.add(k):
                gens.append(KernelGen(d, {basis[i]: c for i, c in k.items()}))
    return gens


def _lcm_closure(ring: GradedRing, mu: list, nu: list, cap: int) -> list:
    """Multidegrees that can carry minimal kernel generators, up to degree cap."""
    rels = ring.rel_packed
    deg = ring.deg
    events = set()
    for m in mu:
        if deg(m) <= cap:
            events.add(m)
            events.update(g + m for g in rels)
    events.update(g + n for n in set(nu) for g in rels)
    events = [h for h in events if deg(h) <= cap]
    mu_set = sorted(set(mu))

    def in_support(a):
        for m in mu_set:
            if ring.divides(m, a) and ring.is_standard(a - m):
                return True
        return False

    seen = {m for m in mu_set if deg(m) <= cap}
    frontier = list(seen)
    tried = set(seen)
    g, vbits, vmask = ring._guard, ring._vbits, _VMASK
    while frontier:
        nxt = []
        for a in frontier:
            ag = a | g
            for h in events:
                # lcm(a, h), inlined from GradedRing.lcm
                mask = (((ag - h) & g) >> (_W - 1)) * vmask
                b = (a & mask) | (h & ~mask & vbits)
                if b in tried:
                    continue
                tried.add(b)
                if deg(b) <= cap and in_support(b):
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(seen, key=lambda a: (deg(a), -a))


def _kernel_multigraded(matrix: HomMatrix, cap: int) -> list:
    ring = matrix.ring
    f = ring.field
    mu = list(matrix.source.multidegrees)
    nu = list(matrix.target.multidegrees)
    cols = []
    for c in range(matrix.source.rank):
        cols.append([(r, next(iter(p.values()))) for r, p in sorted(matrix.column(c).items())])
    std = ring.is_standard
    div = ring.divides
    gens: list = []
    by_alpha: list = []
    for alpha in _lcm_closure(ring, mu, nu, cap):
        src = [c for c, m in enumerate(mu) if div(m, alpha) and std(alpha - m)]
        if not src:
            continue
        images = []
        for c in src:
            images.append({r: a for r, a in cols[c] if std(alpha - nu[r])})
        kern = nullspace(f, images)
        if not kern:
            continue
        pos = {c: i for i, c in enumerate(src)}
        lower = Echelon(f)
        for gamma, vec in by_alpha:
            if gamma != alpha and div(gamma, alpha):
                v = {pos[c]: a for c, a in vec.items() if c in pos}
                if v:
                    lower.add(v)
        d = ring.deg(alpha)
        for k in kern:
            if lower.add(k):
                vec = {src[i]: a for i, a in k.items()}
                by_alpha.append((alpha, vec))
                gens.append(KernelGen(d, {(c, alpha - mu[c]): a for c, a in vec.items()}, alpha))
    return gens


def kernel_min_gens(matrix: HomMatrix, cap: int, path: str | None = None) -> KernelGens:
    """Minimal homogeneous generators of ker(matrix) in degrees <= cap.

    ``complete`` is set when the two top degrees cap-1 and cap produce no
    new generators (a quiet tail; the found set then spans the kernel
    in those degrees by construction).
    """
    if path is None:
        path = "multigraded" if matrix.is_multigraded() else "degree"
    if path == "multigraded":
        gens = _kernel_multigraded(matrix, cap)
    else:
        gens = _kernel_degreewise(matrix, cap)
    complete = not any(g.degree >= cap - 1 for g in gens)
    return KernelGens(gens, cap, complete, path)


def kernel_dim(matrix: HomMatrix, d: int) -> int:
    """dim of the degree-d kernel by rank-nullity on the full degree piece."""
    return matrix.source.dim(matrix.ring, d) - image_echelon(matrix, d).rank


def matrix_from_gens(source: GradedFreeModule, ring: GradedRing, gens: list) -> HomMatrix:
    """Matrix whose columns are the given kernel generators (elements of ``source``)."""
    entries: dict = {}
    shifts = []
    mds = []
    for j, g in enumerate(gens):
        shifts.append(g.degree)
        mds.append(g.multidegree)
        for (c, s), a in g.vector.items():
            entries.setdefault((c, j), {})[s] = a
    md = tuple(mds) if all(m is not None for m in mds) else None
    return HomMatrix(ring, GradedFreeModule(tuple(shifts), md), source, entries)


# ---------------------------------------------------------------------------
# presentation minimisation


def _drop_unit(matrix: HomMatrix) -> HomMatrix | None:
    ring = matrix.ring
    f = ring.field
    for (r, c), poly in sorted(matrix.entries.items()):
        if 0 in poly:
            u_inv = f.inv(poly[0])
            row = {cc: p for (rr, cc), p in matrix.entries.items() if rr == r and cc != c}
            col = {rr: p for (rr, cc), p in matrix.entries.items() if cc == c and rr != r}
            new: dict = {}
            for (rr, cc), p in matrix.entries.items():
                if rr != r and cc != c:
                    new[(rr, cc)] = dict(p)
            for rr, p in col.items():
                for cc, q in row.items():
                    prod = ring.mul_packed(p, q)
                    acc = new.setdefault((rr, cc), {})
                    for m, v in prod.items():
                        w = f.norm(acc.get(m, 0) - u_inv * v)
                        if w:
                            acc[m] = w
                        else:
                            acc.pop(m, None)
            rmap = [i for i in range(matrix.target.rank) if i != r]
            cmap = [j for j in range(matrix.source.rank) if j != c]
            rinv = {old: i for i, old in enumerate(rmap)}
            cinv = {old: j for j, old in enumerate(cmap)}

            def sub(fm, keep):
                md = None if fm.multidegrees is None else tuple(fm.multidegrees[i] for i in keep)
                return GradedFreeModule(tuple(fm.shifts[i] for i in keep), md)

            ent = {(rinv[rr], cinv[cc]): p for (rr, cc), p in new.items() if p}
            return HomMatrix(ring, sub(matrix.source, cmap), sub(matrix.target, rmap), ent)
    return None


def _prune_columns(matrix: HomMatrix) -> HomMatrix:
    ring = matrix.ring
    order = sorted(range(matrix.source.rank), key=lambda c: matrix.source.shifts[c])
    kept: list = []
    for c in order:
        a = matrix.source.shifts[c]
        img = matrix.apply_basis(c, 0)
        if not img:
            continue
        ech = Echelon(ring.field)
        for k in kept:
            for t in ring.standard_basis_packed(a - matrix.source.shifts[k]):
                v = matrix.apply_basis(k, t)
                if v:
                    ech.add(v)
        if ech.reduce(img):
            kept.append(c)
    kept.sort()
    if len(kept) == matrix.source.rank:
        return matrix
    cinv = {old: j for j, old in enumerate(kept)}
    md = None if matrix.source.multidegrees is None else tuple(matrix.source.multidegrees[i] for i in kept)
    src = GradedFreeModule(tuple(matrix.source.shifts[i] for i in kept), md)
    ent = {(r, cinv[c]): p for (r, c), p in matrix.entries.items() if c in cinv}
    return HomMatrix(ring, src, matrix.target, ent)


def minimal_presentation(module: FPModule) -> HomMatrix:
    """Equivalent presentation with no unit entries and no redundant relations."""
    mat = module.presentation
    if module.minimal:
        return mat
    while True:
        nxt = _drop_unit(mat)
        if nxt is None:
            break
        mat = nxt
    return _prune_columns(mat)

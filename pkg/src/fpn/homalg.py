"""Degreewise modules, graded duals, Ext and Tor dimension profiles.

A :class:`GVModule` is a finite-dimensional graded module given by its
graded pieces (degrees -cap..cap) and one matrix per variable and degree.
Modules converted from a presentation are truncated above ``cap``; the
truncation ``M / M_{>cap}`` is itself a module, so every identity below
holds exactly for the truncated object.

The character module is realised as the graded linear dual, with
``(M^v)_d = (M_{-d})^*`` and transposed variable actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .core import GradedRing
from .linalg import Echelon
from .modules import FPModule, HomMatrix, direct_sum as fp_direct_sum
from .resolution import Resolution, minimal_resolution


@dataclass
class GVModule:
    """Graded pieces ``dims[d]`` for lo <= d <= hi and variable actions.

    ``ops[(v, d)]`` is the action of variable v from degree d to d+1,
    stored as a list (one sparse column per basis vector of degree d).
    Missing entries act as zero.
    """

    ring: GradedRing
    lo: int
    hi: int
    dims: dict
    ops: dict
    provenance: str = ""
    _mono_cache: dict = dc_field(default_factory=dict, repr=False)

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dims_list(self) -> list:
        return [self.dim(d) for d in range(self.lo, self.hi + 1)]

    def support(self):
        ds = [d for d, n in self.dims.items() if n]
        return (min(ds), max(ds)) if ds else None

    def act_var(self, v: int, d: int, vec: dict) -> dict:
        """Apply variable v to a sparse vector of degree d."""
        if not vec:
            return {}
        cols = self.ops.get((v, d))
        if cols is None:
            return {}
        f = self.ring.field
        out: dict = {}
        for k, a in vec.items():
            for j, b in cols[k].items():
                w = f.norm(out.get(j, 0) + a * b)
                if w:
                    out[j] = w
                else:
                    del out[j]
        return out

    def act_mono(self, m: int, d: int, vec: dict) -> dict:
        exps = self.ring.exponents(m)
        for v, e in enumerate(exps):
            for _ in range(e):
                vec = self.act_var(v, d, vec)
                d += 1
                if not vec:
                    return {}
        return vec

    def act_poly(self, poly: dict, d: int, vec: dict) -> dict:
        f = self.ring.field
        out: dict = {}
        for m, c in poly.items():
            for j, b in self.act_mono(m, d, vec).items():
                w = f.norm(out.get(j, 0) + c * b)
                if w:
                    out[j] = w
                else:
                    del out[j]
        return out

    def check_module_axioms(self) -> bool:
        """Variables commute and every relation acts as zero."""
        n = self.ring.nvars
        for d in range(self.lo, self.hi + 1):
            for k in range(self.dim(d)):
                e = {k: 1}
                for v in range(n):
                    xv = self.act_var(v, d, e)
                    for w in range(v + 1, n):
                        if self.act_var(w, d + 1, xv) != self.act_var(v, d + 1, self.act_var(w, d, e)):
                            return False
                for r in self.ring.rel_packed:
                    if self.act_mono(r, d, e):
                        return False
        return True


class _Cokernel:
    """Degreewise coordinates on F0 / im(d1) for degrees lo..hi."""

    def __init__(self, module: FPModule, lo: int, hi: int):
        self.module = module
        ring = module.ring
        self.ring = ring
        pres = module.presentation
        self.pieces = {}
        for d in range(lo, hi + 1):
            basis = pres.target.basis(ring, d)
            ech = Echelon(ring.field)
            for c, s in pres.source.basis(ring, d):
                v = pres.apply_basis(c, s)
                if v:
                    ech.add(v)
            quot = [b for b in basis if b not in ech.rows]
            self.pieces[d] = (ech, quot, {b: i for i, b in enumerate(quot)})

    def dim(self, d: int) -> int:
        p = self.pieces.get(d)
        return len(p[1]) if p else 0

    def coords(self, d: int, elem: dict) -> dict:
        p = self.pieces.get(d)
        if p is None:
            return {}
        ech, _, index = p
        out = {}
        for k, a in ech.reduce(elem).items():
            if k not in index:
                raise ValueError(f"{k} is not a degree-{d} basis element of the target")
            out[index[k]] = a
        return out

    def basis_elem(self, d: int, k: int) -> dict:
        return {self.pieces[d][1][k]: 1}


def to_gv(module: FPModule, cap: int, lo: int | None = None) -> GVModule:
    """Degreewise realisation of ``module`` truncated above degree ``cap``."""
    lo = -cap if lo is None else lo
    ring = module.ring
    ck = _Cokernel(module, lo, cap)
    dims = {d: ck.dim(d) for d in range(lo, cap + 1)}
    ops = {}
    xs = ring.var_packed()
    for d in range(lo, cap):
        if not dims[d] or not dims[d + 1]:
            continue
        for v, x in enumerate(xs):
            cols = []
            for (r, s) in ck.pieces[d][1]:
                t = s + x
                cols.append(ck.coords(d + 1, {(r, t): 1}) if ring.is_standard(t) else {})
            ops[(v, d)] = cols
    gv = GVModule(ring, lo, cap, dims, ops, f"gv({module.describe()})")
    gv._cokernel = ck
    return gv


def zero_gv(ring: GradedRing, cap: int) -> GVModule:
    return GVModule(ring, -cap, cap, {d: 0 for d in range(-cap, cap + 1)}, {}, "zero")


def _transpose(cols: list, nrows: int) -> list:
    out = [dict() for _ in range(nrows)]
    for k, col in enumerate(cols):
        for j, a in col.items():
            out[j][k] = a
    return out


def dual_module(m: GVModule, cap: int | None = None) -> GVModule:
    """Graded linear dual: degree d piece is the dual of degree -d."""
    lo, hi = -m.hi, -m.lo
    dims = {d: m.dim(-d) for d in range(lo, hi + 1)}
    ops = {}
    for (v, d), cols in m.ops.items():
        # x: M_d -> M_{d+1} dualises to (M^v)_{-d-1} -> (M^v)_{-d}
        ops[(v, -d - 1)] = _transpose(cols, m.dim(d + 1))
    return GVModule(m.ring, lo, hi, dims, ops, f"dual({m.provenance})")


def gv_direct_sum(a: GVModule, b: GVModule) -> GVModule:
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    dims = {d: a.dim(d) + b.dim(d) for d in range(lo, hi + 1)}
    ops = {}
    keys = set(a.ops) | set(b.ops)
    for v, d in keys:
        na = a.dim(d)
        ca = a.ops.get((v, d), [{} for _ in range(na)])
        cb = b.ops.get((v, d), [{} for _ in range(b.dim(d))])
        shift = a.dim(d + 1)
        ops[(v, d)] = [dict(c) for c in ca] + [{j + shift: x for j, x in c.items()} for c in cb]
    return GVModule(a.ring, lo, hi, dims, ops, f"({a.provenance}+{b.provenance})")


def gv_summand(m: GVModule, keep: dict) -> GVModule:
    """Sub-GV spanned by basis vectors ``keep[d]`` (must be a direct summand
    split by the coordinate idempotent; checked by the caller)."""
    dims = {d: len(keep.get(d, ())) for d in range(m.lo, m.hi + 1)}
    pos = {d: {k: i for i, k in enumerate(keep.get(d, ()))} for d in keep}
    ops = {}
    for (v, d), cols in m.ops.items():
        src = keep.get(d, ())
        tgt = pos.get(d + 1, {})
        ops[(v, d)] = [{tgt[j]: a for j, a in cols[k].items() if j in tgt} for k in src]
    return GVModule(m.ring, m.lo, m.hi, dims, ops, f"summand({m.provenance})")


def gv_shift(m: GVModule, a: int) -> GVModule:
    """M(a): degree d piece is M_{d+a}."""
    dims = {d - a: n for d, n in m.dims.items()}
    ops = {(v, d - a): cols for (v, d), cols in m.ops.items()}
    return GVModule(m.ring, m.lo - a, m.hi - a, dims, ops, f"{m.provenance}({a})")


# ---------------------------------------------------------------------------
# Ext and Tor


@dataclass
class HomologyResult:
    kind: str  # "ext" or "tor"
    i: int
    dims: dict
    complete_below: int
    complete_from: int
    resolution_cap: int

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total == 0

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "dims": {str(d): n for d, n in sorted(self.dims.items())},
            "complete_below": self.complete_below,
            "complete_from": self.complete_from,
        }


ExtResult = HomologyResult
TorResult = HomologyResult


def _resolution_cap(ring: GradedRing, cap: int, i: int) -> int:
    return cap + i * ring.max_relation_degree


def resolve_for(module: FPModule, i: int, cap: int) -> Resolution:
    return minimal_resolution(module, i + 1, _resolution_cap(module.ring, cap, i))


def _hom_rank(res: Resolution, n: GVModule, i: int, d: int) -> int:
    """rank of Hom(d_{i+1}, N) in degree d, from Hom(F_i, N)_d."""
    if i + 1 > res.length:
        return 0
    mat = res.differentials[i]
    ech = Echelon(n.ring.field)
    src = res.free(i)
    for r, a in enumerate(src.shifts):
        e = a + d
        cols = {c: p for (rr, c), p in mat.entries.items() if rr == r}
        if not cols:
            continue
        for k in range(n.dim(e)):
            img = {}
            for c, poly in cols.items():
                for j, b in n.act_poly(poly, e, {k: 1}).items():
                    img[(c, j)] = b
            if img:
                ech.add(img)
    return ech.rank


def _tensor_rank(res: Resolution, n: GVModule, i: int, e: int) -> int:
    """rank of d_i (x) N in degree e, from (F_i (x) N)_e (i >= 1)."""
    if i < 1 or i > res.length:
        return 0
    mat = res.differentials[i - 1]
    ech = Echelon(n.ring.field)
    src = res.free(i)
    for c, a in enumerate(src.shifts):
        col = mat.column(c)
        if not col:
            continue
        for k in range(n.dim(e - a)):
            img = {}
            for r, poly in col.items():
                for j, b in n.act_poly(poly, e - a, {k: 1}).items():
                    img[(r, j)] = b
            if img:
                ech.add(img)
    return ech.rank


def _exact_window(res: Resolution, n: GVModule, i: int, cap: int):
    steps_ok = all(res.complete[: i + 2]) and res.length >= i + 1
    sup = n.support()
    if steps_ok or sup is None:
        return cap + 1, -cap
    lo, hi = sup
    rc = res.degree_cap
    return min(cap + 1, rc + lo + 1), max(-cap, hi - rc)


def ext_dims(module: FPModule, n: GVModule, i: int, cap: int, resolution: Resolution | None = None) -> HomologyResult:
    """dim Ext^i(M, N)_d for -cap <= d <= cap, from a free resolution of M."""
    if i < 0:
        raise ValueError("i must be >= 0")
    res = resolution if resolution is not None else resolve_for(module, i, cap)
    dims = {}
    for d in range(-cap, cap + 1):
        if i > res.length:
            dims[d] = 0
            continue
        c_i = sum(n.dim(a + d) for a in res.free(i).shifts)
        out_rank = _hom_rank(res, n, i, d)
        in_rank = _hom_rank(res, n, i - 1, d) if i >= 1 else 0
        dims[d] = c_i - out_rank - in_rank
    below, start = _exact_window(res, n, i, cap)
    return HomologyResult("ext", i, dims, below, start, res.degree_cap)


def tor_dims(module: FPModule, n: GVModule, i: int, cap: int, resolution: Resolution | None = None) -> HomologyResult:
    """dim Tor_i(M, N)_e for -cap <= e <= cap, from a free resolution of M."""
    if i < 0:
        raise ValueError("i must be >= 0")
    res = resolution if resolution is not None else resolve_for(module, i, cap)
    dims = {}
    for e in range(-cap, cap + 1):
        if i > res.length:
            dims[e] = 0
            continue
        c_i = sum(n.dim(e - a) for a in res.free(i).shifts)
        dims[e] = c_i - _tensor_rank(res, n, i, e) - _tensor_rank(res, n, i + 1, e)
    below, start = _exact_window(res, n, i, cap)
    return HomologyResult("tor", i, dims, below, start, res.degree_cap)


@dataclass
class DualityReport:
    cap: int
    ext_dual: dict  # Ext^1(M, N^v)_d
    tor: dict  # Tor_1(M, N)_d
    tor_dual: dict  # Tor_1(M, N^v)_d
    ext: dict  # Ext^1(M, N)_d
    violations: list  # (identity, degree, lhs, rhs)

    @property
    def ok(self) -> bool:
        return not self.violations


def duality_check(m: FPModule, n: FPModule, cap: int, i: int = 1) -> DualityReport:
    """Ext^i(M, N^v)_d vs Tor_i(M, N)_{-d}, and Tor_i(M, N^v)_d vs Ext^i(M, N)_{-d}."""
    gn = to_gv(n, cap)
    gd = dual_module(gn)
    res = resolve_for(m, i, cap)
    e_dual = ext_dims(m, gd, i, cap, res).dims
    t = tor_dims(m, gn, i, cap, res).dims
    t_dual = tor_dims(m, gd, i, cap, res).dims
    e = ext_dims(m, gn, i, cap, res).dims
    bad = []
    for d in range(-cap, cap + 1):
        if e_dual[d] != t[-d]:
            bad.append(("ext-dual=tor", d, e_dual[d], t[-d]))
        if t_dual[d] != e[-d]:
            bad.append(("tor-dual=ext", d, t_dual[d], e[-d]))
    return DualityReport(cap, e_dual, t, t_dual, e, bad)


def rel_injective(m: GVModule, family, cap: int) -> bool:
    """Ext^1(F, M) = 0 within the window for every F in ``family``."""
    if not family:
        raise ValueError("family must be nonempty")
    return all(ext_dims(f, m, 1, cap).is_zero() for f in family)


def rel_flat(m: GVModule, family, cap: int) -> bool:
    """Tor_1(F, M) = 0 within the window for every F in ``family``."""
    if not family:
        raise ValueError("family must be nonempty")
    return all(tor_dims(f, m, 1, cap).is_zero() for f in family)


# ---------------------------------------------------------------------------
# induced maps and exactness of short exact sequences


def induced_map(mat: HomMatrix, a: GVModule, b: GVModule, d: int) -> list:
    """Columns of coker(A) -> coker(B) in degree d induced by ``mat`` on F0's."""
    ca, cb = a._cokernel, b._cokernel
    cols = []
    for (r, s) in ca.pieces[d][1]:
        lifted = mat.apply_basis(r, s)
        cols.append(cb.coords(d, lifted))
    return cols


def check_exact(f_mat: HomMatrix, g_mat: HomMatrix, a: FPModule, b: FPModule, c: FPModule, cap: int) -> list:
    """Degrees d <= cap where 0 -> A -> B -> C -> 0 fails to be exact."""
    ga, gb, gc = (to_gv(x, cap, lo=0) for x in (a, b, c))
    fld = a.ring.field
    bad = []
    for d in range(0, cap + 1):
        fcols = induced_map(f_mat, ga, gb, d)
        gcols = induced_map(g_mat, gb, gc, d)
        rank_f = Echelon(fld)
        for col in fcols:
            rank_f.add(col)
        rank_g = Echelon(fld)
        for col in gcols:
            rank_g.add(col)
        # composite must vanish
        comp_zero = all(not _apply_cols(gcols, col, fld) for col in fcols)
        injective = rank_f.rank == ga.dim(d)
        surjective = rank_g.rank == gc.dim(d)
        middle = gb.dim(d) - rank_g.rank == rank_f.rank
        if not (comp_zero and injective and surjective and middle):
            bad.append(d)
    return bad


def _apply_cols(cols: list, vec: dict, fld) -> dict:
    out: dict = {}
    for k, a in vec.items():
        for j, b in cols[k].items():
            w = fld.norm(out.get(j, 0) + a * b)
            if w:
                out[j] = w
            else:
                del out[j]
    return out


def fp_sum(a: FPModule, b: FPModule) -> FPModule:
    return fp_direct_sum(a, b)

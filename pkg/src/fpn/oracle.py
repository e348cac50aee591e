"""Slow reference computations, written without the main engine.

Everything here works on dense numpy matrices over F_p built straight from
exponent vectors: standard monomials come from itertools, ranks from either
exhaustive enumeration of F_p^n (small pieces) or a plain Gaussian
elimination. Only the *data* of the objects under test (relations, matrix
entries, resolution differentials) is read from the main path.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, product

import numpy as np

BRUTE_LIMIT = 1 << 14  # largest p**n enumerated vector by vector


class ORing:
    """Exponent-vector view of a monomial quotient ring."""

    def __init__(self, ring):
        self.ring = ring
        self.p = ring.field.p
        self.vars = ring.variables
        self.n = len(self.vars)
        self.rels = [self.exps_of(r) for r in ring.relations]
        self._basis: dict = {}

    def exps_of(self, mono) -> tuple:
        d = mono.as_dict()
        return tuple(d.get(v, 0) for v in self.vars)

    def exps_packed(self, x: int) -> tuple:
        return self.exps_of(self.ring.unpack(x))

    def standard(self, e) -> bool:
        return not any(all(a >= b for a, b in zip(e, r)) for r in self.rels)

    def basis(self, d: int) -> list:
        got = self._basis.get(d)
        if got is None:
            got = []
            if d >= 0:
                for combo in combinations_with_replacement(range(self.n), d):
                    e = [0] * self.n
                    for i in combo:
                        e[i] += 1
                    if self.standard(e):
                        got.append(tuple(e))
            got.sort()
            self._basis[d] = got
        return got

    def poly(self, packed: dict) -> list:
        return [(self.exps_packed(m), int(c)) for m, c in packed.items()]


def _mod(a, p):
    return np.mod(a, p) if p else a


def rank_gauss(a: np.ndarray, p: int) -> int:
    return len(_rref_rows(a, p)[1])


def kernel_count(a: np.ndarray, p: int) -> int:
    """Number of v in F_p^n with a v = 0, by enumeration."""
    n = a.shape[1]
    if n == 0:
        return 1
    vs = np.array(list(product(range(p), repeat=n)), dtype=np.int64)
    img = (vs @ a.T.astype(np.int64)) % p if a.shape[0] else np.zeros((len(vs), 0), dtype=np.int64)
    return int(np.sum(~img.any(axis=1)))


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if p == 0:
        from sympy import Matrix

        return Matrix(a.tolist()).rank()
    n = a.shape[1]
    if p**n <= BRUTE_LIMIT:
        k = kernel_count(a, p)
        dim = 0
        while p**dim < k:
            dim += 1
        return n - dim
    return rank_gauss(a, p)


def nullity(a: np.ndarray, p: int) -> int:
    return a.shape[1] - rank(a, p)


# ---------------------------------------------------------------------------
# free modules and matrices


def free_basis(o: ORing, shifts, d: int) -> list:
    return [(c, s) for c, a in enumerate(shifts) for s in o.basis(d - a)]


def _add(e, f):
    return tuple(a + b for a, b in zip(e, f))


def dense_matrix(o: ORing, mat, d: int) -> np.ndarray:
    """Degree-d piece of a homogeneous matrix, rows = target basis."""
    src = free_basis(o, mat.source.shifts, d)
    tgt = free_basis(o, mat.target.shifts, d)
    row = {b: i for i, b in enumerate(tgt)}
    out = np.zeros((len(tgt), len(src)), dtype=np.int64)
    polys = {k: o.poly(v) for k, v in mat.entries.items()}
    for j, (c, s) in enumerate(src):
        for (r, cc), poly in polys.items():
            if cc != c:
                continue
            for e, coeff in poly:
                t = _add(s, e)
                if o.standard(t):
                    out[row[(r, t)], j] += coeff
    return _mod(out, o.p)


def kernel_dims(mat, cap: int) -> list:
    o = ORing(mat.ring)
    return [nullity(dense_matrix(o, mat, d), o.p) for d in range(cap + 1)]


def kernel_dims_bruteforce(mat, d: int, exhaustive: bool | None = None, bound: int = BRUTE_LIMIT) -> int:
    """dim of the degree-d kernel. exhaustive=None picks enumeration when it fits."""
    o = ORing(mat.ring)
    a = dense_matrix(o, mat, d)
    n = a.shape[1]
    fits = o.p > 0 and o.p**n <= bound
    if exhaustive and not fits:
        raise ValueError(f"degree {d} source has {n} dims, above the enumeration bound")
    if exhaustive or (exhaustive is None and fits):
        k = kernel_count(a, o.p)
        dim = 0
        while o.p**dim < k:
            dim += 1
        return dim
    if o.p == 0:
        return nullity(a, 0)
    return n - rank_gauss(a, o.p)


def module_dims(module, cap: int) -> list:
    o = ORing(module.ring)
    pres = module.presentation
    out = []
    for d in range(cap + 1):
        a = dense_matrix(o, pres, d)
        out.append(a.shape[0] - rank(a, o.p))
    return out


def min_generator_counts(mat, cap: int) -> list:
    """Minimal generators of ker(mat) per degree: dim K_d - dim (m K)_d."""
    o = ORing(mat.ring)
    p = o.p
    if not p:
        raise ValueError("generator counts are only implemented over F_p")
    counts = []
    prev = None  # (source basis, kernel vectors) one degree down
    for d in range(cap + 1):
        a = dense_matrix(o, mat, d)
        src = free_basis(o, mat.source.shifts, d)
        kvecs = _nullspace_mod(a, p) if src else []
        index = {b: i for i, b in enumerate(src)}
        prods = []
        if prev is not None:
            psrc, pvecs = prev
            for v in pvecs:
                for i in range(o.n):
                    e = tuple(1 if k == i else 0 for k in range(o.n))
                    w = np.zeros(len(src), dtype=np.int64)
                    for k, coeff in enumerate(v):
                        if coeff:
                            c, s = psrc[k]
                            t = _add(s, e)
                            if o.standard(t):
                                w[index[(c, t)]] += coeff
                    prods.append(w % p)
        r_prod = rank(np.array(prods), p) if prods else 0
        counts.append(len(kvecs) - r_prod)
        prev = (src, kvecs)
    return counts


def _nullspace_mod(a: np.ndarray, p: int) -> list:
    red, pivots = _rref_rows(a, p)
    cols = a.shape[1]
    out = []
    for f in sorted(set(range(cols)) - set(pivots)):
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red[i, f]) % p
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# dense graded modules


class DenseGV:
    """Graded pieces plus per-variable action matrices, all dense."""

    def __init__(self, p: int, nvars: int, dims: dict, ops: dict):
        self.p = p
        self.nvars = nvars
        self.dims = dims
        self.ops = ops  # (v, d) -> array dims[d+1] x dims[d]

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    def act(self, e: tuple, d: int) -> np.ndarray:
        """Matrix of the monomial with exponents e from degree d."""
        out = np.eye(self.dim(d), dtype=np.int64)
        cur = d
        for v, k in enumerate(e):
            for _ in range(k):
                op = self.ops.get((v, cur))
                if op is None:
                    op = np.zeros((self.dim(cur + 1), self.dim(cur)), dtype=np.int64)
                out = _mod(op @ out, self.p)
                cur += 1
        return out

    def act_poly(self, poly: list, d: int) -> np.ndarray:
        deg = sum(poly[0][0]) if poly else 0
        out = np.zeros((self.dim(d + deg), self.dim(d)), dtype=np.int64)
        for e, c in poly:
            out = out + c * self.act(e, d)
        return _mod(out, self.p)


def dense_gv(module, lo: int, hi: int) -> DenseGV:
    """Cokernel of the presentation, degree by degree, via our own elimination."""
    o = ORing(module.ring)
    p = o.p
    pres = module.presentation
    shifts = pres.target.shifts
    pieces = {}
    for d in range(lo, hi + 2):
        basis = free_basis(o, shifts, d)
        img = dense_matrix(o, pres, d) if basis else np.zeros((0, 0), dtype=np.int64)
        red, pivots = _rref_rows(img.T, p) if img.size else (np.zeros((0, len(basis)), dtype=np.int64), [])
        quot = [j for j in range(len(basis)) if j not in set(pivots)]
        pieces[d] = (basis, red, pivots, quot)
    dims = {d: len(pieces[d][3]) for d in range(lo, hi + 1)}
    ops = {}
    for d in range(lo, hi):
        basis, _, _, quot = pieces[d]
        nb, red, pivots, nquot = pieces[d + 1]
        index = {b: i for i, b in enumerate(nb)}
        for v in range(o.n):
            m = np.zeros((len(nquot), len(quot)), dtype=np.int64)
            for j, q in enumerate(quot):
                c, s = basis[q]
                t = tuple(a + (1 if k == v else 0) for k, a in enumerate(s))
                if not o.standard(t):
                    continue
                vec = np.zeros(len(nb), dtype=np.int64)
                vec[index[(c, t)]] = 1
                vec = _reduce(vec, red, pivots, p)
                m[:, j] = vec[nquot]
            ops[(v, d)] = m
    return DenseGV(p, o.n, dims, ops)


def _rref_rows(a: np.ndarray, p: int):
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if not len(nz):
            continue
        k = r + nz[0]
        a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        for k in np.nonzero(a[:, c])[0]:
            if k != r:
                a[k] = (a[k] - a[k, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _reduce(vec, red, pivots, p):
    vec = vec.copy() % p
    for i, c in enumerate(pivots):
        if vec[c]:
            vec = (vec - vec[c] * red[i]) % p
    return vec


def dense_dual(m: DenseGV) -> DenseGV:
    dims = {-d: n for d, n in m.dims.items()}
    ops = {}
    for (v, d), op in m.ops.items():
        # x: M_d -> M_{d+1} dualises to (M^v)_{-d-1} -> (M^v)_{-d}
        ops[(v, -d - 1)] = op.T.copy()
    return DenseGV(m.p, m.nvars, dims, ops)


# ---------------------------------------------------------------------------
# Hom and tensor complexes


def _hom_matrix(o: ORing, res, n: DenseGV, i: int, d: int) -> np.ndarray:
    """Hom(d_{i+1}, N)_d : Hom(F_i, N)_d -> Hom(F_{i+1}, N)_d."""
    src = res.free(i).shifts
    tgt = res.free(i + 1).shifts
    rows_off, cols_off = [0], [0]
    for b in tgt:
        rows_off.append(rows_off[-1] + n.dim(b + d))
    for a in src:
        cols_off.append(cols_off[-1] + n.dim(a + d))
    out = np.zeros((rows_off[-1], cols_off[-1]), dtype=np.int64)
    mat = res.differentials[i]
    for (r, c), poly in mat.entries.items():
        block = n.act_poly(o.poly(poly), src[r] + d)
        out[rows_off[c] : rows_off[c + 1], cols_off[r] : cols_off[r + 1]] += block
    return _mod(out, o.p)


def _tensor_matrix(o: ORing, res, n: DenseGV, i: int, e: int) -> np.ndarray:
    """(d_i (x) N)_e : (F_i (x) N)_e -> (F_{i-1} (x) N)_e."""
    src = res.free(i).shifts
    tgt = res.free(i - 1).shifts
    rows_off, cols_off = [0], [0]
    for b in tgt:
        rows_off.append(rows_off[-1] + n.dim(e - b))
    for a in src:
        cols_off.append(cols_off[-1] + n.dim(e - a))
    out = np.zeros((rows_off[-1], cols_off[-1]), dtype=np.int64)
    mat = res.differentials[i - 1]
    for (r, c), poly in mat.entries.items():
        block = n.act_poly(o.poly(poly), e - src[c])
        out[rows_off[r] : rows_off[r + 1], cols_off[c] : cols_off[c + 1]] += block
    return _mod(out, o.p)


def ext_dims(res, n: DenseGV, i: int, cap: int) -> dict:
    o = ORing(res.ring)
    out = {}
    for d in range(-cap, cap + 1):
        if i > res.length:
            out[d] = 0
            continue
        size = sum(n.dim(a + d) for a in res.free(i).shifts)
        r_out = rank(_hom_matrix(o, res, n, i, d), o.p) if i + 1 <= res.length else 0
        r_in = rank(_hom_matrix(o, res, n, i - 1, d), o.p) if i >= 1 else 0
        out[d] = size - r_out - r_in
    return out


def tor_dims(res, n: DenseGV, i: int, cap: int) -> dict:
    o = ORing(res.ring)
    out = {}
    for e in range(-cap, cap + 1):
        if i > res.length:
            out[e] = 0
            continue
        size = sum(n.dim(e - a) for a in res.free(i).shifts)
        r_out = rank(_tensor_matrix(o, res, n, i, e), o.p) if i >= 1 else 0
        r_in = rank(_tensor_matrix(o, res, n, i + 1, e), o.p) if i + 1 <= res.length else 0
        out[e] = size - r_out - r_in
    return out


def hom_dims(module, n: DenseGV, cap: int) -> dict:
    """dim Hom_R(M, N)_d straight from the presentation of M."""
    o = ORing(module.ring)
    pres = module.presentation
    gens = pres.target.shifts
    rels = pres.source.shifts
    out = {}
    for d in range(-cap, cap + 1):
        rows_off, cols_off = [0], [0]
        for b in rels:
            rows_off.append(rows_off[-1] + n.dim(b + d))
        for a in gens:
            cols_off.append(cols_off[-1] + n.dim(a + d))
        m = np.zeros((rows_off[-1], cols_off[-1]), dtype=np.int64)
        for (r, c), poly in pres.entries.items():
            m[rows_off[c] : rows_off[c + 1], cols_off[r] : cols_off[r + 1]] += n.act_poly(o.poly(poly), gens[r] + d)
        out[d] = cols_off[-1] - rank(_mod(m, o.p), o.p)
    return out


def max_piece(res, cap: int) -> int:
    """Largest degree-piece dimension among the free modules of ``res``."""
    ring = res.ring
    return max((fm.dim(ring, d) for fm in res.frees for d in range(cap + 1)), default=0)

"""Sparse exact row reduction.

Vectors are dicts ``{key: coeff}`` with nonzero coefficients only; keys are
anything totally ordered (ints or tuples). Pivots are always the smallest
key of a row, so the reduced rows form a reduced row-echelon basis that is
independent of insertion order.
"""

from __future__ import annotations

from .field import FieldSpec


def axpy(field: FieldSpec, y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    p = field.p
    if p:
        for k, v in x.items():
            w = (y.get(k, 0) + a * v) % p
            if w:
                y[k] = w
            else:
                y.pop(k, None)
    else:
        for k, v in x.items():
            w = y.get(k, 0) + a * v
            if w:
                y[k] = w
            else:
                y.pop(k, None)


def scale(field: FieldSpec, a, x: dict) -> dict:
    if field.p:
        p = field.p
        return {k: (a * v) % p for k, v in x.items() if (a * v) % p}
    return {k: a * v for k, v in x.items() if a * v}


class Echelon:
    """Incrementally maintained reduced row-echelon basis of a subspace.

    With ``tagged=True`` every row remembers which combination of inserted
    vectors produced it, so vectors that reduce to zero yield dependencies.
    """

    def __init__(self, field: FieldSpec, tagged: bool = False):
        self.field = field
        self.rows: dict = {}
        self.tags: dict = {} if tagged else None

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: dict, tag: dict | None):
        res = dict(vec)
        hits = [k for k in res if k in self.rows]
        for k in hits:
            c = res.get(k)
            if not c:
                continue
            neg = self.field.neg(c)
            axpy(self.field, res, neg, self.rows[k])
            if tag is not None:
                axpy(self.field, tag, neg, self.tags[k])
        return res, tag

    def reduce(self, vec: dict) -> dict:
        return self._reduce(vec, None)[0]

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def add(self, vec: dict, tag: dict | None = None):
        """Insert ``vec``; returns the residual (empty if already in span).

        In tagged mode the returned residual is paired with its tag, and a
        zero residual's tag is a linear dependency among inserted vectors.
        """
        if self.tags is not None:
            tag = dict(tag) if tag is not None else {}
        res, tag = self._reduce(vec, tag)
        if not res:
            return ({}, tag) if self.tags is not None else {}
        f = self.field
        piv = min(res)
        inv = f.inv(res[piv])
        res = scale(f, inv, res)
        if tag is not None:
            tag = scale(f, inv, tag)
        for k, row in self.rows.items():
            c = row.get(piv)
            if c:
                neg = f.neg(c)
                axpy(f, row, neg, res)
                if tag is not None:
                    axpy(f, self.tags[k], neg, tag)
        self.rows[piv] = res
        if tag is not None:
            self.tags[piv] = tag
            return res, tag
        return res

    def basis(self) -> list[dict]:
        return [self.rows[k] for k in sorted(self.rows)]


def nullspace(field: FieldSpec, images: list[dict]) -> list[dict]:
    """Basis of {c : sum_j c_j images[j] = 0}, returned in reduced echelon form.

    Result vectors are dicts over source indices ``0..len(images)-1``.
    """
    ech = Echelon(field, tagged=True)
    deps = []
    for j, img in enumerate(images):
        res, tag = ech.add(img, {j: 1})
        if not res:
            deps.append(tag)
    out = Echelon(field)
    for d in deps:
        out.add(d)
    return out.basis()


def rank(field: FieldSpec, vectors) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank


def dense_rank(field: FieldSpec, matrix: list[list]) -> int:
    return rank(field, ({j: field(x) for j, x in enumerate(row) if field(x)} for row in matrix))

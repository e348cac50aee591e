"""Small builders shared by the test modules."""

from fpn.io import parse_poly
from fpn.linalg import Echelon
from fpn.modules import GradedFreeModule, HomMatrix, _mul_elem, with_multidegrees


def hm(ring, src, tgt, rows, infer=True):
    """HomMatrix from polynomial strings, rows indexed by target generators."""
    entries = {}
    for r, row in enumerate(rows):
        for c, text in enumerate(row):
            p = parse_poly(ring, text)
            if p:
                entries[(r, c)] = p
    mat = HomMatrix(ring, GradedFreeModule(tuple(src)), GradedFreeModule(tuple(tgt)), entries)
    return with_multidegrees(mat) if infer else mat


def span_dims(matrix, gens, cap):
    """Degreewise dimension of the submodule of the source spanned by ``gens``."""
    ring = matrix.ring
    out = []
    for d in range(cap + 1):
        ech = Echelon(ring.field)
        for g in gens:
            for t in ring.standard_basis_packed(d - g.degree):
                v = _mul_elem(ring, t, g.vector)
                if v:
                    ech.add(v)
        out.append(ech.rank)
    return out

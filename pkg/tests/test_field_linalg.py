from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpn.field import F2, F3, QQ, FieldSpec, format_scalar
from fpn.linalg import Echelon, dense_rank, nullspace, rank


def test_field_basics():
    assert F3(5) == 2
    assert F3(Fraction(1, 2)) == 2
    assert F3.inv(2) == 2
    assert QQ.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert F2.neg(1) == 1
    with pytest.raises(ZeroDivisionError):
        F3.inv(0)
    with pytest.raises(ValueError):
        FieldSpec.fp(4)
    with pytest.raises(ValueError):
        list(QQ.elements())


def test_field_json_round_trip():
    for f in (F2, F3, QQ):
        assert FieldSpec.from_json(f.to_json()) == f
    assert format_scalar(Fraction(-1, 3)) == "-1/3"


def test_echelon_is_order_independent():
    vs = [{0: 1, 2: 1}, {1: 1, 2: 1}, {0: 1, 1: 1}]
    a, b = Echelon(F2), Echelon(F2)
    for v in vs:
        a.add(v)
    for v in reversed(vs):
        b.add(v)
    assert a.basis() == b.basis()
    assert a.rank == 2


def test_nullspace_small():
    # columns e0, e1, e0+e1 over F3: one relation e0 + e1 - c2
    ns = nullspace(F3, [{0: 1}, {1: 1}, {0: 1, 1: 1}])
    assert ns == [{0: 1, 1: 1, 2: 2}]


def _brute_rank(rows, p):
    n = len(rows[0])
    kernel = sum(1 for v in product(range(p), repeat=n) if all(sum(a * b for a, b in zip(r, v)) % p == 0 for r in rows))
    dim = 0
    while p**dim < kernel:
        dim += 1
    return n - dim


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([2, 3]), st.data())
def test_rank_matches_enumeration(m, n, p, data):
    rows = [[data.draw(st.integers(0, p - 1)) for _ in range(n)] for _ in range(m)]
    assert dense_rank(FieldSpec.fp(p), rows) == _brute_rank(rows, p)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(1, 6), max_size=4), max_size=6))
def test_rank_nullity_over_q(cols):
    cols = [{k: Fraction(v) for k, v in c.items()} for c in cols]
    r = rank(QQ, cols)
    assert r + len(nullspace(QQ, cols)) == len(cols)

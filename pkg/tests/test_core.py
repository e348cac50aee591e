from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpn import F2, GradedRing, Monomial, PatternError, RingPattern
from fpn.core import Factor, RelationSchema, VarRef, free_pattern, multiply, reduce, standard_basis


def mons(*names):
    return {Monomial.parse(n) for n in names}


def test_first_example_relations(p12):
    ring = p12.truncate(3)
    want = mons("x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2")
    assert set(ring.relations) == want
    assert [str(m) for m in standard_basis(ring, 1)] == ["x1", "x2", "x3"]
    assert standard_basis(ring, 2) == []
    assert [str(m) for m in standard_basis(ring, 0)] == ["1"]


def test_second_example_relations(p13):
    ring = p13.truncate(3)
    assert set(ring.relations) == mons("x1*x2", "x2*x3", "x1*y1", "y1^2", "y1*y2", "y1*y3")


def test_second_example_degree_two_basis(p13):
    ring = p13.truncate(2)
    got = standard_basis(ring, 2)
    assert set(got) == mons("x1^2", "x2^2", "x2*y1", "x2*y2", "x1*y2", "y2^2")
    assert got == sorted(got)


def test_free_pattern_has_no_relations():
    ring = RingPattern(F2, (("x", None), ("y", None))).truncate(2)
    assert ring.relations == ()
    assert ring.nvars == 4


def test_reduce_examples(p12, p13):
    r12 = p12.truncate(3)
    assert reduce(r12, {Monomial.parse("x1*x2"): 1}) == {}
    assert reduce(r12, {Monomial.parse("1"): 1}) == {Monomial.parse("1"): 1}
    r13 = p13.truncate(3)
    elem = {Monomial.parse("x1^2"): 1, Monomial.parse("x1*x3"): 1}
    assert reduce(r13, elem) == elem


def test_pattern_errors():
    with pytest.raises(PatternError) as e:
        free_pattern(F2).truncate(0)
    assert e.value.code == "bad-level"
    with pytest.raises(PatternError) as e:
        RingPattern(F2, (("x", None),), (RelationSchema((Factor("z", None, 1), Factor("x", None, 1))),))
    assert e.value.code == "unknown-family"
    with pytest.raises(PatternError) as e:
        RingPattern(F2, (("x", None),), (RelationSchema((Factor("x", "i", 0), Factor("x", None, 1))),))
    assert e.value.code == "unbound-index"
    with pytest.raises(PatternError) as e:
        GradedRing(F2, [("x", 1)], [Monomial.parse("x1")])
    assert e.value.code == "low-degree"


def _all_monomials(n, d):
    if n == 0:
        return [()] if d == 0 else []
    return [(a,) + rest for a in range(d + 1) for rest in _all_monomials(n - 1, d - a)]


@pytest.mark.parametrize("level", [2, 3, 4])
@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_basis_count_by_exhaustion(p13, level, d):
    ring = p13.truncate(level)
    rels = [ring.exponents(r) for r in ring.rel_packed]
    count = 0
    for e in _all_monomials(ring.nvars, d):
        if not any(all(a >= b for a, b in zip(e, r)) for r in rels):
            count += 1
    assert ring.dim(d) == count


@pytest.mark.parametrize("level", [2, 3, 5])
def test_truncation_nesting(p13, level):
    lo, hi = p13.truncate(level), p13.truncate(level + 1)
    keep = set(lo.variables)
    for d in range(4):
        small = set(lo.standard_basis(d))
        big = {m for m in hi.standard_basis(d) if set(m.variables) <= keep}
        assert small == big


exps = st.lists(st.integers(0, 20), min_size=4, max_size=4)


@given(exps, exps)
def test_packing_round_trip_and_ops(a, b):
    ring = GradedRing(F2, [("x", i) for i in range(1, 5)], [])
    ma = Monomial.from_dict({VarRef("x", i + 1): e for i, e in enumerate(a) if e})
    mb = Monomial.from_dict({VarRef("x", i + 1): e for i, e in enumerate(b) if e})
    pa, pb = ring.pack(ma), ring.pack(mb)
    assert ring.unpack(pa) == ma
    assert ring.unpack(ring.lcm(pa, pb)) == ma.lcm(mb)
    assert ring.unpack(ring.gcd(pa, pb)) == ma.gcd(mb)
    assert ring.divides(pa, pb) == ma.divides(mb)
    assert ring.deg(pa) == ma.degree


def _poly(ring, data):
    basis = [m for d in range(3) for m in ring.standard_basis(d)]
    picks = data.draw(st.lists(st.sampled_from(basis), max_size=4))
    return {m: c % 3 for m, c in Counter(picks).items() if c % 3}


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_multiplication_is_associative(data):
    from fpn import F3, example_13_pattern

    ring = example_13_pattern(F3).truncate(3)
    a, b, c = (_poly(ring, data) for _ in range(3))
    assert multiply(ring, multiply(ring, a, b), c) == multiply(ring, a, multiply(ring, b, c))
    assert reduce(ring, reduce(ring, a)) == reduce(ring, a)

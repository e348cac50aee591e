import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fpn import F3, Monomial, PatternError, example_12_pattern, example_13_pattern
from fpn.modules import (
    ann_gens,
    free_module,
    graded_dims,
    ideal_module,
    kernel_dim,
    kernel_min_gens,
    make_module,
    minimal_presentation,
    quotient_module,
)
from fpn.oracle import kernel_dims_bruteforce
from fpn import oracle

from helpers import hm, span_dims

M = Monomial.parse


def strs(ms):
    return sorted(str(m) for m in ms)


def test_annihilators(p12, p13):
    assert strs(ann_gens(p12.truncate(3), M("x1"))) == ["x1", "x2", "x3"]
    assert strs(ann_gens(p13.truncate(3), M("x1"))) == ["x2", "y1"]
    assert ann_gens(p13.truncate(3), M("1")) == []
    with pytest.raises(ValueError):
        ann_gens(p12.truncate(3), M("x1*x2"))


def test_make_module_presentations(p12):
    ring = p12.truncate(3)
    i1 = make_module(ring, "ideal", M("x1"))
    pres = i1.presentation
    assert pres.target.shifts == (1,)
    assert pres.source.shifts == (2, 2, 2)
    assert sorted(ring.format_poly(p) for p in pres.entries.values()) == ["x1", "x2", "x3"]
    q = make_module(ring, "quotient", M("x1"))
    assert q.presentation.source.shifts == (1,) and q.presentation.target.shifts == (0,)
    unit = make_module(ring, "ideal", M("1"))
    assert unit.presentation.source.rank == 0
    with pytest.raises(ValueError):
        make_module(ring, "bogus", None)


def test_graded_dims(p12, p13):
    assert graded_dims(quotient_module(p12.truncate(3), M("x1")), 4) == [1, 2, 0, 0, 0]
    assert graded_dims(free_module(p12.truncate(3)), 0) == [1]
    assert graded_dims(ideal_module(p13.truncate(3), M("y1")), 2) == [0, 1, 2]


def test_kernel_of_x1(p12):
    ring = p12.truncate(3)
    mat = hm(ring, [1], [0], [["x1"]])
    kg = kernel_min_gens(mat, 4)
    assert kg.degrees == [2, 2, 2] and kg.complete
    got = sorted(ring.format_poly({s: 1}) for g in kg.generators for (_, s) in g.vector)
    assert got == ["x1", "x2", "x3"]


def test_kernel_with_cross_syzygy(p13):
    ring = p13.truncate(3)
    mat = hm(ring, [1, 1], [0], [["x2", "y1"]])
    kg = kernel_min_gens(mat, 4)
    assert kg.complete
    vecs = []
    for g in kg.generators:
        vecs.append(sorted((c, ring.format_poly({s: a})) for (c, s), a in g.vector.items()))
    for single in ([(0, "x1")], [(0, "x3")], [(1, "x1")], [(1, "y1")], [(1, "y2")], [(1, "y3")]):
        assert single in vecs
    # y1*e0 - x2*e1; over F2 the sign disappears
    assert [(0, "y1"), (1, "x2")] in vecs
    assert len(vecs) == 7


def test_zero_map_kernel_is_everything(p12):
    ring = p12.truncate(3)
    mat = hm(ring, [0], [], [])
    kg = kernel_min_gens(mat, 3)
    assert kg.degrees == [0] and kg.complete


def test_bruteforce_examples(p12):
    ring = p12.truncate(3)
    assert kernel_dims_bruteforce(hm(ring, [1], [0], [["x1"]]), 2) == 3
    assert kernel_dims_bruteforce(hm(ring, [0], [0], [["1"]]), 1) == 0
    assert kernel_dims_bruteforce(hm(ring, [0], [0], [["0"]]), 1) == 3


def test_bruteforce_rejects_large_exhaustive():
    ring = example_12_pattern(F3).truncate(12)
    mat = hm(ring, [0], [0], [["0"]])
    with pytest.raises(ValueError):
        kernel_dims_bruteforce(mat, 1, exhaustive=True)
    assert kernel_dims_bruteforce(mat, 1) == 12


def test_non_homogeneous_entry_rejected(p12):
    with pytest.raises(PatternError) as e:
        hm(p12.truncate(3), [2], [0], [["x1"]])
    assert e.value.code == "non-homogeneous"


def test_minimal_presentation_drops_units(p12):
    ring = p12.truncate(3)
    m = make_module(ring, "matrix", hm(ring, [0, 1], [0, 0], [["1", "0"], ["0", "x2"]]))
    pres = minimal_presentation(m)
    assert pres.target.rank == 1 and pres.source.shifts == (1,)
    assert graded_dims(m, 3) == [1, 2, 0, 0]


@st.composite
def matrices(draw, monomial_only=False):
    field = draw(st.sampled_from(["F2", "F3"]))
    pattern = example_13_pattern(F3) if field == "F3" else example_13_pattern()
    ring = pattern.truncate(draw(st.integers(2, 3)))
    rows = draw(st.integers(1, 2))
    tgt = draw(st.lists(st.integers(0, 1), min_size=rows, max_size=rows))
    cols = draw(st.integers(1, 3))
    src, table = [], []
    for _ in range(cols):
        deg = max(tgt) + draw(st.integers(1, 2))
        src.append(deg)
    for r in range(rows):
        row = []
        for c in range(cols):
            pool = [str(m) for m in ring.standard_basis(src[c] - tgt[r])]
            if not pool or draw(st.booleans()):
                row.append("0")
                continue
            k = 1 if monomial_only else draw(st.integers(1, 2))
            terms = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=k, unique=True))
            row.append(" + ".join(terms))
        table.append(row)
    return hm(ring, src, tgt, table)


@settings(max_examples=40, deadline=None)
@given(matrices(monomial_only=True))
def test_kernel_paths_agree(mat):
    assume(mat.is_multigraded())
    a = kernel_min_gens(mat, 4, path="multigraded")
    b = kernel_min_gens(mat, 4, path="degree")
    assert sorted(a.degrees) == sorted(b.degrees)
    assert span_dims(mat, a.generators, 4) == span_dims(mat, b.generators, 4)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_kernel_generators_span_kernel(mat):
    kg = kernel_min_gens(mat, 4)
    spanned = span_dims(mat, kg.generators, 4)
    assert spanned == [kernel_dim(mat, d) for d in range(5)]
    assert spanned == [kernel_dims_bruteforce(mat, d) for d in range(5)]
    for g in kg.generators:
        assert mat.apply(g.vector) == {}


@settings(max_examples=25, deadline=None)
@given(matrices())
def test_generators_are_minimal(mat):
    kg = kernel_min_gens(mat, 4)
    full = span_dims(mat, kg.generators, 4)
    for i in range(len(kg.generators)):
        rest = kg.generators[:i] + kg.generators[i + 1 :]
        assert span_dims(mat, rest, 4) != full


@settings(max_examples=30, deadline=None)
@given(matrices())
def test_graded_dims_match_oracle(mat):
    m = make_module(mat.ring, "matrix", mat)
    assert graded_dims(m, 4) == oracle.module_dims(m, 4)


def test_inferred_multidegrees(p13):
    ring = p13.truncate(3)
    mat = hm(ring, [1, 1], [0], [["x2", "y1"]])
    assert mat.is_multigraded()
    # a binomial entry has no consistent multidegree
    assert not hm(ring, [1], [0], [["x2 + y1"]]).is_multigraded()

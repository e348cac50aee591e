import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpn import BettiTable, Monomial, betti_table, minimal_resolution, padded_resolution, schanuel_check
from fpn.modules import free_module, graded_dims, ideal_module, quotient_module
from fpn.resolution import check_composition, extend, is_minimal, kernel_dims
from fpn.harness import InstanceGen, random_instances
from fpn import oracle

M = Monomial.parse


def test_quotient_resolution_first_example(p12):
    res = minimal_resolution(quotient_module(p12.truncate(3), M("x1")), 2, 5)
    assert [f.shifts for f in res.frees] == [(0,), (1,), (2, 2, 2)]
    assert betti_table(res).ranks == (1, 1, 3)
    assert check_composition(res) and is_minimal(res)


def test_free_module_is_projective(p12):
    res = minimal_resolution(free_module(p12.truncate(3), (2,)), 3, 5)
    assert betti_table(res).ranks == (1, 0, 0, 0)
    assert res.is_finite()


def test_zero_module(p12):
    res = minimal_resolution(quotient_module(p12.truncate(3), M("1")), 1, 4)
    assert set(betti_table(res).ranks) == {0}


def test_ideal_betti_numbers(p12, p13_f3):
    res = minimal_resolution(ideal_module(p12.truncate(4), M("x1")), 1, 5)
    assert betti_table(res).ranks == (1, 4)
    # ideal (x2) of the second example at level 4, over F3
    res = minimal_resolution(ideal_module(p13_f3.truncate(4), M("x2")), 3, 6)
    assert betti_table(res).ranks[:2] == (1, 2)


def test_ideal_x2_growth_starts_at_step_three(p13):
    rows = [betti_table(minimal_resolution(ideal_module(p13.truncate(n), M("x2")), 3, 6)).ranks for n in (4, 5, 6)]
    assert rows[0] == (1, 2, 5, 15)
    assert {r[:3] for r in rows} == {(1, 2, 5)}
    assert rows[0][3] < rows[1][3] < rows[2][3]


def test_extend_from_zero(p12):
    m = quotient_module(p12.truncate(3), M("x1"))
    res = minimal_resolution(m, 0, 5)
    assert res.length == 0
    extend(res, 2)
    assert betti_table(res).ranks == (1, 1, 3)


def test_padding(p12):
    res = minimal_resolution(quotient_module(p12.truncate(3), M("x1")), 2, 5)
    pad = padded_resolution(res, [(1, 2)])
    assert sorted(pad.free(1).shifts) == [1, 2]
    assert sorted(pad.free(2).shifts) == [2, 2, 2, 2]
    assert check_composition(pad)
    assert padded_resolution(res, []).frees == res.frees
    twice = padded_resolution(res, [(1, 2), (1, 3)])
    assert betti_table(twice).ranks == (1, 3, 5)


def test_schanuel_examples(p12, p13):
    res = minimal_resolution(quotient_module(p12.truncate(3), M("x1")), 2, 5)
    assert schanuel_check(res, padded_resolution(res, [(1, 2)]), 2, 5).ok
    assert schanuel_check(res, res, 2, 5).ok
    res = minimal_resolution(ideal_module(p13.truncate(3), M("x1")), 2, 6)
    assert schanuel_check(res, padded_resolution(res, [(1, 2), (2, 3)]), 2, 6).ok


def test_betti_json_round_trip(p12):
    t = betti_table(minimal_resolution(quotient_module(p12.truncate(3), M("x1")), 2, 5))
    assert BettiTable.from_json(t.to_json()) == t
    assert "3" in t.text()


def _euler(res, module, cap):
    ring = res.ring
    top = res.length
    for d in range(cap + 1):
        alt = sum((-1) ** i * res.free(i).dim(ring, d) for i in range(top + 1))
        # the last kernel closes the sequence
        alt += (-1) ** (top + 1) * kernel_dims(res, top, cap)[d]
        yield graded_dims(module, cap)[d], alt


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_resolution_properties(seed):
    gen = InstanceGen(seed, "mixed", ("F2", "F3"), max_index=3)
    for _, m in random_instances(gen, 1, (2, 3)):
        res = minimal_resolution(m, 2, 6)
        assert check_composition(res)
        assert is_minimal(res)
        ranks = betti_table(res).ranks
        if 0 in ranks:
            assert set(ranks[ranks.index(0):]) == {0}
        if res.length == 2 and all(res.complete):
            for want, got in _euler(res, m, 4):
                assert want == got
        if res.ring.field.p == 2 and oracle.max_piece(res, 6) <= 12:
            assert kernel_dims(res, 1, 6) == oracle.kernel_dims(res.differentials[0], 6)

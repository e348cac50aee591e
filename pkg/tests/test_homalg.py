import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpn import Monomial, dual_module, duality_check, ext_dims, rel_flat, rel_injective, to_gv, tor_dims
from fpn import oracle
from fpn.harness import InstanceGen, default_family, random_instances
from fpn.homalg import gv_direct_sum, gv_summand, resolve_for, zero_gv
from fpn.tower import instantiate
from fpn.modules import free_module, graded_dims, ideal_module, quotient_module

M = Monomial.parse


def dims(result, lo, hi):
    return [result.get(d, 0) for d in range(lo, hi + 1)]


def test_to_gv_of_ring(p12):
    ring = p12.truncate(3)
    gv = to_gv(free_module(ring), 4)
    assert dims(gv.dims, 0, 3) == [1, 3, 0, 0]
    assert gv.check_module_axioms()
    one = {0: 1}
    for v in range(ring.nvars):
        img = gv.act_var(v, 0, one)
        assert len(img) == 1 and list(img.values()) == [1]
        for k in range(3):
            assert gv.act_var(v, 1, {k: 1}) == {}


def test_to_gv_small_modules(p12):
    ring = p12.truncate(3)
    assert dims(to_gv(ideal_module(ring, M("x1")), 4).dims, 0, 2) == [0, 1, 0]
    assert to_gv(quotient_module(ring, M("1")), 4).total_dim == 0
    assert zero_gv(ring, 3).total_dim == 0


def test_duals(p12):
    ring = p12.truncate(3)
    d = dual_module(to_gv(free_module(ring), 4))
    assert d.dim(0) == 1 and d.dim(-1) == 3 and d.total_dim == 4
    di = dual_module(to_gv(ideal_module(ring, M("x1")), 4))
    assert [k for k, v in di.dims.items() if v] == [-1]


def test_ext_examples(p12):
    ring = p12.truncate(3)
    q = quotient_module(ring, M("x1"))
    assert ext_dims(q, to_gv(ideal_module(ring, M("x1")), 5), 1, 5).total == 1
    assert ext_dims(q, to_gv(free_module(ring), 5), 1, 5).total == 2
    for i in (1, 2):
        assert ext_dims(free_module(ring, (1,)), to_gv(q, 5), i, 5).is_zero()


def test_tor_examples(p12):
    r2 = p12.truncate(2)
    q2 = quotient_module(r2, M("x1"))
    assert tor_dims(q2, to_gv(q2, 5), 1, 5).total == 1
    ring = p12.truncate(3)
    q = quotient_module(ring, M("x1"))
    assert tor_dims(free_module(ring), to_gv(q, 5), 1, 5).is_zero()
    assert tor_dims(q, to_gv(free_module(ring), 5), 1, 5).is_zero()


def test_duality_examples(p12):
    ring = p12.truncate(3)
    q, i1 = quotient_module(ring, M("x1")), ideal_module(ring, M("x1"))
    assert duality_check(q, i1, 5).ok
    assert duality_check(free_module(ring), q, 5).ok


def test_relative_injectivity(p12):
    ring = p12.truncate(3)
    R = to_gv(free_module(ring), 5)
    q = quotient_module(ring, M("x1"))
    assert not rel_injective(R, [q], 5)
    assert rel_flat(R, [q, ideal_module(ring, M("x1"))], 5)
    r2 = p12.truncate(2)
    fam = [quotient_module(r2, m) for m in r2.standard_basis(1)]
    assert rel_injective(dual_module(to_gv(free_module(r2), 5)), fam, 5)


def test_summand_of_injective(p12):
    r2 = p12.truncate(2)
    fam = default_family(r2, 1)
    dr = dual_module(to_gv(free_module(r2), 5))
    both = gv_direct_sum(dr, dr)
    assert rel_injective(both, fam, 5)
    half = gv_summand(both, {d: list(range(dr.dim(d))) for d in dr.dims})
    assert half.dims == dr.dims
    assert rel_injective(half, fam, 5)


def _pairs(seed, n=1, fields=("F2", "F3")):
    gen = InstanceGen(seed, "mixed", fields, max_index=3)
    for _ in range(n):
        rp = gen.ring_pattern()
        level = gen.rng.randint(2, 3)
        a, b = gen.module(rp, level), gen.module(rp, level)
        yield instantiate(a, rp, level, 6).module, instantiate(b, rp, level, 6).module


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_duality_holds_on_random_pairs(seed):
    for m, n in _pairs(seed, 3):
        assert duality_check(m, n, 4).violations == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_gv_and_biduality(seed):
    gen = InstanceGen(seed, "mixed", ("F2", "F3"), max_index=3)
    for _, m in random_instances(gen, 2, (2, 3)):
        gv = to_gv(m, 4)
        assert dims(gv.dims, 0, 4) == graded_dims(m, 4)
        assert gv.check_module_axioms()
        dd = dual_module(dual_module(gv))
        assert dd.dims == gv.dims
        assert dual_module(gv).check_module_axioms()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_homology_matches_oracle(seed):
    for m, n in _pairs(seed, 2, ("F2",)):
        res = resolve_for(m, 1, 4)
        if oracle.max_piece(res, 4) > 12:
            continue
        gn = to_gv(n, 4)
        dn = oracle.dense_gv(n, -4, 4)
        assert gn.dims == dn.dims
        assert ext_dims(m, gn, 1, 4, res).dims == oracle.ext_dims(res, dn, 1, 4)
        assert tor_dims(m, gn, 1, 4, res).dims == oracle.tor_dims(res, dn, 1, 4)
        assert ext_dims(m, gn, 0, 4, res).dims == oracle.hom_dims(m, dn, 4)


def test_result_json(p12):
    ring = p12.truncate(3)
    q = quotient_module(ring, M("x1"))
    out = ext_dims(q, to_gv(free_module(ring), 5), 1, 5).to_json()
    assert out["i"] == 1 and out["dims"]["0"] == 2
    assert "complete_below" in out

import pytest

from fpn import F3, Monomial, empirical_lambda, example_12_pattern, tower_betti
from fpn.homalg import check_exact
from fpn.modules import HomMatrix
from fpn.tower import ModulePattern, build_ses, check_ses, free, ideal, instantiate, msum, quotient, syzygy


def test_ideal_tower_first_example(p12):
    rep = tower_betti(p12, ideal("x1"), 2, range(3, 9), 6)
    assert rep.ranks(0) == [1] * 6
    assert rep.ranks(1) == list(range(3, 9))
    assert rep.stability[:2] == ["stable", "unstable"]
    assert str(empirical_lambda(rep)) == "0"


def test_quotient_tower_first_example(p12):
    rep = tower_betti(p12, quotient("x1"), 3, range(3, 9), 6)
    assert rep.ranks(0) == [1] * 6 and rep.ranks(1) == [1] * 6
    assert rep.ranks(2) == list(range(3, 9))
    v = empirical_lambda(rep)
    assert v.lambda_hat == 1 and v.first_unstable == 2


def test_free_module_saturates(p13):
    rep = tower_betti(p13, free(), 4, range(3, 7), 6)
    assert set(rep.stability) == {"stable"}
    v = empirical_lambda(rep)
    assert v.saturated and str(v) == ">= 4" and v.value == 4


@pytest.mark.parametrize("gen,want", [("y1", 0), ("x1", 1), ("x2", 2)])
def test_second_example_lambdas(p13, gen, want):
    rep = tower_betti(p13, ideal(gen), 4, range(4, 10), 8)
    v = empirical_lambda(rep)
    assert v.lambda_hat == want
    assert rep.stability[: want + 1] == ["stable"] * (want + 1)
    assert rep.stability[want + 1] == "unstable"


def test_growth_is_monotone(p13):
    rep = tower_betti(p13, ideal("x1"), 3, range(4, 10), 8)
    g = rep.growth[2]
    assert all(a <= b for a, b in zip(g, g[1:])) and g[0] < g[-1]


def test_kernel_pattern_lambda(p13):
    # the first syzygy of R/(x1) is the ideal (x1)
    v = empirical_lambda(tower_betti(p13, syzygy(quotient("x1")), 3, range(4, 9), 8))
    assert v.lambda_hat == 1


def test_window_validation(p12):
    rep = tower_betti(p12, ideal("x1"), 2, range(3, 6), 6)
    with pytest.raises(ValueError):
        empirical_lambda(rep, 1)
    with pytest.raises(ValueError):
        empirical_lambda(rep, 4)
    assert str(empirical_lambda(rep, 2)) == "0"


def test_level_validation(p12):
    with pytest.raises(ValueError):
        tower_betti(p12, ideal("x5"), 2, range(3, 6), 6)
    with pytest.raises(ValueError):
        tower_betti(p12, ideal("x1"), 2, [5, 4], 6)
    with pytest.raises(ValueError):
        ModulePattern("sum", parts=(free(),))


def test_instances_nest_with_levels(p13):
    mp = msum(ideal("x2"), quotient("y1"))
    a = instantiate(mp, p13, 4, 6).module
    b = instantiate(mp, p13, 5, 6).module
    assert a.ring.variables != b.ring.variables
    assert a.presentation.target.shifts == b.presentation.target.shifts


@pytest.mark.parametrize(
    "ses",
    [
        build_ses("ideal_seq", "x1"),
        build_ses("direct_sum", free(), free()),
        build_ses("direct_sum", ideal("x2"), quotient("x1")),
        build_ses("from_kernel", quotient("x1")),
        build_ses("from_kernel", ideal("x2")),
    ],
    ids=lambda s: s.kind,
)
def test_sequences_are_exact(ses, p12):
    p12_f3 = example_12_pattern(F3)
    assert check_ses(ses, p12, [3, 4], 5) == {}
    assert check_ses(ses, p12_f3, [3], 5) == {}


def test_from_kernel_over_second_example(p13):
    ses = build_ses("from_kernel", quotient("x1"))
    assert check_ses(ses, p13, [3, 4], 5) == {}


def test_broken_map_is_caught(p12):
    f, g, a, b, c = build_ses("ideal_seq", "x1").maps(p12, 3, 5)
    zero = HomMatrix(f.ring, f.source, f.target, {})
    assert check_exact(zero, g, a, b, c, 5)


def test_split_sequence_lambdas(p12):
    ses = build_ses("direct_sum", free(), free())
    vs = [empirical_lambda(tower_betti(p12, m, 3, range(3, 7), 6)) for m in (ses.a, ses.b, ses.c)]
    assert all(v.saturated for v in vs)


def test_bad_sequence_kind():
    with pytest.raises(ValueError):
        build_ses("pushout", free())
    with pytest.raises(ValueError):
        build_ses("direct_sum", free())


def test_patterns_serialise():
    mp = msum(ideal("x1"), syzygy(quotient(Monomial.parse("x2"))))
    data = mp.to_json()
    assert data["kind"] == "sum"
    assert "x1" in mp.label()

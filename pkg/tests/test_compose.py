import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from stocheff import compose
from stocheff.compose import (averaging_threshold, breakpoint_grid, check_conv_ok, convolve, g_set,
                              hat)
from stocheff.effectivity import EffFn, Filter, lift_kernel, member, threshold
from stocheff.errors import SpaceMismatchError
from stocheff.finspace import FinSpace, SubProb, Subset
from stocheff.geometry import Hull, weighted_extrema
from stocheff.kernels import Kernel

from .randmodels import effectivity, kernel, space

AB = FinSpace(("a", "b"))
K = Kernel.from_rows(AB, AB, {"a": ["1/2", "1/4"], "b": [0, 1]})


def _kleisli_oracle(k, l, e, q):
    # {s | sum_t k(s)(t) * l(t)(E) > q}, by explicit path sums
    return {s for s in k.dom
            if sum(k(s)[t] * sum(l(t)[u] for u in e) for t in k.cod) > q}


def test_averaging_threshold_examples():
    b = AB.subset(["b"])
    assert averaging_threshold(lift_kernel(K), b) == (F(1, 4), F(1))
    empty = EffFn(AB, AB, (Filter(AB), Filter(AB)))
    assert averaging_threshold(empty, b) == (0, 0)
    # hull of the unit vectors off E gives weight 0 on E
    off = SubProb(AB, (F(1), F(0)))
    p = EffFn(AB, AB, (Filter(AB, (Hull(off, SubProb.zero(AB)),)),) * 2)
    assert averaging_threshold(p, b) == (0, 0)


def test_g_set_examples():
    full = lift_kernel(Kernel.from_rows(AB, AB, {"a": [1, 0], "b": [0, 1]}))
    assert g_set(full, AB.full(), F(1, 2)).weights == (1, 1)
    assert not g_set(lift_kernel(Kernel.zero(AB, AB)), AB.full(), 0).holds(SubProb(AB, (F(1), F(0))))
    wq = g_set(lift_kernel(Kernel.identity(AB)), AB.subset(["b"]), F(1, 3))
    assert wq.weights == (0, 1)
    assert wq.holds(SubProb(AB, (F(0), F(1, 2)))) and not wq.holds(SubProb(AB, (F(2, 3), F(1, 3))))
    with pytest.raises(ValueError):
        g_set(full, AB.full(), F(3, 2))


def test_convolve_examples():
    pk = lift_kernel(K)
    for e in AB.subsets():
        for q in breakpoint_grid([F(1, 4), F(3, 8), F(5, 8), F(1)]):
            assert set(convolve(pk, pk, e, q)) == _kleisli_oracle(K, K, e, q)
    empty = EffFn(AB, AB, (Filter(AB), Filter(AB)))
    assert convolve(pk, empty, AB.full(), 0) == AB.empty()
    assert convolve(pk, pk, AB.empty(), 0) == AB.empty()
    with pytest.raises(SpaceMismatchError):
        convolve(pk, lift_kernel(Kernel.identity(FinSpace(("x",)))), FinSpace(("x",)).full(), 0)


def test_breakpoint_grid():
    assert breakpoint_grid([F(1, 2)]) == [0, F(1, 4), F(1, 2), F(3, 4), 1]
    assert breakpoint_grid([]) == [0, F(1, 2), 1]


def test_check_conv_ok_examples():
    assert check_conv_ok(K, K)
    ident = Kernel.identity(AB)
    assert check_conv_ok(ident, ident)


def test_mutated_convolution_is_caught(monkeypatch):
    real = compose.convolve

    def off_by_strictness(p, q, e, bound):
        # accept ties: >= instead of >
        wq = compose.g_set(q, e, bound)
        return Subset(p.dom, frozenset(
            s for s in p.dom
            if any(weighted_extrema(g, wq.weights)[0] >= wq.bound for g in p(s).generators)))

    monkeypatch.setattr(compose, "convolve", off_by_strictness)
    assert not check_conv_ok(K, K)
    monkeypatch.setattr(compose, "convolve", real)
    assert check_conv_ok(K, K)


@settings(max_examples=120)
@given(st.integers(0, 10 ** 6))
def test_averaging_threshold_is_the_r_set_length(seed):
    # m is the right end of {r | t in Q^(E, r)}: inside just below, outside at m
    rng = random.Random(seed)
    t, u = space(rng.randint(1, 3)), space(rng.randint(1, 3), "u")
    q = effectivity(rng, t, u)
    for e in u.subsets():
        ms = averaging_threshold(q, e)
        for x, m in zip(t, ms):
            assert 0 <= m <= 1
            assert not member(q, x, threshold(e, ">", m))
            if m > 0:
                assert member(q, x, threshold(e, ">", m - F(1, 1000)))
                assert member(q, x, threshold(e, ">", 0))


def _vertex_oracle(p, q, e, bound):
    ms = averaging_threshold(q, e)
    return {s for s in p.dom
            if any(min(sum(m * w for m, w in zip(ms, mu.weights)) for mu in g.points) > bound
                   for g in p(s).generators)}


@settings(max_examples=80)
@given(st.integers(0, 10 ** 6))
def test_convolve_general_against_vertex_oracle(seed):
    rng = random.Random(seed)
    s, t, u = (space(rng.randint(1, 3), p) for p in "stu")
    p, q = effectivity(rng, s, t), effectivity(rng, t, u)
    for e in u.subsets():
        for b in (F(k, 8) for k in range(9)):
            assert set(convolve(p, q, e, b)) == _vertex_oracle(p, q, e, b)


@settings(max_examples=80)
@given(st.integers(0, 10 ** 6))
def test_convolve_is_monotone(seed):
    rng = random.Random(seed)
    s, t, u = space(rng.randint(1, 3), "s"), space(rng.randint(1, 3), "t"), space(rng.randint(1, 4), "u")
    p, q = effectivity(rng, s, t), effectivity(rng, t, u)
    qs = [F(k, 8) for k in range(9)]
    events = u.subsets()
    for b in qs:
        got = {e.members: convolve(p, q, e, b) for e in events}
        for e1, e2 in itertools.product(events, repeat=2):
            if e1 <= e2:
                assert got[e1.members] <= got[e2.members]
    for e in events:
        sets = [convolve(p, q, e, b) for b in qs]
        for lo, hi in zip(sets, sets[1:]):
            assert hi <= lo


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6))
def test_hat_of_kernel_lift(seed):
    rng = random.Random(seed)
    s, t = space(rng.randint(1, 4)), space(rng.randint(1, 4), "t")
    k = kernel(rng, s, t)
    for e in t.subsets():
        for b in (F(j, 16) for j in range(17)):
            assert set(hat(lift_kernel(k), e, b)) == {x for x in s if sum(k(x)[y] for y in e) > b}

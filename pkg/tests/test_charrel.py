import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from stocheff.charrel import (CharRel, DownSet, canonical_relation, check_rules, extract_measure,
                              filter_section, implements, satisfies)
from stocheff.effectivity import Filter
from stocheff.errors import InvariantError
from stocheff.finspace import FinSpace, SubProb, measure_of
from stocheff.geometry import Hull, Points

from .randmodels import generator, space, subprob

AB = FinSpace(("a", "b"))
MU = SubProb(AB, (F(1, 2), F(1, 4)))


def rules(rel):
    return {v.rule for v in check_rules(rel)}


def test_downset_shapes():
    assert DownSet.upto(0, closed=False) == DownSet.empty()
    assert F(1, 2) in DownSet.upto(F(1, 2))
    assert F(1, 2) not in DownSet.upto(F(1, 2), closed=False)
    assert str(DownSet.upto(F(1, 4), closed=False)) == "[0,1/4)"
    assert str(DownSet.empty()) == "empty"
    for bad in (F(3, 2), F(-1, 2)):
        with pytest.raises(InvariantError):
            DownSet.upto(bad)


def test_check_rules_examples():
    assert check_rules(canonical_relation(MU)) == []
    bad_null = canonical_relation(MU).replace(AB.empty(), DownSet.upto(F(1, 2)))
    assert 6 in rules(bad_null)
    a, full = AB.subset(["a"]), AB.full()
    shrunk = canonical_relation(MU).replace(full, DownSet.upto(F(1, 4)))
    v1 = [v for v in check_rules(shrunk) if v.rule == 1]
    assert v1 and {str(v.witness["A"]) for v in v1} >= {str(a)}


def test_extract_measure_examples():
    ex = extract_measure(canonical_relation(MU))
    assert ex.valid and ex.measure == MU
    empty = CharRel.from_mapping(AB, {})
    ex = extract_measure(empty)
    assert ex.valid and ex.measure == SubProb.zero(AB)
    bumped = canonical_relation(MU).replace(AB.full(), DownSet.upto(F(7, 8)))
    ex = extract_measure(bumped)
    assert not ex.valid and "additive" in ex.reason
    assert {str(e) for e in ex.witness} == {"{a}", "{b}"}


def test_satisfies_implements_examples():
    q = Filter(AB, (Points(MU),))
    assert satisfies(q, canonical_relation(MU))
    assert implements(q, MU)
    nu = SubProb(AB, (F(1, 4), F(1, 4)))
    assert not satisfies(q, canonical_relation(nu))
    assert satisfies(Filter(AB), CharRel.from_mapping(AB, {}))


def test_strict_implements_is_unsatisfiable():
    assert not implements(Filter(AB, (Points(MU),)), MU, strict=True)


def test_pinned_counterexamples_to_satisfies_iff_implements():
    # empty filter, all-empty relation: rules pass, satisfies holds, implements cannot
    empty_rel = CharRel.from_mapping(AB, {})
    assert check_rules(empty_rel) == []
    assert satisfies(Filter(AB), empty_rel)
    assert not implements(Filter(AB), extract_measure(empty_rel).measure)
    # open sections: same supremum as R_mu, rules pass, the principal filter does not satisfy it
    open_rel = CharRel(AB, tuple(DownSet.upto(measure_of(MU, e), closed=False) for e in AB.subsets()))
    assert check_rules(open_rel) == []
    q = Filter(AB, (Points(MU),))
    assert implements(q, extract_measure(open_rel).measure)
    assert not satisfies(q, open_rel)


def _mutations(rng, mu):
    """(rule, mutated relation) pairs, each aimed at one rule."""
    sp = mu.space
    base = canonical_relation(mu)
    c = {e.members: measure_of(mu, e) for e in sp.subsets()}
    out = []
    out.append((6, base.replace(sp.empty(), DownSet.upto(F(rng.randint(1, 8), 8)))))
    # rule 1: some proper superset gets a smaller section than a subset
    for a in sp.subsets():
        for b in sp.subsets():
            if a < b and c[a.members] > 0:
                out.append((1, base.replace(b, DownSet.upto(c[a.members], closed=False))))
                break
        else:
            continue
        break
    # rule 4: an event with two charged members drops to its best proper part
    def best_part(e):
        return max(c[x.members] for x in sp.subsets() if x < e)

    split = [e for e in sp.subsets() if e.members and best_part(e) < c[e.members]
             and sum(1 for x in e if mu[x] > 0) >= 2]
    if split:
        e = rng.choice(split)
        out.append((4, base.replace(e, DownSet.upto(best_part(e)))))
    # rule 3: the whole space claims more than its parts
    total = mu.total()
    if total < 1 and len(sp) > 1:
        out.append((3, base.replace(sp.full(), DownSet.upto(min(F(1), total + F(1, 16))))))
    # rule 5: an event claims certainty while its complement has mass
    for e in sp.subsets():
        if e.members and c[e.complement().members] > 0:
            out.append((5, base.replace(e, DownSet.upto(F(1)))))
            break
    return out


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_canonical_relation_round_trip(seed):
    rng = random.Random(seed)
    mu = subprob(rng, space(rng.randint(1, 3)))
    rel = canonical_relation(mu)
    assert check_rules(rel) == []
    ex = extract_measure(rel)
    assert ex.valid and ex.measure == mu


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_single_rule_mutations_are_detected(seed):
    rng = random.Random(seed)
    mu = subprob(rng, space(rng.randint(1, 3)))
    for rule, rel in _mutations(rng, mu):
        assert rule in rules(rel), (rule, [str(v) for v in check_rules(rel)])


def test_every_targetable_rule_has_a_detected_mutation():
    rng = random.Random(3)
    mu = SubProb(space(3), (F(1, 4), F(1, 8), F(1, 2)))
    seen = {rule for rule, rel in _mutations(rng, mu) if rule in rules(rel)}
    assert seen == {1, 3, 4, 5, 6}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_filter_sections_give_measures_for_principal_filters(seed):
    rng = random.Random(seed)
    sp = space(rng.randint(1, 3))
    mu = subprob(rng, sp)
    q = Filter(sp, (Points(mu),))
    rel = CharRel(sp, tuple(filter_section(q, e) for e in sp.subsets()))
    assert rel == canonical_relation(mu)
    assert satisfies(q, rel) and implements(q, mu)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_satisfies_iff_implements_on_attained_relations(seed):
    rng = random.Random(seed)
    sp = space(rng.randint(1, 3))
    rel = canonical_relation(subprob(rng, sp))
    gens = tuple(generator(rng, sp) for _ in range(rng.randint(1, 2)))
    if rng.random() < 0.3:
        gens = (Points(extract_measure(rel).measure),)
    q = Filter(sp, gens)
    assert satisfies(q, rel) == implements(q, extract_measure(rel).measure)


def test_hull_filter_sections_are_lower_envelopes():
    e1, e2 = SubProb(AB, (F(1), F(0))), SubProb(AB, (F(0), F(1)))
    q = Filter(AB, (Hull(e1, e2),))
    assert filter_section(q, AB.subset(["a"])) == DownSet.upto(0)
    assert filter_section(q, AB.full()) == DownSet.upto(1)
    rel = CharRel(AB, tuple(filter_section(q, e) for e in AB.subsets()))
    # lower envelope 0 + 0 < 1 = value on the whole space: not a measure
    assert not extract_measure(rel).valid

"""Morphisms, congruences, quotients and the two notions of equivalence.

On finite power-set spaces a measurable map is final exactly when it is
onto, and ``f x id`` on ``S x [0, 1]`` is then final too, because every
measurable subset of ``S x [0, 1]`` is a finite union of ``{s} x Borel``.
So "strong" reduces to both maps being surjective, and every equivalence
relation is tame; no further measurability side conditions are checked.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .effectivity import EffFn, Filter, profile
from .errors import NotACongruenceError, NotAMorphismError, SearchBoundExceeded
from .finspace import (MeasMap, Partition, all_partitions, block_name, kernel_of_map,
                       same_space)
from .geometry import Generator, generator_subset, map_generator


@dataclass(frozen=True)
class EffMorphism:
    f: MeasMap
    g: MeasMap

    @classmethod
    def identity(cls, p: EffFn) -> "EffMorphism":
        return cls(MeasMap.identity(p.dom), MeasMap.identity(p.cod))

    def then(self, other: "EffMorphism") -> "EffMorphism":
        return EffMorphism(self.f.then(other.f), self.g.then(other.g))

    def inverse(self) -> "EffMorphism":
        return EffMorphism(self.f.inverse(), self.g.inverse())


@dataclass(frozen=True)
class Congruence:
    alpha: Partition
    beta: Partition

    @classmethod
    def discrete(cls, p: EffFn) -> "Congruence":
        return cls(Partition.discrete(p.dom), Partition.discrete(p.cod))


def apply_vau(g: MeasMap, flt: Filter) -> Filter:
    """Image of a filter along ``g``: generated by the pushed generators."""
    same_space(g.dom, flt.space, "map domain and filter")
    return Filter(g.cod, tuple(map_generator(g, gen) for gen in flt.generators))


def filter_included(f1: Filter, f2: Filter) -> bool:
    """Every set in the filter of ``f1`` is in the filter of ``f2``."""
    same_space(f1.space, f2.space, "filters")
    return all(any(generator_subset(h, g) for h in f2.generators) for g in f1.generators)


def filters_equal(f1: Filter, f2: Filter) -> bool:
    return filter_included(f1, f2) and filter_included(f2, f1)


def _check_morphism_spaces(p: EffFn, q: EffFn, m: EffMorphism) -> None:
    same_space(m.f.dom, p.dom, "f domain and P domain")
    same_space(m.f.cod, q.dom, "f codomain and Q domain")
    same_space(m.g.dom, p.cod, "g domain and P codomain")
    same_space(m.g.cod, q.cod, "g codomain and Q codomain")


def morphism_failures(p: EffFn, q: EffFn, m: EffMorphism) -> list[str]:
    """States ``s`` where ``Q(f(s))`` differs from the image of ``P(s)``."""
    _check_morphism_spaces(p, q, m)
    return [s for s in p.dom
            if not filters_equal(q(m.f(s)), apply_vau(m.g, p(s)))]


def is_morphism(p: EffFn, q: EffFn, m: EffMorphism) -> bool:
    return not morphism_failures(p, q, m)


def is_strong(m: EffMorphism) -> bool:
    return m.f.is_surjective() and m.g.is_surjective()


def profiles_commute(p: EffFn, q: EffFn, m: EffMorphism) -> bool:
    """Threshold sections only: for each event ``B`` of ``Q.cod`` and each of
    ``>``/``>=``, the profile of ``Q`` at ``B`` read at ``f(s)`` equals the
    profile of ``P`` at ``g^-1(B)`` read at ``s``.

    This is necessary for a morphism; it is also sufficient when portfolios
    are principal at single points, but not in general (a finite point set
    and its hull share all threshold profiles).
    """
    _check_morphism_spaces(p, q, m)
    for b in q.cod.subsets():
        pre = m.g.preimage(b)
        for rel in (">", ">="):
            pq = profile(q, b, rel).critical
            pp = profile(p, pre, rel).critical
            for i, s in enumerate(p.dom.states):
                if pq[q.dom.index(m.f(s))] != pp[i]:
                    return False
    return True


def _achieves(flt: Filter, target: Generator) -> bool:
    return any(generator_subset(h, target) for h in flt.generators)


def _pulled_back_achieves(flt: Filter, g: MeasMap, target: Generator) -> bool:
    # (S g)^-1[target] contains h  iff  the image of h lies in target
    return any(generator_subset(map_generator(g, h), target) for h in flt.generators)


def induced_maps_commute(p: EffFn, q: EffFn, m: EffMorphism) -> bool:
    """Morphism test on the induced monotone maps over a finite family of
    test sets in ``SubProb(V) x [0, 1]``: all threshold sets (via
    :func:`profiles_commute`) plus, for every generator ``G`` of ``Q`` or of
    an image of ``P``, the constant section ``G x [0, 1]``."""
    if not profiles_commute(p, q, m):
        return False
    family: list[Generator] = []
    for flt in q.portfolio:
        family.extend(flt.generators)
    for flt in p.portfolio:
        family.extend(map_generator(m.g, h) for h in flt.generators)
    for target in family:
        for s in p.dom:
            if _achieves(q(m.f(s)), target) != _pulled_back_achieves(p(s), m.g, target):
                return False
    return True


def congruence_failures(p: EffFn, c: Congruence) -> list[tuple[str, str]]:
    """Pairs of alpha-equivalent states whose pushed portfolios differ."""
    same_space(c.alpha.space, p.dom, "alpha and P domain")
    same_space(c.beta.space, p.cod, "beta and P codomain")
    fb = c.beta.factor_map()
    out = []
    for block in c.alpha.blocks:
        names = list(block)
        ref = apply_vau(fb, p(names[0]))
        out.extend((names[0], s) for s in names[1:] if not filters_equal(ref, apply_vau(fb, p(s))))
    return out


def is_congruence(p: EffFn, c: Congruence) -> bool:
    return not congruence_failures(p, c)


def quotient(p: EffFn, c: Congruence) -> EffFn:
    bad = congruence_failures(p, c)
    if bad:
        s, t = bad[0]
        raise NotACongruenceError(f"states {s!r} and {t!r} are identified but their portfolios differ")
    fb = c.beta.factor_map()
    port = tuple(apply_vau(fb, p(next(iter(block)))) for block in c.alpha.blocks)
    return EffFn(c.alpha.quotient_space(), fb.cod, port)


def kernel_congruence(p: EffFn, q: EffFn, m: EffMorphism) -> Congruence:
    if not is_morphism(p, q, m):
        raise NotAMorphismError("kernel_congruence needs a morphism")
    if not is_strong(m):
        raise NotAMorphismError("kernel_congruence needs a strong (surjective) morphism")
    return Congruence(kernel_of_map(m.f), kernel_of_map(m.g))


def _is_isomorphism(a: EffFn, b: EffFn, iso: EffMorphism) -> bool:
    return (iso.f.is_bijective() and iso.g.is_bijective()
            and is_morphism(a, b, iso) and is_morphism(b, a, iso.inverse()))


def cospan_from_logical(p: EffFn, q: EffFn, cp: Congruence, cq: Congruence,
                        iso: EffMorphism) -> tuple[EffFn, EffMorphism, EffMorphism]:
    """Turn congruences with isomorphic quotients into a co-span of strong
    morphisms ``P -> M <- Q``, with ``M`` the quotient of ``Q``."""
    pq = quotient(p, cp)
    qq = quotient(q, cq)
    if not _is_isomorphism(pq, qq, iso):
        raise NotAMorphismError("iso is not an isomorphism between the quotients")
    mp = EffMorphism(cp.alpha.factor_map(), cp.beta.factor_map()).then(iso)
    mq = EffMorphism(cq.alpha.factor_map(), cq.beta.factor_map())
    return qq, mp, mq


def _match_fibres(f: MeasMap, k: MeasMap, left: Partition, right: Partition) -> MeasMap:
    # block [s]_f goes to the block [u]_k with f(s) == k(u)
    by_image = {k(next(iter(b))): block_name(b) for b in right.blocks}
    images = tuple(by_image[f(next(iter(b)))] for b in left.blocks)
    return MeasMap(left.quotient_space(), right.quotient_space(), images)


def logical_from_behavioral(p: EffFn, q: EffFn, m: EffFn, mp: EffMorphism,
                            mq: EffMorphism) -> tuple[Congruence, Congruence, EffMorphism]:
    """Kernels of the two legs plus the isomorphism matching their fibres."""
    for name, src, leg in (("P", p, mp), ("Q", q, mq)):
        if not is_strong(leg):
            raise NotAMorphismError(f"the leg out of {name} is not strong")
        if not is_morphism(src, m, leg):
            raise NotAMorphismError(f"the leg out of {name} is not a morphism")
    cp = Congruence(kernel_of_map(mp.f), kernel_of_map(mp.g))
    cq = Congruence(kernel_of_map(mq.f), kernel_of_map(mq.g))
    iso = EffMorphism(_match_fibres(mp.f, mq.f, cp.alpha, cq.alpha),
                      _match_fibres(mp.g, mq.g, cp.beta, cq.beta))
    if not _is_isomorphism(quotient(p, cp), quotient(q, cq), iso):
        raise AssertionError("fibre matching did not yield an isomorphism")
    return cp, cq, iso


def congruences(p: EffFn) -> Iterator[Congruence]:
    """All congruences of ``p``: alpha finest first, then beta finest first."""
    betas = all_partitions(p.cod)
    for alpha in all_partitions(p.dom):
        for beta in betas:
            c = Congruence(alpha, beta)
            if is_congruence(p, c):
                yield c


def _bijections(src, dst, candidates):
    """Lexicographically first bijection picking from ``candidates[x]``."""
    used: set = set()
    chosen: list = []

    def go(i):
        if i == len(src):
            return True
        for y in candidates[src[i]]:
            if y not in used:
                used.add(y)
                chosen.append(y)
                if go(i + 1):
                    return True
                used.discard(y)
                chosen.pop()
        return False

    return tuple(chosen) if go(0) else None


def find_isomorphism(a: EffFn, b: EffFn, budget: list[int] | None = None) -> EffMorphism | None:
    if len(a.dom) != len(b.dom) or len(a.cod) != len(b.cod):
        return None
    for perm in permutations(b.cod.states):
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise SearchBoundExceeded("more candidate outcome bijections than the search budget allows")
        g = MeasMap(a.cod, b.cod, perm)
        pushed = [apply_vau(g, flt) for flt in a.portfolio]
        candidates = {x: [y for y in b.dom if filters_equal(pushed[i], b(y))]
                      for i, x in enumerate(a.dom.states)}
        images = _bijections(a.dom.states, b.dom.states, candidates)
        if images is not None:
            return EffMorphism(MeasMap(a.dom, b.dom, images), g)
    return None


def logically_equivalent(p: EffFn, q: EffFn, max_search: int = 100_000):
    """Search for congruences of ``p`` and ``q`` with isomorphic quotients.

    Returns ``(cp, cq, iso)`` or None when no witness exists.  Raises
    :class:`SearchBoundExceeded` once more than ``max_search`` candidate
    codomain bijections have been examined.
    """
    budget = [max_search]
    cqs = list(congruences(q))
    for cp in congruences(p):
        pq = quotient(p, cp)
        for cq in cqs:
            if len(cq.alpha) != len(cp.alpha) or len(cq.beta) != len(cp.beta):
                continue
            iso = find_isomorphism(pq, quotient(q, cq), budget)
            if iso is not None:
                return cp, cq, iso
    return None

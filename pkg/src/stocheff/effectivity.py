"""Stochastic effectivity functions with finitely generated portfolios.

The portfolio of a state is the family of all measurable sets of
distributions that contain at least one generator.  Threshold membership
is then a matter of evaluating a linear functional at generator points,
and the set of thresholds a state can achieve is an interval whose right
end is recorded in a :class:`Profile`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import InvariantError, SpaceMismatchError
from .finspace import (FinSpace, SubProb, Subset, ThresholdQuery, as_fraction, compare,
                       normalize_rel, same_space)
from .geometry import HULL, POINTS, Generator, linear_extrema
from .kernels import Kernel


@dataclass(frozen=True)
class Filter:
    """Upward-closed family generated by a finite list of generators.

    An empty list denotes the empty family (nothing is effective).
    """

    space: FinSpace
    generators: tuple[Generator, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            same_space(self.space, g.space, "filter and generator")
        object.__setattr__(self, "generators", gens)

    def is_empty(self) -> bool:
        return not self.generators

    def __str__(self) -> str:
        return "<" + "; ".join(str(g) for g in self.generators) + ">"


@dataclass(frozen=True)
class EffFn:
    dom: FinSpace
    cod: FinSpace
    portfolio: tuple[Filter, ...]

    def __post_init__(self):
        port = tuple(self.portfolio)
        if len(port) != len(self.dom):
            raise InvariantError(f"{len(port)} portfolios for {len(self.dom)} states")
        for s, flt in zip(self.dom.states, port):
            if flt.space != self.cod:
                raise SpaceMismatchError(f"portfolio of state {s!r} is not over {self.cod}")
        object.__setattr__(self, "portfolio", port)

    @classmethod
    def from_mapping(cls, dom: FinSpace, cod: FinSpace,
                     portfolio: Mapping[str, Iterable[Generator]]) -> "EffFn":
        for s in portfolio:
            dom.index(s)
        return cls(dom, cod, tuple(Filter(cod, tuple(portfolio.get(s, ()))) for s in dom))

    def __call__(self, state: str) -> Filter:
        return self.portfolio[self.dom.index(state)]


def _passes(g: Generator, q: ThresholdQuery) -> bool:
    lo, hi = linear_extrema(g, q.event)
    if q.rel in (">", ">="):
        return compare(lo, q.rel, q.bound)
    return compare(hi, q.rel, q.bound)


def member(p: EffFn, s: str, q: ThresholdQuery) -> bool:
    """Whether the threshold set of ``q`` lies in the portfolio of ``s``."""
    same_space(p.cod, q.event.space, "effectivity codomain and query event")
    return any(_passes(g, q) for g in p(s).generators)


@dataclass(frozen=True)
class Profile:
    """Right ends of the threshold intervals ``{q | beta(event, rel q) in P(s)}``.

    ``critical[i]`` is None for a state with an empty portfolio.  For ``>``
    the interval is ``[0, m)``, for ``>=`` it is ``[0, m]``.
    """

    event: Subset
    rel: str
    critical: tuple[Fraction | None, ...]

    def contains(self, index: int, q: Fraction) -> bool:
        m = self.critical[index]
        if m is None or q < 0:
            return False
        return q < m if self.rel == ">" else q <= m

    def interval(self, index: int) -> str:
        m = self.critical[index]
        if m is None:
            return "empty"
        return f"[0,{m})" if self.rel == ">" else f"[0,{m}]"


def critical_value(flt: Filter, d: Subset) -> Fraction | None:
    if flt.is_empty():
        return None
    return max(linear_extrema(g, d)[0] for g in flt.generators)


def profile(p: EffFn, d: Subset, rel: str = ">") -> Profile:
    rel = normalize_rel(rel)
    if rel not in (">", ">="):
        raise ValueError("profiles are defined for '>' and '>=' only")
    same_space(p.cod, d.space, "effectivity codomain and event")
    return Profile(d, rel, tuple(critical_value(f, d) for f in p.portfolio))


def lift_kernel(k: Kernel) -> EffFn:
    return EffFn(k.dom, k.cod, tuple(Filter(k.cod, (Generator(POINTS, (r,)),)) for r in k.rows))


def _check_family(ks: Sequence[Kernel]) -> None:
    for k in ks[1:]:
        same_space(ks[0].dom, k.dom, "kernel family domains")
        same_space(ks[0].cod, k.cod, "kernel family codomains")


def lift_family_exists(ks: Sequence[Kernel]) -> EffFn:
    """Portfolio of ``s``: sets containing ``K_n(s)`` for some ``n``."""
    ks = list(ks)
    if not ks:
        raise ValueError("an empty family has no spaces to live over")
    _check_family(ks)
    dom, cod = ks[0].dom, ks[0].cod
    return EffFn(dom, cod, tuple(
        Filter(cod, tuple(Generator(POINTS, (k(s),)) for k in ks)) for s in dom))


def lift_family_forall(ks: Sequence[Kernel]) -> EffFn:
    """Portfolio of ``s``: sets containing every ``K_n(s)``."""
    ks = list(ks)
    if not ks:
        raise ValueError("lift_family_forall needs a nonempty family")
    _check_family(ks)
    dom, cod = ks[0].dom, ks[0].cod
    return EffFn(dom, cod, tuple(
        Filter(cod, (Generator(POINTS, tuple(k(s) for k in ks)),)) for s in dom))


def lift_convex_family(ks: Sequence[Kernel], denom_bound: int) -> list[Kernel]:
    """All combinations ``sum_j a_j K_j`` with ``a_j`` in ``{0, 1/d, ..., 1}``
    and ``sum_j a_j <= 1``, where ``d = denom_bound``."""
    ks = list(ks)
    if not ks:
        raise ValueError("empty kernel list")
    if denom_bound < 1:
        raise ValueError("denom_bound must be a positive integer")
    _check_family(ks)
    dom, cod = ks[0].dom, ks[0].cod
    out = []
    for nums in product(range(denom_bound + 1), repeat=len(ks)):
        if sum(nums) > denom_bound:
            continue
        alpha = [Fraction(n, denom_bound) for n in nums]
        rows = []
        for s in dom:
            acc = [Fraction(0)] * len(cod)
            for a, k in zip(alpha, ks):
                if a:
                    for j, w in enumerate(k(s).weights):
                        acc[j] += a * w
            rows.append(SubProb(cod, tuple(acc)))
        out.append(Kernel(dom, cod, tuple(rows)))
    return out


def lift_transition_system(space: FinSpace, edges: Iterable[tuple[str, str]]) -> EffFn:
    """Each state gets the simplex of subprobabilities over its successors."""
    succ: dict[str, set] = {s: set() for s in space}
    for a, b in edges:
        space.index(a)
        space.index(b)
        succ[a].add(b)
    port = []
    for s in space:
        pts = [SubProb.zero(space)] + [SubProb.dirac(space, t) for t in space if t in succ[s]]
        port.append(Filter(space, (Generator(HULL, tuple(pts)),)))
    return EffFn(space, space, tuple(port))


def lift_nlmp(dom: FinSpace, kappa: Mapping[str, Generator]) -> EffFn:
    """Principal filter above ``kappa(s)`` at every state."""
    missing = [s for s in dom if s not in kappa]
    if missing:
        raise InvariantError(f"no generator for {', '.join(missing)}")
    gens = [kappa[s] for s in dom]
    cod = gens[0].space
    for g in gens[1:]:
        same_space(cod, g.space, "nlmp generators")
    return EffFn(dom, cod, tuple(Filter(cod, (g,)) for g in gens))


def detect_pointed(p: EffFn) -> Kernel | None:
    """The kernel ``K`` with ``p == lift_kernel(K)`` up to filter identity, if any."""
    rows = []
    for flt in p.portfolio:
        if flt.is_empty():
            return None
        point = flt.generators[0].points[0]
        for g in flt.generators:
            if not g.is_singleton() or g.points[0] != point:
                return None
        rows.append(point)
    return Kernel(p.dom, p.cod, tuple(rows))


def threshold(event: Subset, rel: str, bound) -> ThresholdQuery:
    return ThresholdQuery(event, rel, as_fraction(bound))

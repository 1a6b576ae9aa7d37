"""Convolution of effectivity functions and its agreement with Kleisli products.

For ``Q: T ->> U`` the set of thresholds ``r`` at which a state ``t`` can
beat ``E`` is ``[0, m_t)``, so the integral of ``nu(Q^(E, r))`` over ``r``
collapses to the linear functional ``sum_t nu(t) * m_t``.  No quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .effectivity import EffFn, lift_kernel, profile
from .finspace import SubProb, Subset, as_fraction, same_space
from .geometry import weighted_extrema
from .kernels import Kernel, kleisli


def averaging_threshold(q: EffFn, e: Subset) -> tuple[Fraction, ...]:
    """Per state ``t`` of ``q.dom``, the length of ``{r | t in Q^(E, r)}``."""
    prof = profile(q, e, ">")
    return tuple(Fraction(0) if m is None else m for m in prof.critical)


@dataclass(frozen=True)
class WeightedQuery:
    """The linear predicate ``nu -> sum_t weights[t] * nu(t) > bound``."""

    weights: tuple[Fraction, ...]
    bound: Fraction

    def holds(self, nu: SubProb) -> bool:
        return sum((w * x for w, x in zip(self.weights, nu.weights)), Fraction(0)) > self.bound


def g_set(q: EffFn, e: Subset, bound) -> WeightedQuery:
    bound = as_fraction(bound)
    if not 0 <= bound <= 1:
        raise ValueError(f"threshold {bound} outside [0, 1]")
    return WeightedQuery(averaging_threshold(q, e), bound)


def _weighted_member(flt, wq: WeightedQuery) -> bool:
    return any(weighted_extrema(g, wq.weights)[0] > wq.bound for g in flt.generators)


def convolve(p: EffFn, q: EffFn, e: Subset, bound) -> Subset:
    """States ``s`` of ``p.dom`` whose portfolio contains ``G_Q(E, bound)``."""
    same_space(p.cod, q.dom, "convolved effectivity functions")
    same_space(q.cod, e.space, "second codomain and event")
    wq = g_set(q, e, bound)
    return Subset(p.dom, frozenset(s for s, flt in zip(p.dom.states, p.portfolio)
                                   if _weighted_member(flt, wq)))


def hat(p: EffFn, d: Subset, bound) -> Subset:
    """``{s | beta(d, > bound) in P(s)}`` read off the profile."""
    bound = as_fraction(bound)
    prof = profile(p, d, ">")
    return Subset(p.dom, frozenset(s for i, s in enumerate(p.dom.states)
                                   if prof.contains(i, bound)))


def breakpoint_grid(values) -> list[Fraction]:
    """0, 1, the given values, and midpoints between consecutive ones."""
    pts = sorted({Fraction(0), Fraction(1), *values})
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts) | set(mids))


def conv_mismatches(k: Kernel, l: Kernel):
    """Yield ``(event, q, convolved, direct)`` wherever the two sides disagree."""
    same_space(k.cod, l.dom, "kernels")
    pk, pl = lift_kernel(k), lift_kernel(l)
    direct = lift_kernel(kleisli(k, l))
    for e in l.cod.subsets():
        prof = profile(direct, e, ">")
        for q in breakpoint_grid(m for m in prof.critical if m is not None):
            lhs = convolve(pk, pl, e, q)
            rhs = hat(direct, e, q)
            if lhs != rhs:
                yield e, q, lhs, rhs


def check_conv_ok(k: Kernel, l: Kernel) -> bool:
    """Convolving the lifts of ``k`` and ``l`` equals lifting ``k * l``,
    at every event and at every breakpoint-adjacent threshold."""
    return next(conv_mismatches(k, l), None) is None

"""Exact convex geometry on the subprobability simplex.

A :class:`Generator` is a finite list of subprobabilities read either as the
finite set itself (``points``) or as its closed convex hull (``hull``).
A linear functional attains its extrema over a polytope at listed points,
which is what makes every threshold question decidable by evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvariantError, SpaceMismatchError
from .finspace import FinSpace, MeasMap, SubProb, Subset, measure_of, pushforward, same_space
from .lp import find_nonnegative_solution, residual

POINTS = "points"
HULL = "hull"


@dataclass(frozen=True)
class Generator:
    kind: str
    points: tuple[SubProb, ...]

    def __post_init__(self):
        if self.kind not in (POINTS, HULL):
            raise InvariantError(f"generator kind must be 'points' or 'hull', got {self.kind!r}")
        pts = tuple(self.points)
        if not pts:
            raise InvariantError("a generator needs at least one point")
        space = pts[0].space
        for p in pts[1:]:
            same_space(space, p.space, "generator points")
        object.__setattr__(self, "points", pts)

    @property
    def space(self) -> FinSpace:
        return self.points[0].space

    def is_singleton(self) -> bool:
        """True when the generator denotes exactly one distribution."""
        first = self.points[0]
        return all(p == first for p in self.points)

    def __str__(self) -> str:
        return f"{self.kind.capitalize()}{{" + ", ".join(str(p) for p in self.points) + "}"


def Points(*pts: SubProb) -> Generator:
    return Generator(POINTS, pts)


def Hull(*pts: SubProb) -> Generator:
    return Generator(HULL, pts)


def linear_extrema(g: Generator, a: Subset) -> tuple[Fraction, Fraction]:
    """Min and max of ``mu -> mu(a)`` over the set denoted by ``g``."""
    same_space(g.space, a.space, "generator and event")
    vals = [measure_of(p, a) for p in g.points]
    return min(vals), max(vals)


def weighted_extrema(g: Generator, weights: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Min and max of ``nu -> sum_t weights[t] * nu(t)`` over ``g``."""
    if len(weights) != len(g.space):
        raise SpaceMismatchError(f"{len(weights)} weights for a {len(g.space)}-state space")
    vals = [sum((w * x for w, x in zip(weights, p.weights)), Fraction(0)) for p in g.points]
    return min(vals), max(vals)


def hull_coefficients(mu: SubProb, pts: Sequence[SubProb]) -> list[Fraction] | None:
    """Convex coefficients writing ``mu`` as a combination of ``pts``, or None."""
    n = len(mu.space)
    rows = [[p.weights[i] for p in pts] for i in range(n)]
    rows.append([Fraction(1)] * len(pts))
    rhs = list(mu.weights) + [Fraction(1)]
    lam = find_nonnegative_solution(rows, rhs)
    if lam is None:
        return None
    if any(r != 0 for r in residual(rows, rhs, lam)) or any(x < 0 for x in lam):
        raise AssertionError("feasibility witness failed re-substitution")
    return lam


def point_in_generator(mu: SubProb, g: Generator) -> bool:
    same_space(mu.space, g.space, "point and generator")
    if mu in g.points:
        return True
    if g.kind == POINTS:
        return False
    return hull_coefficients(mu, g.points) is not None


def generator_subset(h: Generator, g: Generator) -> bool:
    """Whether the set denoted by ``h`` lies inside the set denoted by ``g``."""
    same_space(h.space, g.space, "generators")
    if h.kind == HULL and g.kind == POINTS:
        # a hull through two distinct points is uncountable
        return h.is_singleton() and h.points[0] in g.points
    # hull of h inside a convex g iff every listed point of h is
    return all(point_in_generator(p, g) for p in h.points)


def map_generator(f: MeasMap, g: Generator) -> Generator:
    """Direct image under the pushforward of ``f``; hulls map to hulls."""
    same_space(f.dom, g.space, "map domain and generator")
    return Generator(g.kind, tuple(pushforward(f, p) for p in g.points))

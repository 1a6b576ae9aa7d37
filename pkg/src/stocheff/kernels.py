"""Sub-Markov kernels between finite spaces and their Kleisli product."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InvariantError
from .finspace import FinSpace, MeasMap, SubProb, pushforward, same_space


@dataclass(frozen=True)
class Kernel:
    """A stochastic relation: one subprobability over ``cod`` per ``dom`` state."""

    dom: FinSpace
    cod: FinSpace
    rows: tuple[SubProb, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        if len(rows) != len(self.dom):
            raise InvariantError(f"{len(rows)} rows for {len(self.dom)} states")
        for s, r in zip(self.dom.states, rows):
            if r.space != self.cod:
                raise InvariantError(f"row of state {s!r} is not over {self.cod}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, dom: FinSpace, cod: FinSpace, rows: Mapping[str, object]) -> "Kernel":
        """Build from ``{state: weights}`` where weights is a sequence or mapping."""
        out = []
        for s in dom:
            if s not in rows:
                raise InvariantError(f"state {s!r} has no row")
            w = rows[s]
            try:
                out.append(SubProb.from_mapping(cod, w) if isinstance(w, Mapping) else SubProb(cod, tuple(w)))
            except InvariantError as exc:
                raise InvariantError(f"state {s!r}: {exc}") from None
        return cls(dom, cod, tuple(out))

    @classmethod
    def identity(cls, space: FinSpace) -> "Kernel":
        return cls(space, space, tuple(SubProb.dirac(space, s) for s in space))

    @classmethod
    def zero(cls, dom: FinSpace, cod: FinSpace) -> "Kernel":
        return cls(dom, cod, tuple(SubProb.zero(cod) for _ in dom))

    def __call__(self, state: str) -> SubProb:
        return self.rows[self.dom.index(state)]

    def matrix(self) -> list[list[Fraction]]:
        return [list(r.weights) for r in self.rows]


def kleisli(k: Kernel, l: Kernel) -> Kernel:
    """``(k * l)(s)(V) = sum_t l(t)(V) * k(s)({t})``."""
    same_space(k.cod, l.dom, "kernels in a Kleisli product")
    rows = []
    for r in k.rows:
        acc = [Fraction(0)] * len(l.cod)
        for kt, lrow in zip(r.weights, l.rows):
            if kt:
                for j, w in enumerate(lrow.weights):
                    acc[j] += kt * w
        rows.append(SubProb(l.cod, tuple(acc)))
    return Kernel(k.dom, l.cod, tuple(rows))


def is_kernel_morphism(f: MeasMap, g: MeasMap, k: Kernel, l: Kernel) -> bool:
    """``l(f(s)) == S(g)(k(s))`` for every state ``s``."""
    same_space(f.dom, k.dom, "f domain and K domain")
    same_space(f.cod, l.dom, "f codomain and L domain")
    same_space(g.dom, k.cod, "g domain and K codomain")
    same_space(g.cod, l.cod, "g codomain and L codomain")
    return all(l(f(s)) == pushforward(g, k(s)) for s in k.dom)


def pushforward_kernel(f: MeasMap, g: MeasMap, k: Kernel) -> Kernel:
    """The kernel on ``f.cod`` making ``(f, g)`` a morphism out of ``k``.

    Only defined when ``f`` is onto and states in one fibre of ``f`` push to
    the same distribution.
    """
    if not f.is_surjective():
        raise InvariantError("aggregation needs a surjective state map")
    rows: dict[str, SubProb] = {}
    for s in k.dom:
        pushed = pushforward(g, k(s))
        u = f(s)
        if rows.setdefault(u, pushed) != pushed:
            raise InvariantError(f"states mapped to {u!r} push to different distributions")
    return Kernel(f.cod, g.cod, tuple(rows[u] for u in f.cod))

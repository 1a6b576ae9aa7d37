"""Characteristic relations between thresholds and events.

A relation ``R`` is stored by its sections ``{r | <r, B> in R}``, one per
event ``B``.  Each section is a down-set of ``[0, 1]``: empty, ``[0, c)`` or
``[0, c]``.  The deduction rules are piecewise constant in their threshold
variables, so :func:`check_rules` decides each of them exactly by visiting
one sample point in every cell of the line arrangement the rule induces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .effectivity import Filter, critical_value
from .errors import InvariantError
from .finspace import FinSpace, SubProb, Subset, as_fraction, measure_of, same_space

ZERO = Fraction(0)
ONE = Fraction(1)

RULE_NAMES = {
    1: "upward closure in the event (<r,A> in R, A <= B => <r,B> in R)",
    2: "downward closure in the threshold (<r,A> in R, r >= s => <s,A> in R)",
    3: "subadditivity (<r,A>, <s,B> not in R, r+s <= 1 => <r+s, A u B> not in R)",
    4: "superadditivity (<r, A n B>, <s, A \\ B> in R, r+s <= 1 => <r+s, A> in R)",
    5: "complement bound (<r,A> in R, r+s > 1 => <s, S \\ A> not in R)",
    6: "null event (<r, empty> in R => r = 0)",
    7: "decreasing chains (<r, A_n> in R for all n => <r, meet A_n> in R)",
}


@dataclass(frozen=True)
class DownSet:
    """``bound is None`` is the empty set; otherwise ``[0, bound)`` or ``[0, bound]``."""

    bound: Fraction | None = None
    closed: bool = True

    def __post_init__(self):
        if self.bound is None:
            object.__setattr__(self, "closed", False)
            return
        bound = as_fraction(self.bound)
        if not 0 <= bound <= 1:
            raise InvariantError(f"section bound {bound} outside [0, 1]")
        object.__setattr__(self, "bound", bound)
        if bound == 0 and not self.closed:
            object.__setattr__(self, "bound", None)
            object.__setattr__(self, "closed", False)

    @classmethod
    def empty(cls) -> "DownSet":
        return cls(None, False)

    @classmethod
    def upto(cls, bound, closed: bool = True) -> "DownSet":
        return cls(as_fraction(bound), closed)

    def is_empty(self) -> bool:
        return self.bound is None

    def __contains__(self, r: Fraction) -> bool:
        if self.bound is None or r < 0:
            return False
        return r <= self.bound if self.closed else r < self.bound

    def sup(self) -> Fraction:
        return ZERO if self.bound is None else self.bound

    def __str__(self) -> str:
        if self.bound is None:
            return "empty"
        return f"[0,{self.bound}]" if self.closed else f"[0,{self.bound})"


@dataclass(frozen=True)
class CharRel:
    space: FinSpace
    sections: tuple[DownSet, ...]
    _by_event: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        sections = tuple(self.sections)
        events = self.space.subsets()
        if len(sections) != len(events):
            raise InvariantError(f"{len(sections)} sections for {len(events)} events")
        object.__setattr__(self, "sections", sections)
        object.__setattr__(self, "_by_event", {e.members: d for e, d in zip(events, sections)})

    @classmethod
    def from_mapping(cls, space: FinSpace, sections) -> "CharRel":
        """``sections`` maps Subsets (or frozensets of names) to DownSets; missing
        events get the empty section."""
        table = {}
        for key, d in dict(sections).items():
            members = key.members if isinstance(key, Subset) else frozenset(key)
            table[space.subset(members).members] = d
        return cls(space, tuple(table.get(e.members, DownSet.empty()) for e in space.subsets()))

    def section(self, event: Subset) -> DownSet:
        same_space(self.space, event.space, "relation and event")
        return self._by_event[event.members]

    def __contains__(self, pair) -> bool:
        r, event = pair
        return as_fraction(r) in self.section(event)

    def replace(self, event: Subset, d: DownSet) -> "CharRel":
        return CharRel.from_mapping(self.space, {**{e: self.section(e) for e in self.space.subsets()},
                                                 event: d})

    def is_attained(self) -> bool:
        """Every section is a nonempty closed interval ``[0, c]``."""
        return all(d.bound is not None and d.closed for d in self.sections)


def canonical_relation(mu: SubProb) -> CharRel:
    """``R_mu``: the section at ``B`` is ``[0, mu(B)]``."""
    return CharRel(mu.space, tuple(DownSet.upto(measure_of(mu, e)) for e in mu.space.subsets()))


@dataclass(frozen=True)
class Violation:
    rule: int
    witness: dict

    @property
    def name(self) -> str:
        return RULE_NAMES[self.rule]

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"rule {self.rule} ({self.name}): {parts}"


def _grid(crit: Iterable[Fraction]) -> list[Fraction]:
    pts = sorted({c for c in crit if 0 <= c <= 1} | {ZERO, ONE})
    return pts + [(a + b) / 2 for a, b in zip(pts, pts[1:])]


def _cells_2d(vert, horiz, diag) -> Iterator[tuple[Fraction, Fraction]]:
    """One point in each face of the arrangement of lines ``r = v``, ``s = h``
    and ``r + s = d`` inside the unit square."""
    horiz = list(horiz) + [ZERO, ONE]
    diag = list(diag)
    for r in _grid(list(vert) + [d - h for d in diag for h in horiz]):
        for s in _grid(horiz + [d - r for d in diag]):
            yield r, s


def _one_violation(cells, pred: Callable) -> tuple | None:
    for point in cells:
        if not pred(*point):
            return point
    return None


def check_rules(rel: CharRel) -> list[Violation]:
    """All rule violations of ``rel``; an empty list means every rule holds."""
    space = rel.space
    events = space.subsets()
    sec = rel.section
    out: list[Violation] = []

    for a in events:
        for b in events:
            if not a <= b:
                continue
            ra, rb = sec(a), sec(b)
            # rule 1
            r = _one_violation(((r,) for r in _grid([ra.sup(), rb.sup()])),
                               lambda r: r not in ra or r in rb)
            if r is not None:
                out.append(Violation(1, {"r": r[0], "A": a, "B": b}))
            # rule 7: on a finite space every decreasing chain is eventually
            # constant; the two-step chain b <= a meets at b
            r = _one_violation(((r,) for r in _grid([ra.sup(), rb.sup()])),
                               lambda r: not (r in ra and r in rb) or r in sec(a & b))
            if r is not None:
                out.append(Violation(7, {"r": r[0], "A": a, "B": b}))

    for a in events:
        ra = sec(a)
        for b in events:
            rb, rab = sec(b), sec(a | b)
            cells = _cells_2d([ra.sup()], [rb.sup()], [rab.sup(), ONE])
            hit = _one_violation(cells, lambda r, s: not (r not in ra and s not in rb and r + s <= 1)
                                 or (r + s) not in rab)
            if hit is not None:
                out.append(Violation(3, {"r": hit[0], "s": hit[1], "A": a, "B": b}))

    for a in events:
        ra = sec(a)
        for x in events:
            if not x <= a:
                continue
            y = a - x
            rx, ry = sec(x), sec(y)
            cells = _cells_2d([rx.sup()], [ry.sup()], [ra.sup(), ONE])
            hit = _one_violation(cells, lambda r, s: not (r in rx and s in ry and r + s <= 1)
                                 or (r + s) in ra)
            if hit is not None:
                out.append(Violation(4, {"r": hit[0], "s": hit[1], "A": a, "B": x}))

    for a in events:
        ra, rc = sec(a), sec(a.complement())
        cells = _cells_2d([ra.sup()], [rc.sup()], [ONE])
        hit = _one_violation(cells, lambda r, s: not (r in ra and r + s > 1) or s not in rc)
        if hit is not None:
            out.append(Violation(5, {"r": hit[0], "s": hit[1], "A": a}))

    r0 = sec(space.empty())
    hit = _one_violation(((r,) for r in _grid([r0.sup()])), lambda r: r not in r0 or r == 0)
    if hit is not None:
        out.append(Violation(6, {"r": hit[0]}))

    out.sort(key=lambda v: v.rule)
    return out


@dataclass(frozen=True)
class Extraction:
    """Per-singleton suprema plus the verdict on whether they form a measure."""

    weights: tuple[Fraction, ...]
    valid: bool
    reason: str = ""
    witness: tuple = ()
    measure: SubProb | None = None


def extract_measure(rel: CharRel) -> Extraction:
    space = rel.space
    events = space.subsets()
    sup = {e.members: rel.section(e).sup() for e in events}
    weights = tuple(sup[frozenset([s])] for s in space)
    if sup[frozenset()] != 0:
        return Extraction(weights, False, "the empty event has positive supremum",
                          (space.empty(),))
    for a in events:
        for b in events:
            if a.members & b.members or not a.members or not b.members:
                continue
            if sup[(a | b).members] != sup[a.members] + sup[b.members]:
                return Extraction(weights, False, "not additive on disjoint events", (a, b))
    total = sum(weights, ZERO)
    if total > 1:
        return Extraction(weights, False, f"total mass {total} exceeds 1", ())
    return Extraction(weights, True, measure=SubProb(space, weights))


def filter_section(q: Filter, event: Subset) -> DownSet:
    """``{r | beta(event, >= r) in Q}`` as a down-set."""
    m = critical_value(q, event)
    return DownSet.empty() if m is None else DownSet.upto(m, closed=True)


def satisfies(q: Filter, rel: CharRel) -> bool:
    same_space(q.space, rel.space, "filter and relation")
    return all(filter_section(q, e) == rel.section(e) for e in rel.space.subsets())


def implements(q: Filter, mu: SubProb, strict: bool = False) -> bool:
    """``mu(A) >= r`` iff ``beta(A, >= r)`` (or ``beta(A, > r)`` when
    ``strict``) lies in ``q``, for every event and threshold.

    Under ``strict`` the right-hand side is the half-open ``[0, m)`` while the
    left-hand side is the closed ``[0, mu(A)]``, so it never holds.
    """
    same_space(q.space, mu.space, "filter and measure")
    for e in mu.space.subsets():
        lhs = DownSet.upto(measure_of(mu, e), closed=True)
        m = critical_value(q, e)
        rhs = DownSet.empty() if m is None else DownSet.upto(m, closed=not strict)
        if lhs != rhs:
            return False
    return True

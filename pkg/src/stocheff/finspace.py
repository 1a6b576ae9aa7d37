"""Finite measurable spaces, subsets, partitions, maps and subprobabilities.

Every space carries the full power set as its sigma-algebra, so every map
between finite spaces is measurable and every subset is an event.  Weights
are kept as :class:`fractions.Fraction` throughout; floats are refused at
the boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import InvariantError, SpaceMismatchError, UnknownStateError

RELATIONS = ("<", "<=", ">", ">=")
_REL_ALIASES = {"≤": "<=", "≥": ">=", "=<": "<=", "=>": ">="}


def as_fraction(value) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats and decimal strings."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE"):
            raise ValueError(f"decimal literal {value!r} refused; write it as p/q")
        return Fraction(text)
    if isinstance(value, float):
        raise TypeError(f"float {value!r} refused; use Fraction or 'p/q'")
    raise TypeError(f"cannot read {value!r} as a rational")


def normalize_rel(rel: str) -> str:
    rel = _REL_ALIASES.get(rel, rel)
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    return rel


def compare(value: Fraction, rel: str, bound: Fraction) -> bool:
    if rel == ">":
        return value > bound
    if rel == ">=":
        return value >= bound
    if rel == "<":
        return value < bound
    if rel == "<=":
        return value <= bound
    raise ValueError(f"unknown relation {rel!r}")


@dataclass(frozen=True)
class FinSpace:
    states: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise InvariantError("a finite space needs at least one state")
        for s in states:
            if not isinstance(s, str) or not s:
                raise InvariantError(f"state names must be nonempty strings, got {s!r}")
        if len(set(states)) != len(states):
            dup = sorted({s for s in states if states.count(s) > 1})
            raise InvariantError(f"duplicate state names: {', '.join(dup)}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(states)})

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[str]:
        return iter(self.states)

    def __contains__(self, state) -> bool:
        return state in self._index

    def index(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise UnknownStateError(f"unknown state {state!r}") from None

    def subset(self, members: Iterable[str] = ()) -> "Subset":
        return Subset(self, frozenset(members))

    def full(self) -> "Subset":
        return Subset(self, frozenset(self.states))

    def empty(self) -> "Subset":
        return Subset(self, frozenset())

    def subsets(self) -> list["Subset"]:
        """All 2^n events, ordered by the bitmask of their members."""
        n = len(self.states)
        return [
            Subset(self, frozenset(self.states[i] for i in range(n) if mask >> i & 1))
            for mask in range(1 << n)
        ]

    def __str__(self) -> str:
        return "{" + ", ".join(self.states) + "}"


def same_space(a: FinSpace, b: FinSpace, what: str = "operands") -> None:
    if a != b:
        raise SpaceMismatchError(f"{what} live over different spaces: {a} vs {b}")


@dataclass(frozen=True)
class Subset:
    space: FinSpace
    members: frozenset

    def __post_init__(self):
        members = frozenset(self.members)
        for s in members:
            if s not in self.space:
                raise UnknownStateError(f"state {s!r} is not in {self.space}")
        object.__setattr__(self, "members", members)

    def __iter__(self) -> Iterator[str]:
        return (s for s in self.space.states if s in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, state) -> bool:
        return state in self.members

    def _check(self, other: "Subset") -> None:
        same_space(self.space, other.space, "subsets")

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.space, self.members | other.members)

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.space, self.members & other.members)

    def __sub__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.space, self.members - other.members)

    def __le__(self, other: "Subset") -> bool:
        self._check(other)
        return self.members <= other.members

    def __lt__(self, other: "Subset") -> bool:
        self._check(other)
        return self.members < other.members

    def complement(self) -> "Subset":
        return Subset(self.space, frozenset(self.space.states) - self.members)

    def names(self) -> tuple[str, ...]:
        return tuple(self)

    def __str__(self) -> str:
        return "{" + ", ".join(self) + "}"


@dataclass(frozen=True)
class Partition:
    """A partition of a space into nonempty blocks, kept in canonical order.

    Blocks are ordered by their first member in the space's state order, so
    two partitions with the same blocks compare equal.
    """

    space: FinSpace
    blocks: tuple[Subset, ...]

    def __post_init__(self):
        blocks = []
        seen: set = set()
        for b in self.blocks:
            if not isinstance(b, Subset):
                b = Subset(self.space, frozenset(b))
            same_space(self.space, b.space, "partition blocks")
            if not b.members:
                raise InvariantError("partition blocks must be nonempty")
            if seen & b.members:
                raise InvariantError(f"partition blocks overlap on {sorted(seen & b.members)}")
            seen |= b.members
            blocks.append(b)
        missing = [s for s in self.space.states if s not in seen]
        if missing:
            raise InvariantError(f"partition does not cover {', '.join(missing)}")
        blocks.sort(key=lambda b: min(self.space.index(s) for s in b.members))
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def discrete(cls, space: FinSpace) -> "Partition":
        return cls(space, tuple(space.subset([s]) for s in space))

    @classmethod
    def indiscrete(cls, space: FinSpace) -> "Partition":
        return cls(space, (space.full(),))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, state: str) -> Subset:
        for b in self.blocks:
            if state in b:
                return b
        raise UnknownStateError(f"unknown state {state!r}")

    def is_discrete(self) -> bool:
        return len(self.blocks) == len(self.space)

    def is_invariant(self, a: Subset) -> bool:
        same_space(self.space, a.space, "partition and subset")
        return all(b.members <= a.members or not (b.members & a.members) for b in self.blocks)

    def quotient_space(self) -> FinSpace:
        return FinSpace(tuple(block_name(b) for b in self.blocks))

    def factor_map(self) -> "MeasMap":
        """The map sending each state to the name of its block."""
        cod = self.quotient_space()
        names = {s: block_name(b) for b in self.blocks for s in b}
        return MeasMap(self.space, cod, tuple(names[s] for s in self.space))

    def __str__(self) -> str:
        return "|".join(",".join(b) for b in self.blocks)


def block_name(block: Subset) -> str:
    return "+".join(block)


def partition_from_text(space: FinSpace, text: str) -> Partition:
    """Read ``"a,b|c"`` style block notation."""
    blocks = []
    for chunk in text.split("|"):
        names = [n.strip() for n in chunk.split(",") if n.strip()]
        if not names:
            raise InvariantError(f"empty block in partition {text!r}")
        blocks.append(space.subset(names))
    return Partition(space, tuple(blocks))


def all_partitions(space: FinSpace) -> list[Partition]:
    """Every partition of ``space``, finest first, then lexicographic on
    restricted-growth strings."""
    n = len(space)
    rgs_list = []

    def grow(prefix, top):
        if len(prefix) == n:
            rgs_list.append(tuple(prefix))
            return
        for label in range(top + 2):
            grow(prefix + [label], max(top, label))

    grow([0], 0)
    out = []
    for rgs in rgs_list:
        k = max(rgs) + 1
        blocks = [[] for _ in range(k)]
        for s, label in zip(space.states, rgs):
            blocks[label].append(s)
        out.append((-k, rgs, Partition(space, tuple(space.subset(b) for b in blocks))))
    out.sort(key=lambda t: (t[0], t[1]))
    return [p for _, _, p in out]


@dataclass(frozen=True)
class MeasMap:
    """A total map between finite spaces; ``images`` follows ``dom.states``."""

    dom: FinSpace
    cod: FinSpace
    images: tuple[str, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != len(self.dom):
            raise InvariantError(
                f"map assigns {len(images)} images for {len(self.dom)} states")
        for s, t in zip(self.dom.states, images):
            if t not in self.cod:
                raise InvariantError(f"state {s!r} is mapped to {t!r}, which is not in {self.cod}")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_mapping(cls, dom: FinSpace, cod: FinSpace, assignment: Mapping[str, str]) -> "MeasMap":
        missing = [s for s in dom if s not in assignment]
        if missing:
            raise InvariantError(f"map leaves {', '.join(missing)} unassigned")
        extra = [s for s in assignment if s not in dom]
        if extra:
            raise UnknownStateError(f"map assigns unknown states {', '.join(map(str, extra))}")
        return cls(dom, cod, tuple(assignment[s] for s in dom))

    @classmethod
    def identity(cls, space: FinSpace) -> "MeasMap":
        return cls(space, space, space.states)

    def __call__(self, state: str) -> str:
        return self.images[self.dom.index(state)]

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.dom.states, self.images))

    def preimage(self, b: Subset) -> Subset:
        same_space(self.cod, b.space, "map codomain and event")
        return Subset(self.dom, frozenset(s for s, t in zip(self.dom.states, self.images) if t in b))

    def image(self, a: Subset) -> Subset:
        same_space(self.dom, a.space, "map domain and event")
        return Subset(self.cod, frozenset(self(s) for s in a))

    def then(self, g: "MeasMap") -> "MeasMap":
        """The composite ``g . self``."""
        same_space(self.cod, g.dom, "composed maps")
        return MeasMap(self.dom, g.cod, tuple(g(t) for t in self.images))

    def is_surjective(self) -> bool:
        return set(self.images) == set(self.cod.states)

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "MeasMap":
        if not self.is_bijective():
            raise InvariantError("only bijections have inverses")
        back = {t: s for s, t in zip(self.dom.states, self.images)}
        return MeasMap(self.cod, self.dom, tuple(back[t] for t in self.cod.states))


def all_maps(dom: FinSpace, cod: FinSpace) -> Iterator[MeasMap]:
    for images in product(cod.states, repeat=len(dom)):
        yield MeasMap(dom, cod, images)


@dataclass(frozen=True)
class SubProb:
    """A subprobability vector over a finite space."""

    space: FinSpace
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(as_fraction(w) for w in self.weights)
        if len(weights) != len(self.space):
            raise InvariantError(f"{len(weights)} weights given for {len(self.space)} states")
        for s, w in zip(self.space.states, weights):
            if w < 0:
                raise InvariantError(f"state {s!r}: negative weight {w}")
        total = sum(weights, Fraction(0))
        if total > 1:
            raise InvariantError(f"weights sum to {total} > 1")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_mapping(cls, space: FinSpace, weights: Mapping[str, object]) -> "SubProb":
        for s in weights:
            space.index(s)
        return cls(space, tuple(as_fraction(weights.get(s, 0)) for s in space))

    @classmethod
    def zero(cls, space: FinSpace) -> "SubProb":
        return cls(space, (Fraction(0),) * len(space))

    @classmethod
    def dirac(cls, space: FinSpace, state: str) -> "SubProb":
        i = space.index(state)
        return cls(space, tuple(Fraction(int(j == i)) for j in range(len(space))))

    def __getitem__(self, state: str) -> Fraction:
        return self.weights[self.space.index(state)]

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def __str__(self) -> str:
        return "(" + ", ".join(str(w) for w in self.weights) + ")"


@dataclass(frozen=True)
class ThresholdQuery:
    """The threshold set of all subprobabilities ``mu`` with ``mu(event) rel bound``."""

    event: Subset
    rel: str
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rel", normalize_rel(self.rel))
        bound = as_fraction(self.bound)
        if not 0 <= bound <= 1:
            raise InvariantError(f"threshold {bound} outside [0, 1]")
        object.__setattr__(self, "bound", bound)


def measure_of(mu: SubProb, a: Subset) -> Fraction:
    same_space(mu.space, a.space, "measure and event")
    idx = mu.space._index
    return sum((mu.weights[idx[s]] for s in a.members), Fraction(0))


def pushforward(f: MeasMap, mu: SubProb) -> SubProb:
    """Image measure: ``result(B) = mu(f^-1(B))``."""
    same_space(f.dom, mu.space, "map domain and measure")
    acc = [Fraction(0)] * len(f.cod)
    idx = f.cod._index
    for t, w in zip(f.images, mu.weights):
        acc[idx[t]] += w
    return SubProb(f.cod, tuple(acc))


def query_holds(q: ThresholdQuery, mu: SubProb) -> bool:
    return compare(measure_of(mu, q.event), q.rel, q.bound)


def choquet_area(f_vals, mu: SubProb) -> Fraction:
    """Integral of ``t -> mu({f > t})`` over ``t >= 0``, summed exactly.

    ``f_vals`` is a sequence aligned with the space or a mapping by state.
    Between consecutive distinct values of ``f`` the super-level set is
    constant, so the area is a finite sum of width times mass.
    """
    if isinstance(f_vals, Mapping):
        vals = [as_fraction(f_vals[s]) for s in mu.space]
    else:
        vals = [as_fraction(v) for v in f_vals]
    if len(vals) != len(mu.space):
        raise InvariantError(f"{len(vals)} function values for {len(mu.space)} states")
    for s, v in zip(mu.space.states, vals):
        if v < 0:
            raise InvariantError(f"state {s!r}: negative function value {v}")
    area = Fraction(0)
    prev = Fraction(0)
    for level in sorted(set(vals)):
        if level == 0:
            continue
        mass = sum((w for v, w in zip(vals, mu.weights) if v >= level), Fraction(0))
        area += (level - prev) * mass
        prev = level
    return area


def invariant_sets(part: Partition) -> list[Subset]:
    """All unions of blocks; there are ``2 ** len(part)`` of them."""
    k = len(part.blocks)
    out = []
    for mask in range(1 << k):
        members = frozenset().union(*(part.blocks[i].members for i in range(k) if mask >> i & 1))
        out.append(Subset(part.space, members))
    return out


def kernel_of_map(f: MeasMap) -> Partition:
    """The partition of ``f.dom`` into nonempty fibres."""
    fibres: dict[str, list[str]] = {}
    for s, t in zip(f.dom.states, f.images):
        fibres.setdefault(t, []).append(s)
    return Partition(f.dom, tuple(f.dom.subset(v) for v in fibres.values()))

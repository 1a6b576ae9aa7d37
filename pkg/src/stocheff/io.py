"""JSON documents for every model type.

Each document is one JSON object with ``"format": 1`` and a ``"kind"`` tag.
Rationals are strings (``"1/2"``, ``"0"``, ``"1"``); states are referenced
by name and always listed in the order of their space, so :func:`dumps` is
byte-stable and ``dumps(loads(text)) == text`` for canonical files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .charrel import CharRel, DownSet
from .effectivity import EffFn, Filter
from .equiv import Congruence
from .errors import InvariantError, StochEffError
from .finspace import FinSpace, Partition, SubProb, Subset, as_fraction
from .geometry import Generator
from .kernels import Kernel
from .logic import NeighborhoodModel

FORMAT = 1
KINDS = ("space", "kernel", "effectivity", "nbhd-model", "charrel", "congruence",
         "transition-system", "nlmp")


class FormatError(StochEffError, ValueError):
    pass


@dataclass(frozen=True)
class TransitionSystem:
    space: FinSpace
    edges: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class NLMP:
    dom: FinSpace
    kappa: tuple[Generator, ...]

    def as_mapping(self) -> dict[str, Generator]:
        return dict(zip(self.dom.states, self.kappa))


@dataclass(frozen=True)
class Document:
    kind: str
    value: Any
    valuation: Mapping[str, Subset] | None = field(default=None)


def _q(x: Fraction) -> str:
    return str(x)


def _space(names) -> FinSpace:
    if not isinstance(names, list):
        raise FormatError("a state list must be a JSON array")
    return FinSpace(tuple(names))


def _subset(space: FinSpace, names) -> Subset:
    if not isinstance(names, list):
        raise FormatError("an event must be a JSON array of state names")
    return space.subset(names)


def _generator_to_json(g: Generator) -> dict:
    return {"kind": g.kind, "points": [[_q(w) for w in p.weights] for p in g.points]}


def _generator_from_json(cod: FinSpace, d, where: str) -> Generator:
    try:
        pts = tuple(SubProb(cod, tuple(as_fraction(w) for w in p)) for p in d["points"])
        return Generator(d["kind"], pts)
    except (InvariantError, ValueError, TypeError) as exc:
        raise InvariantError(f"{where}: {exc}") from None
    except KeyError as exc:
        raise FormatError(f"{where}: generator lacks {exc}") from None


def _valuation_to_json(val) -> dict:
    return {name: list(ev) for name, ev in val.items()}


def to_json(doc: Document) -> dict:
    v = doc.value
    out: dict = {"format": FORMAT, "kind": doc.kind}
    if doc.kind == "space":
        out["states"] = list(v.states)
    elif doc.kind == "kernel":
        out["dom"] = list(v.dom.states)
        out["cod"] = list(v.cod.states)
        out["rows"] = {s: [_q(w) for w in r.weights] for s, r in zip(v.dom.states, v.rows)}
    elif doc.kind == "effectivity":
        out["dom"] = list(v.dom.states)
        out["cod"] = list(v.cod.states)
        out["portfolio"] = {s: [_generator_to_json(g) for g in flt.generators]
                            for s, flt in zip(v.dom.states, v.portfolio)}
    elif doc.kind == "nbhd-model":
        out["states"] = list(v.space.states)
        out["games"] = {name: {s: [list(a) for a in table[s]] for s in v.space}
                        for name, table in v.primitives.items()}
    elif doc.kind == "charrel":
        out["states"] = list(v.space.states)
        out["sections"] = [
            {"event": list(e), "bound": None if d.bound is None else _q(d.bound), "closed": d.closed}
            for e, d in zip(v.space.subsets(), v.sections)]
    elif doc.kind == "congruence":
        out["dom"] = list(v.alpha.space.states)
        out["cod"] = list(v.beta.space.states)
        out["alpha"] = [list(b) for b in v.alpha.blocks]
        out["beta"] = [list(b) for b in v.beta.blocks]
    elif doc.kind == "transition-system":
        out["states"] = list(v.space.states)
        out["edges"] = [list(e) for e in v.edges]
    elif doc.kind == "nlmp":
        out["dom"] = list(v.dom.states)
        out["cod"] = list(v.kappa[0].space.states)
        out["kappa"] = {s: _generator_to_json(g) for s, g in zip(v.dom.states, v.kappa)}
    else:
        raise FormatError(f"unknown document kind {doc.kind!r}")
    if doc.valuation is not None:
        out["valuation"] = _valuation_to_json(doc.valuation)
    return out


def from_json(d: Mapping) -> Document:
    if not isinstance(d, Mapping):
        raise FormatError("a document must be a JSON object")
    if d.get("format") != FORMAT:
        raise FormatError(f"unsupported format {d.get('format')!r}; expected {FORMAT}")
    kind = d.get("kind")
    try:
        value = _decode(kind, d)
    except KeyError as exc:
        raise FormatError(f"{kind} document lacks field {exc}") from None
    valuation = None
    if "valuation" in d:
        space = _valuation_space(kind, value)
        valuation = {name: _subset(space, ev) for name, ev in d["valuation"].items()}
    return Document(kind, value, valuation)


def _valuation_space(kind, value) -> FinSpace:
    if kind in ("kernel", "effectivity"):
        return value.cod
    if kind == "space":
        return value
    if kind in ("nbhd-model", "charrel", "transition-system"):
        return value.space
    raise FormatError(f"{kind} documents cannot carry a valuation")


def _decode(kind, d):
    if kind == "space":
        return _space(d["states"])
    if kind == "kernel":
        dom, cod = _space(d["dom"]), _space(d["cod"])
        rows = d["rows"]
        return Kernel.from_rows(dom, cod, {s: [as_fraction(w) for w in r] for s, r in rows.items()})
    if kind == "effectivity":
        dom, cod = _space(d["dom"]), _space(d["cod"])
        port = d["portfolio"]
        for s in port:
            dom.index(s)
        filters = []
        for s in dom:
            gens = tuple(_generator_from_json(cod, g, f"state {s!r}, generator {i + 1}")
                         for i, g in enumerate(port.get(s, [])))
            filters.append(Filter(cod, gens))
        return EffFn(dom, cod, tuple(filters))
    if kind == "nbhd-model":
        space = _space(d["states"])
        prims = {}
        for name, table in d["games"].items():
            prims[name] = {s: tuple(_subset(space, a) for a in sets) for s, sets in table.items()}
        return NeighborhoodModel(space, prims)
    if kind == "charrel":
        space = _space(d["states"])
        sections = {}
        for entry in d["sections"]:
            ev = _subset(space, entry["event"])
            b = entry.get("bound")
            sections[ev] = DownSet.empty() if b is None else DownSet.upto(b, bool(entry.get("closed", True)))
        return CharRel.from_mapping(space, sections)
    if kind == "congruence":
        dom, cod = _space(d["dom"]), _space(d["cod"])
        return Congruence(Partition(dom, tuple(_subset(dom, b) for b in d["alpha"])),
                          Partition(cod, tuple(_subset(cod, b) for b in d["beta"])))
    if kind == "transition-system":
        space = _space(d["states"])
        edges = []
        for e in d["edges"]:
            if not isinstance(e, list) or len(e) != 2:
                raise FormatError(f"edge {e!r} must be a pair of state names")
            space.index(e[0])
            space.index(e[1])
            edges.append((e[0], e[1]))
        return TransitionSystem(space, tuple(edges))
    if kind == "nlmp":
        dom, cod = _space(d["dom"]), _space(d["cod"])
        kappa = d["kappa"]
        missing = [s for s in dom if s not in kappa]
        if missing:
            raise InvariantError(f"no generator for state {missing[0]!r}")
        return NLMP(dom, tuple(_generator_from_json(cod, kappa[s], f"state {s!r}") for s in dom))
    raise FormatError(f"unknown document kind {kind!r}; expected one of {', '.join(KINDS)}")


def _emit(obj, depth: int = 0) -> str:
    # like json.dumps(indent=2) but arrays of scalars stay on one line
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {_emit(v, depth + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            return "[" + ", ".join(json.dumps(x) for x in obj) + "]"
        body = ",\n".join(inner + _emit(x, depth + 1) for x in obj)
        return "[\n" + body + "\n" + pad + "]"
    return json.dumps(obj)


def dumps(doc: Document) -> str:
    return _emit(to_json(doc)) + "\n"


def loads(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return from_json(data)


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(doc: Document, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))

"""Command-line front end.

Exit codes: 0 verdict true or success, 1 verdict false (witness on stdout),
2 input or format error, 3 equivalence search bound exceeded.
"""
from __future__ import annotations

import argparse
import sys

from . import io
from .charrel import RULE_NAMES, check_rules, extract_measure
from .compose import check_conv_ok, conv_mismatches, convolve
from .effectivity import (EffFn, detect_pointed, lift_kernel, lift_nlmp,
                          lift_transition_system, profile)
from .equiv import (Congruence, congruence_failures, cospan_from_logical,
                    logically_equivalent, quotient)
from .errors import SearchBoundExceeded, StochEffError
from .finspace import FinSpace, Subset, as_fraction, partition_from_text
from .logic import (NeighborhoodModel, ParseError, StochModel, eval_formula,
                    eval_game, parse_formula, parse_game)

OK, FALSE, INPUT_ERROR, BOUND_EXCEEDED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path) -> io.Document:
    try:
        return io.load(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except (StochEffError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {_message(exc)}") from None


def _message(exc: BaseException) -> str:
    # KeyError wraps its message in quotes
    return exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)


def _effectivity(doc: io.Document, path) -> EffFn:
    if doc.kind == "effectivity":
        return doc.value
    if doc.kind == "kernel":
        return lift_kernel(doc.value)
    if doc.kind == "transition-system":
        return lift_transition_system(doc.value.space, doc.value.edges)
    if doc.kind == "nlmp":
        return lift_nlmp(doc.value.dom, doc.value.as_mapping())
    raise UsageError(f"{path}: expected an effectivity, kernel, transition-system or nlmp document, "
                     f"got {doc.kind!r}")


def _event(space: FinSpace, text: str) -> Subset:
    names = [t.strip() for t in text.split(",") if t.strip()]
    return space.subset(names)


def _rational(text: str):
    try:
        return as_fraction(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}: {exc}") from None


def _map_line(label, m) -> str:
    return f"{label}: " + ", ".join(f"{s} -> {m(s)}" for s in m.dom)


# subcommands

def cmd_check(args) -> int:
    doc = _load(args.model)
    v = doc.value
    if doc.kind in ("kernel", "effectivity", "transition-system", "nlmp"):
        p = _effectivity(doc, args.model)
        print(f"ok: {doc.kind} {p.dom} -> {p.cod}")
        if args.profiles:
            for event in p.cod.subsets():
                for rel in (">", ">="):
                    prof = profile(p, event, rel)
                    cells = "  ".join(f"{s} {prof.interval(i)}" for i, s in enumerate(p.dom))
                    print(f"{event} {rel}  {cells}")
    elif doc.kind == "space":
        print(f"ok: space {v}")
    elif doc.kind in ("nbhd-model", "charrel"):
        print(f"ok: {doc.kind} over {v.space}")
    else:
        print(f"ok: congruence {v.alpha} / {v.beta}")
    return OK


def cmd_modelcheck(args) -> int:
    doc = _load(args.model)
    p = _effectivity(doc, args.model)
    model = StochModel(p, doc.valuation or {})
    print(eval_formula(model, parse_formula(args.formula)))
    return OK


def cmd_gameeval(args) -> int:
    doc = _load(args.model)
    if doc.kind != "nbhd-model":
        raise UsageError(f"{args.model}: expected an nbhd-model document, got {doc.kind!r}")
    model: NeighborhoodModel = doc.value
    print(eval_game(model, parse_game(args.game), _event(model.space, args.target)))
    return OK


def cmd_compose(args) -> int:
    p = _effectivity(_load(args.first), args.first)
    q = _effectivity(_load(args.second), args.second)
    if p.cod != q.dom:
        raise UsageError(f"outcome space {p.cod} of the first model is not the state space {q.dom} "
                         f"of the second")
    print(convolve(p, q, _event(q.cod, args.event), _rational(args.q)))
    if not args.verify_kleisli:
        return OK
    k, l = detect_pointed(p), detect_pointed(q)
    if k is None or l is None:
        print("kleisli: skipped, inputs are not both pointed")
        return OK
    if check_conv_ok(k, l):
        print("kleisli: ok")
        return OK
    event, bound, lhs, rhs = next(iter(conv_mismatches(k, l)))
    print(f"kleisli: mismatch at event {event}, q = {bound}: convolution {lhs}, Kleisli {rhs}")
    return FALSE


def cmd_quotient(args) -> int:
    doc = _load(args.model)
    p = _effectivity(doc, args.model)
    c = Congruence(partition_from_text(p.dom, args.alpha), partition_from_text(p.cod, args.beta))
    bad = congruence_failures(p, c)
    if bad:
        s, t = bad[0]
        print(f"not a congruence: {s} and {t} share a block but their pushed filters differ")
        return FALSE
    out = io.dumps(io.Document("effectivity", quotient(p, c)))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return OK


def cmd_equiv(args) -> int:
    p = _effectivity(_load(args.first), args.first)
    q = _effectivity(_load(args.second), args.second)
    found = logically_equivalent(p, q, args.max_search)
    if found is None:
        print(f"not {args.mode}ly equivalent: no pair of congruences has isomorphic quotients")
        return FALSE
    cp, cq, iso = found
    if args.mode == "logical":
        print("logically equivalent")
        print(f"alpha(P): {cp.alpha}")
        print(f"beta(P): {cp.beta}")
        print(f"alpha(Q): {cq.alpha}")
        print(f"beta(Q): {cq.beta}")
        print(_map_line("iso states", iso.f))
        print(_map_line("iso outcomes", iso.g))
        return OK
    m, mp, mq = cospan_from_logical(p, q, cp, cq, iso)
    print("behaviorally equivalent")
    print(_map_line("P states", mp.f))
    print(_map_line("P outcomes", mp.g))
    print(_map_line("Q states", mq.f))
    print(_map_line("Q outcomes", mq.g))
    print("mediator:")
    sys.stdout.write(io.dumps(io.Document("effectivity", m)))
    return OK


def cmd_charrel(args) -> int:
    doc = _load(args.relation)
    if doc.kind != "charrel":
        raise UsageError(f"{args.relation}: expected a charrel document, got {doc.kind!r}")
    rel = doc.value
    if args.action == "check":
        bad = check_rules(rel)
        if not bad:
            print(f"ok: all {len(RULE_NAMES)} rules hold")
            return OK
        for v in bad:
            print(v)
        return FALSE
    ex = extract_measure(rel)
    weights = ", ".join(f"{s}: {w}" for s, w in zip(rel.space.states, ex.weights))
    print(f"weights: {weights}")
    if ex.valid:
        print("valid")
        return OK
    print(f"invalid: {ex.reason}")
    return FALSE


def cmd_lift(args) -> int:
    doc = _load(args.input)
    expected = {"kernel": "kernel", "ts": "transition-system", "nlmp": "nlmp"}[args.source]
    if doc.kind != expected:
        raise UsageError(f"{args.input}: expected a {expected} document, got {doc.kind!r}")
    sys.stdout.write(io.dumps(io.Document("effectivity", _effectivity(doc, args.input), doc.valuation)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stocheff", description="Exact finite stochastic effectivity functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="validate a model file")
    sp.add_argument("model")
    sp.add_argument("--profiles", action="store_true", help="print threshold profiles per event")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("modelcheck", help="evaluate a modal formula")
    sp.add_argument("model")
    sp.add_argument("--formula", required=True)
    sp.set_defaults(func=cmd_modelcheck)

    sp = sub.add_parser("gameeval", help="evaluate a game term on a target set")
    sp.add_argument("model")
    sp.add_argument("--game", required=True)
    sp.add_argument("--target", required=True, help="comma-separated states")
    sp.set_defaults(func=cmd_gameeval)

    sp = sub.add_parser("compose", help="convolve two models at an event and threshold")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--event", required=True, help="comma-separated outcomes of the second model")
    sp.add_argument("--q", required=True, help="rational threshold p/q")
    sp.add_argument("--verify-kleisli", action="store_true")
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("quotient", help="factor a model by a congruence")
    sp.add_argument("model")
    sp.add_argument("--alpha", required=True, help='state blocks, e.g. "a,b|c"')
    sp.add_argument("--beta", required=True, help="outcome blocks")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_quotient)

    sp = sub.add_parser("equiv", help="decide logical or behavioral equivalence")
    sp.add_argument("mode", choices=("logical", "behavioral"))
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--max-search", type=int, default=100_000)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("charrel", help="check or extract a characteristic relation")
    sp.add_argument("action", choices=("check", "extract"))
    sp.add_argument("relation")
    sp.set_defaults(func=cmd_charrel)

    sp = sub.add_parser("lift", help="lift a kernel, transition system or NLMP to an effectivity model")
    sp.add_argument("source", choices=("kernel", "ts", "nlmp"))
    sp.add_argument("input")
    sp.set_defaults(func=cmd_lift)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SearchBoundExceeded as exc:
        print(f"undecided: search bound exceeded ({exc}); raise --max-search")
        return BOUND_EXCEEDED
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (StochEffError, ValueError, KeyError) as exc:
        print(f"error: {_message(exc)}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Exact linear feasibility over the rationals.

``find_nonnegative_solution`` decides whether ``A x = b, x >= 0`` has a
solution with a phase-one simplex method on a Fraction tableau.  Bland's
rule picks entering and leaving variables, so the method terminates without
any tolerance.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .finspace import as_fraction


def find_nonnegative_solution(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Return some ``x >= 0`` with ``rows @ x == rhs``, or None if infeasible."""
    m = len(rows)
    if m != len(rhs):
        raise ValueError("row count and right-hand side length differ")
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise ValueError("ragged constraint matrix")
    zero = Fraction(0)

    tab = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        row = [as_fraction(x) for x in row]
        b = as_fraction(b)
        if b < 0:
            row = [-x for x in row]
            b = -b
        art = [zero] * m
        art[i] = Fraction(1)
        tab.append(row + art + [b])
    basis = [n + i for i in range(m)]
    width = n + m

    # reduced costs of the auxiliary objective (sum of artificials)
    cost = [zero] * (width + 1)
    for r in tab:
        for j in range(n):
            cost[j] -= r[j]
        cost[width] -= r[width]

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for i, r in enumerate(tab):
            a = r[entering]
            if a > 0:
                ratio = r[width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            # unbounded direction cannot occur: the auxiliary objective is bounded below by 0
            raise AssertionError("phase-one objective unbounded")
        _pivot(tab, cost, leaving, entering)
        basis[leaving] = entering

    if cost[width] != 0:
        return None
    x = [zero] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = tab[i][width]
    return x


def _pivot(tab, cost, row, col):
    piv = tab[row][col]
    prow = [v / piv for v in tab[row]]
    tab[row] = prow
    for i, r in enumerate(tab):
        if i != row and r[col] != 0:
            f = r[col]
            tab[i] = [a - f * b for a, b in zip(r, prow)]
    f = cost[col]
    if f != 0:
        cost[:] = [a - f * b for a, b in zip(cost, prow)]


def residual(rows: Sequence[Sequence], rhs: Sequence, x: Sequence) -> list[Fraction]:
    return [sum((as_fraction(a) * xi for a, xi in zip(r, x)), Fraction(0)) - as_fraction(b)
            for r, b in zip(rows, rhs)]

"""Independent length computation by bounded-degree linear algebra.

Builds the Macaulay-style matrix of all generator multiples up to a degree
bound and counts monomials outside the column span. Exists to validate the
Groebner pipeline on small instances, not to be fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import HilbertKunzError, MatrixTooLarge
from .poly import Exponents, Polynomial

DEFAULT_CELL_CAP = 50_000_000
MAX_COLUMNS = 50_000


def monomials_up_to(nvars: int, degree: int) -> list[Exponents]:
    """All exponent tuples with total degree <= degree, in a fixed order."""
    out = []
    # stars and bars over degree d for each d
    for d in range(degree + 1):
        for bars in combinations(range(d + nvars - 1), nvars - 1):
            exps = []
            prev = -1
            for b in bars:
                exps.append(b - prev - 1)
                prev = b
            exps.append(d + nvars - 1 - prev - 1)
            out.append(tuple(exps))
    return out


def _components(element, rank: int) -> tuple[Polynomial, ...]:
    comps = getattr(element, "components", None)
    if comps is None:
        if isinstance(element, Polynomial):
            comps = (element,)
        else:
            comps = tuple(element)
    if len(comps) != rank:
        raise HilbertKunzError("relation rank does not match the declared rank")
    return comps


@dataclass
class MacaulaySystem:
    """One bounded-degree system: row basis, columns, and the resulting count."""

    degree_bound: int
    n_rows: int
    n_cols: int
    rank: int
    count: int


def _rank_gf2(columns: list[int]) -> int:
    pivots: dict[int, int] = {}
    for col in columns:
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                col ^= pivots[top]
            else:
                pivots[top] = col
                break
    return len(pivots)


def _rank_gfp(columns: list[np.ndarray], p: int) -> int:
    pivots: dict[int, np.ndarray] = {}
    for col in columns:
        col = col.copy()
        while True:
            nz = np.nonzero(col)[0]
            if len(nz) == 0:
                break
            top = int(nz[0])
            if top in pivots:
                col = (col - int(col[top]) * pivots[top]) % p
            else:
                inv = pow(int(col[top]), p - 2, p)
                pivots[top] = (col * inv) % p
                break
    return len(pivots)


def build_system(
    relations, rank: int, p: int, degree_bound: int, cell_cap: int = DEFAULT_CELL_CAP
) -> MacaulaySystem:
    """Assemble and eliminate the degree-bounded system once."""
    rels = [_components(g, rank) for g in relations]
    rels = [comps for comps in rels if any(c.terms for c in comps)]
    if not rels:
        raise HilbertKunzError("no nonzero relations given")
    ring = next(c.ring for comps in rels for c in comps)
    if ring.p != p:
        raise HilbertKunzError(f"relations live over p={ring.p}, not {p}")
    v = ring.nvars

    # a generator of degree above the bound gets no multipliers at all
    degs = [
        max(sum(e) for c in comps for e, _ in c.terms) for comps in rels
    ]

    basis = monomials_up_to(v, degree_bound)
    row_index = {}
    for j in range(rank):
        for m in basis:
            row_index[(j, m)] = len(row_index)
    n_rows = len(row_index)

    n_cols = 0
    multipliers = {}
    for d in set(degs):
        multipliers[d] = monomials_up_to(v, degree_bound - d)
    for d in degs:
        n_cols += len(multipliers[d])
    if n_cols > MAX_COLUMNS or n_rows * n_cols > cell_cap:
        raise MatrixTooLarge(
            f"{n_rows} x {n_cols} exceeds the configured oracle limits"
        )

    if p == 2:
        cols2 = []
        for comps, d in zip(rels, degs):
            entries = [
                (j, e, c)
                for j, poly in enumerate(comps)
                for e, c in poly.terms
            ]
            for u in multipliers[d]:
                col = 0
                for j, e, c in entries:
                    shifted = tuple(a + b for a, b in zip(e, u))
                    col ^= 1 << row_index[(j, shifted)]
                cols2.append(col)
        rk = _rank_gf2(cols2)
    else:
        colsp = []
        for comps, d in zip(rels, degs):
            entries = [
                (j, e, c)
                for j, poly in enumerate(comps)
                for e, c in poly.terms
            ]
            for u in multipliers[d]:
                col = np.zeros(n_rows, dtype=np.int64)
                for j, e, c in entries:
                    shifted = tuple(a + b for a, b in zip(e, u))
                    col[row_index[(j, shifted)]] = (
                        col[row_index[(j, shifted)]] + c
                    ) % p
                colsp.append(col)
        rk = _rank_gfp(colsp, p)

    return MacaulaySystem(degree_bound, n_rows, n_cols, rk, n_rows - rk)


def _pure_power_box(relations, rank: int):
    """Minimal pure-power degree for every (component, variable) pair, from
    single-term relations; None when some pair has no pure power. A unit
    relation zeroes its whole component."""
    rels = [_components(g, rank) for g in relations]
    ring = next(c.ring for comps in rels for c in comps)
    v = ring.nvars
    box: list[list[int | None]] = [[None] * v for _ in range(rank)]
    for comps in rels:
        terms = [(j, e) for j, poly in enumerate(comps) for e, _ in poly.terms]
        if len(terms) != 1:
            continue
        j, e = terms[0]
        support = [i for i, k in enumerate(e) if k > 0]
        if len(support) == 0:
            box[j] = [0] * v
        elif len(support) == 1:
            i = support[0]
            if box[j][i] is None or e[i] < box[j][i]:
                box[j][i] = e[i]
    if any(b is None for row in box for b in row):
        return None
    return box


def exact_box_count(
    relations, rank: int, p: int, cell_cap: int = DEFAULT_CELL_CAP
) -> int:
    """Exact colength when every (component, variable) pair has a pure-power
    relation x_i^b e_j.

    Work in V = sum_j S/(x^b_j): a finite monomial box per component. Any
    multiplier outside the componentwise-max box lands in every (x^b_j), so
    the image of the submodule in V is spanned by the box-bounded multiples
    alone. The count dim V - rank is exact, not a degree-truncated bound.
    """
    rels = [_components(g, rank) for g in relations]
    rels = [comps for comps in rels if any(c.terms for c in comps)]
    if not rels:
        raise HilbertKunzError("no nonzero relations given")
    ring = next(c.ring for comps in rels for c in comps)
    if ring.p != p:
        raise HilbertKunzError(f"relations live over p={ring.p}, not {p}")
    v = ring.nvars
    box = _pure_power_box(relations, rank)
    if box is None:
        raise HilbertKunzError(
            "no pure-power certificate: some (component, variable) pair "
            "lacks a single-term pure-power relation"
        )

    row_index: dict[tuple[int, Exponents], int] = {}
    for j in range(rank):
        for m in product(*[range(b) for b in box[j]]):
            row_index[(j, m)] = len(row_index)
    n_rows = len(row_index)
    maxb = [max(box[j][i] for j in range(rank)) for i in range(v)]
    mults = list(product(*[range(b) for b in maxb]))
    n_cols = len(rels) * len(mults)
    if n_cols > MAX_COLUMNS or n_rows * n_cols > cell_cap:
        raise MatrixTooLarge(
            f"{n_rows} x {n_cols} exceeds the configured oracle limits"
        )

    def entries_of(comps):
        return [
            (j, e, c)
            for j, poly in enumerate(comps)
            for e, c in poly.terms
        ]

    if p == 2:
        cols2 = []
        for comps in rels:
            entries = entries_of(comps)
            for u in mults:
                col = 0
                for j, e, c in entries:
                    shifted = tuple(a + b for a, b in zip(e, u))
                    if all(s < b for s, b in zip(shifted, box[j])):
                        col ^= 1 << row_index[(j, shifted)]
                cols2.append(col)
        rk = _rank_gf2(cols2)
    else:
        colsp = []
        for comps in rels:
            entries = entries_of(comps)
            for u in mults:
                col = np.zeros(n_rows, dtype=np.int64)
                for j, e, c in entries:
                    shifted = tuple(a + b for a, b in zip(e, u))
                    if all(s < b for s, b in zip(shifted, box[j])):
                        idx = row_index[(j, shifted)]
                        col[idx] = (col[idx] + c) % p
                colsp.append(col)
        rk = _rank_gfp(colsp, p)
    return n_rows - rk


def oracle_length(
    relations,
    rank: int,
    p: int,
    degree_bound: int,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> tuple[int, bool]:
    """Count monomials of degree <= bound outside the span of all generator
    multiples.

    The count is a non-increasing upper bound on the colength as the bound
    grows. stable certifies the returned count is the true colength: the
    count matched the bound-1 run, every (component, variable) pair has a
    pure-power relation of degree <= bound, and the count equals the exact
    box computation those pure powers make possible. A plateau alone can
    lie (cancellation can resurface many degrees later), so the certificate
    is checked against the exact value, never inferred from the plateau.
    """
    sys_d = build_system(relations, rank, p, degree_bound, cell_cap)
    prev_matches = False
    if degree_bound >= 1:
        sys_prev = build_system(relations, rank, p, degree_bound - 1, cell_cap)
        prev_matches = sys_d.count == sys_prev.count
    stable = False
    if prev_matches:
        box = _pure_power_box(relations, rank)
        if box is not None and all(b <= degree_bound for row in box for b in row):
            stable = sys_d.count == exact_box_count(relations, rank, p, cell_cap)
    return sys_d.count, stable

"""Buchberger engine for ideals and submodules of free F_p[x]-modules.

Everything below works on one uniform representation: a term is a
(component, exponents) pair, an element is a list of terms with precomputed
order keys, sorted leading-first. Rank 1 recovers the ideal case. Keys obey
key(m*t) == mult_key(m) + key(t) componentwise, which lets reductions derive
keys by tuple addition instead of recomputing them.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from operator import add

from .errors import (
    HilbertKunzError,
    NotZeroDimensional,
    OrderMismatch,
    RankMismatch,
    ResourceLimit,
    RingMismatch,
    TooManyVariables,
)
from .poly import (
    Exponents,
    MonomialOrder,
    PolyRing,
    Polynomial,
    monomial_divides,
    monomial_lcm,
)

POSITION_OVER_TERM = "position"
TERM_OVER_POSITION = "term"

DEFAULT_MAX_BASIS = 200_000
COUNT_NODE_LIMIT = 2_000_000


@dataclass(frozen=True)
class ModuleOrder:
    """Order on (monomial, component) pairs.

    scheme 'position': component precedence decides first (earlier component
    in the precedence list is larger), monomial order breaks ties. scheme
    'term': monomial order decides first. Keys sort smaller-is-leading, like
    MonomialOrder keys.
    """

    base: MonomialOrder
    scheme: str = POSITION_OVER_TERM
    position_precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.scheme not in (POSITION_OVER_TERM, TERM_OVER_POSITION):
            raise HilbertKunzError(f"unknown module order scheme {self.scheme!r}")
        if self.position_precedence is not None and sorted(
            self.position_precedence
        ) != list(range(len(self.position_precedence))):
            raise HilbertKunzError("position precedence must be a permutation")

    def component_rank(self, rank: int) -> list[int]:
        prec = self.position_precedence or tuple(range(rank))
        if len(prec) != rank:
            raise RankMismatch("position precedence does not match rank")
        ranks = [0] * rank
        for where, comp in enumerate(prec):
            ranks[comp] = where
        return ranks


def default_module_order(ring: PolyRing, rank: int = 1) -> ModuleOrder:
    return ModuleOrder(ring.order, POSITION_OVER_TERM, tuple(range(rank)))


class FreeElement:
    """Element of a free module S^rank: a vector of polynomials."""

    __slots__ = ("ring", "components")

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise RankMismatch("rank must be at least 1")
        ring = components[0].ring
        for c in components:
            if c.ring != ring:
                raise RingMismatch("components over different rings")
        self.ring = ring
        self.components = components

    @property
    def rank(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def _check(self, other: FreeElement):
        if self.ring != other.ring:
            raise RingMismatch("elements over different rings")
        if self.rank != other.rank:
            raise RankMismatch(f"ranks differ: {self.rank} vs {other.rank}")

    def __add__(self, other: FreeElement) -> FreeElement:
        self._check(other)
        return FreeElement(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: FreeElement) -> FreeElement:
        self._check(other)
        return FreeElement(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> FreeElement:
        return FreeElement(tuple(-a for a in self.components))

    def scale(self, c: int) -> FreeElement:
        return FreeElement(tuple(a.scale(c) for a in self.components))

    def __mul__(self, other) -> FreeElement:
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, Polynomial):
            return FreeElement(tuple(a * other for a in self.components))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FreeElement)
            and self.ring == other.ring
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return "FreeElement(" + ", ".join(str(c) for c in self.components) + ")"


def unit_vector(ring: PolyRing, rank: int, j: int, poly: Polynomial | None = None) -> FreeElement:
    comps = [ring.zero()] * rank
    comps[j] = poly if poly is not None else ring.one()
    return FreeElement(comps)


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple[FreeElement, ...]
    order: ModuleOrder
    rank: int
    ring: PolyRing
    reduced: bool = True

    def leading_terms(self) -> list[tuple[int, Exponents]]:
        keyed = _keyfuncs(self.order, self.ring, self.rank)
        out = []
        for e in self.elements:
            terms = _element_terms(e, keyed)
            out.append((terms[0][1], terms[0][2]))
        return out


# -- engine ------------------------------------------------------------------


class _Keyed:
    """Key builders for one (order, ring, rank) combination."""

    __slots__ = ("order", "ring", "rank", "ranks", "scheme", "base")

    def __init__(self, order: ModuleOrder, ring: PolyRing, rank: int):
        self.order = order
        self.ring = ring
        self.rank = rank
        self.ranks = order.component_rank(rank)
        self.scheme = order.scheme
        self.base = order.base

    def term_key(self, comp: int, exps: Exponents):
        mk = self.base.key(exps)
        if self.scheme == POSITION_OVER_TERM:
            return (self.ranks[comp], *mk)
        return (*mk, self.ranks[comp])

    def mult_key(self, exps: Exponents):
        mk = self.base.key(exps)
        if self.scheme == POSITION_OVER_TERM:
            return (0, *mk)
        return (*mk, 0)


def _keyfuncs(order: ModuleOrder, ring: PolyRing, rank: int) -> _Keyed:
    return _Keyed(order, ring, rank)


def _element_terms(e: FreeElement, keyed: _Keyed):
    """[(key, comp, exps, coeff), ...] sorted leading-first."""
    terms = []
    for j, poly in enumerate(e.components):
        for exps, c in poly.terms:
            terms.append((keyed.term_key(j, exps), j, exps, c))
    terms.sort(key=lambda t: t[0])
    return terms


def _terms_to_element(terms, keyed: _Keyed) -> FreeElement:
    ring = keyed.ring
    comps: list[dict] = [dict() for _ in range(keyed.rank)]
    for _, j, exps, c in terms:
        comps[j][exps] = c
    return FreeElement(tuple(ring.from_dict(d) for d in comps))


def _monic_terms(terms, p: int):
    lead = terms[0][3]
    if lead == 1:
        return terms
    inv = pow(lead, p - 2, p)
    return [(k, j, e, c * inv % p) for k, j, e, c in terms]


class _Reducer:
    """Shared reduction state: basis elements bucketed by leading component."""

    def __init__(self, keyed: _Keyed, p: int):
        self.keyed = keyed
        self.p = p
        self.elements: list[list] = []  # term lists, monic
        self.lead: list[tuple[int, Exponents]] = []
        self.alive: list[bool] = []
        # per component: [idx...] of single-term elements, then general ones
        self.mono_by_comp: list[list[int]] = [[] for _ in range(keyed.rank)]
        self.gen_by_comp: list[list[int]] = [[] for _ in range(keyed.rank)]

    def add(self, terms) -> int:
        idx = len(self.elements)
        terms = _monic_terms(terms, self.p)
        self.elements.append(terms)
        _, j, exps, _ = terms[0]
        self.lead.append((j, exps))
        self.alive.append(True)
        if len(terms) == 1:
            self.mono_by_comp[j].append(idx)
        else:
            self.gen_by_comp[j].append(idx)
        return idx

    def kill(self, idx: int):
        self.alive[idx] = False

    def find_divisor(self, comp: int, exps: Exponents, exclude: int = -1):
        for idx in self.mono_by_comp[comp]:
            if idx != exclude and self.alive[idx] and monomial_divides(
                self.lead[idx][1], exps
            ):
                return idx
        for idx in self.gen_by_comp[comp]:
            if idx != exclude and self.alive[idx] and monomial_divides(
                self.lead[idx][1], exps
            ):
                return idx
        return -1

    def reduce(self, work: dict, heap: list, exclude: int = -1):
        """Full normal form of the work dict; returns canonical term list."""
        p = self.p
        keyed = self.keyed
        out = []
        pop = heapq.heappop
        push = heapq.heappush
        while heap:
            key, comp, exps = pop(heap)
            c = work.get((comp, exps))
            if not c:
                continue
            ridx = self.find_divisor(comp, exps, exclude)
            if ridx < 0:
                out.append((key, comp, exps, c))
                del work[(comp, exps)]
                continue
            rterms = self.elements[ridx]
            _, _, rexps, _ = rterms[0]
            shift = tuple(map(lambda a, b: a - b, exps, rexps))
            del work[(comp, exps)]
            if len(rterms) == 1:
                continue
            mkey = keyed.mult_key(shift)
            for tkey, tj, texps, tc in rterms[1:]:
                target = (tj, tuple(map(add, texps, shift)))
                prev = work.get(target)
                if prev is None:
                    val = -c * tc % p
                    if val:
                        work[target] = val
                        push(heap, (tuple(map(add, tkey, mkey)), target[0], target[1]))
                else:
                    val = (prev - c * tc) % p
                    if val:
                        work[target] = val
                    else:
                        del work[target]
        return out

    def normal_form_terms(self, terms, exclude: int = -1):
        work = {}
        heap = []
        for key, j, exps, c in terms:
            work[(j, exps)] = c
            heap.append((key, j, exps))
        heapq.heapify(heap)
        return self.reduce(work, heap, exclude)

    def spoly_terms(self, i: int, j: int):
        """S-vector of two monic elements with equal leading component."""
        ti, tj = self.elements[i], self.elements[j]
        (_, ci, ei, _), (_, cj, ej, _) = ti[0], tj[0]
        lcm = monomial_lcm(ei, ej)
        si = tuple(map(lambda a, b: a - b, lcm, ei))
        sj = tuple(map(lambda a, b: a - b, lcm, ej))
        keyed = self.keyed
        p = self.p
        work: dict = {}
        for _, tc_, texps, tcoef in ti[1:]:
            target = (tc_, tuple(map(add, texps, si)))
            work[target] = (work.get(target, 0) + tcoef) % p
        for _, tc_, texps, tcoef in tj[1:]:
            target = (tc_, tuple(map(add, texps, sj)))
            work[target] = (work.get(target, 0) - tcoef) % p
        heap = []
        dead = [t for t, c in work.items() if c == 0]
        for t in dead:
            del work[t]
        for (jc, exps) in work:
            heap.append((keyed.term_key(jc, exps), jc, exps))
        heapq.heapify(heap)
        return work, heap


def _coprime(a: Exponents, b: Exponents) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _buchberger_engine(
    input_terms: list,
    keyed: _Keyed,
    p: int,
    max_basis: int,
    deadline: float | None = None,
) -> _Reducer:
    red = _Reducer(keyed, p)
    pairs: dict[tuple[int, int], Exponents] = {}
    pair_heap: list = []

    def push_pair(i: int, j: int, lcm: Exponents, comp: int):
        pairs[(i, j)] = lcm
        heapq.heappush(
            pair_heap, (sum(lcm), keyed.term_key(comp, lcm), i, j)
        )

    def add_element(terms):
        if len(red.elements) >= max_basis:
            raise ResourceLimit(
                "basis size cap exceeded", partial_basis_size=len(red.elements)
            )
        h = red.add(terms)
        comp_h, lt_h = red.lead[h]

        # candidate pairs with the new element, Gebauer-Moller filtered
        cand = [
            g
            for g in range(h)
            if red.alive[g] and red.lead[g][0] == comp_h
        ]
        lcms = {g: monomial_lcm(lt_h, red.lead[g][1]) for g in cand}
        kept: list[int] = []
        dropped = set()
        for g in cand:
            lg = lcms[g]
            coprime = red.keyed.rank == 1 and _coprime(lt_h, red.lead[g][1])
            if not coprime:
                strictly_better = False
                for g2 in cand:
                    if g2 == g or g2 in dropped:
                        continue
                    if monomial_divides(lcms[g2], lg) and lcms[g2] != lg:
                        strictly_better = True
                        break
                    if (
                        lcms[g2] == lg
                        and g2 in kept
                    ):
                        strictly_better = True
                        break
                if strictly_better:
                    dropped.add(g)
                    continue
            kept.append(g)
        # old-pair filtering
        for (i, j), lcm_ij in list(pairs.items()):
            if red.lead[i][0] != comp_h:
                continue
            if (
                monomial_divides(lt_h, lcm_ij)
                and monomial_lcm(red.lead[i][1], lt_h) != lcm_ij
                and monomial_lcm(red.lead[j][1], lt_h) != lcm_ij
            ):
                del pairs[(i, j)]
        # survivors excluding coprime-head pairs (ideal case only)
        for g in kept:
            if red.keyed.rank == 1 and _coprime(lt_h, red.lead[g][1]):
                continue
            push_pair(g, h, lcms[g], comp_h)
        # prune basis elements whose lead the new lead divides
        for g in range(h):
            if red.alive[g] and red.lead[g][0] == comp_h and monomial_divides(
                lt_h, red.lead[g][1]
            ):
                red.kill(g)

    for terms in input_terms:
        if not terms:
            continue
        r = red.normal_form_terms(terms)
        if r:
            add_element(r)

    ticks = 0
    while pair_heap:
        if deadline is not None:
            ticks += 1
            if ticks & 31 == 0 and time.monotonic() > deadline:
                raise ResourceLimit(
                    "time budget exceeded", partial_basis_size=len(red.elements)
                )
        _, _, i, j = heapq.heappop(pair_heap)
        if (i, j) not in pairs:
            continue
        del pairs[(i, j)]
        work, heap = red.spoly_terms(i, j)
        if not work:
            continue
        r = red.reduce(work, heap)
        if r:
            add_element(r)

    return red


def _reduced_from_engine(red: _Reducer) -> list:
    """Minimalize and tail-reduce the surviving elements."""
    order = sorted(
        (i for i in range(len(red.elements)) if red.alive[i]),
        key=lambda i: (red.keyed.term_key(red.lead[i][0], red.lead[i][1]), i),
    )
    minimal: list[int] = []
    for i in order:
        ci, ei = red.lead[i]
        if any(
            red.lead[k][0] == ci and monomial_divides(red.lead[k][1], ei)
            for k in minimal
        ):
            red.kill(i)
            continue
        minimal.append(i)
    final = []
    for i in minimal:
        final.append(red.normal_form_terms(red.elements[i], exclude=i))
    return final


def _as_elements(generators, rank: int | None):
    elems = []
    for g in generators:
        if isinstance(g, Polynomial):
            g = FreeElement((g,))
        elems.append(g)
    if elems:
        r = elems[0].rank
        for e in elems:
            if e.rank != r:
                raise RankMismatch("generators of mixed rank")
        if rank is not None and rank != r:
            raise RankMismatch("declared rank does not match generators")
        rank = r
    if rank is None:
        raise RankMismatch("rank required for an empty generator list")
    return elems, rank


def buchberger(
    generators,
    order: ModuleOrder | None = None,
    rank: int | None = None,
    max_basis: int = DEFAULT_MAX_BASIS,
    deadline: float | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule the generators span."""
    elems, rank = _as_elements(generators, rank)
    nonzero = [e for e in elems if not e.is_zero()]
    if not nonzero:
        ring = elems[0].ring if elems else None
        if ring is None:
            raise HilbertKunzError("cannot infer the ring from an empty input")
        return GroebnerBasis((), order or default_module_order(ring, rank), rank, ring)
    ring = nonzero[0].ring
    if order is None:
        order = default_module_order(ring, rank)
    elif order.base != ring.order:
        raise OrderMismatch("module order base differs from the ring order")
    keyed = _keyfuncs(order, ring, rank)
    inputs = [_element_terms(e, keyed) for e in nonzero]
    red = _buchberger_engine(inputs, keyed, ring.p, max_basis, deadline)
    final = _reduced_from_engine(red)
    final.sort(key=lambda terms: terms[0][0])
    elements = tuple(_terms_to_element(t, keyed) for t in final)
    return GroebnerBasis(elements, order, rank, ring)


def normal_form(f: FreeElement | Polynomial, G: GroebnerBasis):
    """Remainder of f modulo G; unique for a reduced basis."""
    wrap = isinstance(f, Polynomial)
    if wrap:
        f = FreeElement((f,))
    if f.rank != G.rank:
        raise RankMismatch(f"rank {f.rank} vs basis rank {G.rank}")
    if f.ring != G.ring:
        raise RingMismatch("element and basis over different rings")
    if G.order.base != f.ring.order:
        raise OrderMismatch("basis order does not match the ring order")
    keyed = _keyfuncs(G.order, G.ring, G.rank)
    red = _Reducer(keyed, G.ring.p)
    for e in G.elements:
        red.add(_element_terms(e, keyed))
    out = red.normal_form_terms(_element_terms(f, keyed))
    result = _terms_to_element(out, keyed) if out else FreeElement(
        tuple(G.ring.zero() for _ in range(G.rank))
    )
    return result.components[0] if wrap else result


def spairs_reduce_to_zero(G: GroebnerBasis) -> bool:
    """Test hook: verify the defining property of a Groebner basis."""
    keyed = _keyfuncs(G.order, G.ring, G.rank)
    red = _Reducer(keyed, G.ring.p)
    for e in G.elements:
        red.add(_element_terms(e, keyed))
    n = len(G.elements)
    for i in range(n):
        for j in range(i + 1, n):
            if red.lead[i][0] != red.lead[j][0]:
                continue
            work, heap = red.spoly_terms(i, j)
            if red.reduce(work, heap):
                return False
    return True


def syzygies(generators, order: ModuleOrder | None = None) -> list[FreeElement]:
    """Generators of the relation module among the given elements.

    Tags each generator g_i with a marker component e_i, computes a basis
    under a component-eliminating order, and keeps the elements whose
    original components all vanish.
    """
    elems, rank = _as_elements(generators, None)
    if not elems:
        return []
    ring = elems[0].ring
    k = len(elems)
    if order is None:
        order = default_module_order(ring, rank)
    big_rank = rank + k
    big_order = ModuleOrder(
        order.base, POSITION_OVER_TERM, tuple(range(big_rank))
    )
    zero = ring.zero()
    tagged = []
    for i, e in enumerate(elems):
        comps = list(e.components) + [zero] * k
        comps[rank + i] = ring.one()
        tagged.append(FreeElement(comps))
    G = buchberger(tagged, big_order, rank=big_rank)
    out = []
    for e in G.elements:
        if all(c.is_zero() for c in e.components[:rank]):
            out.append(FreeElement(e.components[rank:]))
    return out


# -- staircase combinatorics --------------------------------------------------


def _leads_by_component(G: GroebnerBasis) -> list[list[Exponents]]:
    by_comp: list[list[Exponents]] = [[] for _ in range(G.rank)]
    for comp, exps in G.leading_terms():
        by_comp[comp].append(exps)
    return by_comp


def _minimalize(monos: list[Exponents]) -> list[Exponents]:
    monos = sorted(set(monos), key=lambda e: (sum(e), e))
    out: list[Exponents] = []
    for m in monos:
        if not any(monomial_divides(o, m) for o in out):
            out.append(m)
    return out


def is_zero_dimensional(G: GroebnerBasis) -> bool:
    """Every (variable, component) needs a pure-power leading term."""
    v = G.ring.nvars
    for leads in _leads_by_component(G):
        have = set()
        for e in leads:
            support = [i for i, x in enumerate(e) if x > 0]
            if len(support) == 0:
                have.update(range(v))
            elif len(support) == 1:
                have.add(support[0])
        if len(have) < v:
            return False
    return True


def _box_and_others(leads: list[Exponents], v: int):
    box = [None] * v
    others = []
    for e in _minimalize(leads):
        support = [i for i, x in enumerate(e) if x > 0]
        if len(support) == 0:
            return None, None  # unit: component dies
        if len(support) == 1:
            i = support[0]
            if box[i] is None or e[i] < box[i]:
                box[i] = e[i]
        else:
            others.append(e)
    if any(b is None for b in box):
        raise NotZeroDimensional(
            "no pure-power leading term for some variable"
        )
    others = [e for e in others if all(x < b for x, b in zip(e, box))]
    return box, others


def _count_box(box, others, budget) -> int:
    """Monomials in the box below every generator, by corner splitting."""
    budget[0] -= 1
    if budget[0] < 0:
        raise ResourceLimit("standard-monomial counting budget exceeded")
    others = _minimalize(others)
    others = [e for e in others if all(x < b for x, b in zip(e, box))]
    if len(others) <= 8:
        # inclusion-exclusion over generator subsets
        total = 0
        n = len(others)
        for mask in range(1 << n):
            lcm = [0] * len(box)
            bits = 0
            m = mask
            i = 0
            while m:
                if m & 1:
                    bits += 1
                    e = others[i]
                    for t, x in enumerate(e):
                        if x > lcm[t]:
                            lcm[t] = x
                m >>= 1
                i += 1
            prod = 1
            for t, b in enumerate(box):
                width = b - lcm[t]
                if width <= 0:
                    prod = 0
                    break
                prod *= width
            total += -prod if bits & 1 else prod
        return total
    # pivot on the busiest variable at its median positive exponent
    v = len(box)
    best_var, best_hits = -1, -1
    for i in range(v):
        hits = sum(1 for e in others if e[i] > 0)
        if hits > best_hits:
            best_hits, best_var = hits, i
    exps = sorted(e[best_var] for e in others if e[best_var] > 0)
    t = exps[len(exps) // 2]
    if t >= box[best_var]:
        t = box[best_var] - 1
    if t < 1:
        t = 1
    # branch 1: add pure power x_best^t (tighten the box)
    box1 = list(box)
    box1[best_var] = t
    others1 = [e for e in others if e[best_var] < t]
    n1 = _count_box(box1, others1, budget)
    # branch 2: colon by x_best^t
    box2 = list(box)
    box2[best_var] = box[best_var] - t
    others2 = [
        tuple((x - t if i == best_var and x > t else (0 if i == best_var else x))
              for i, x in enumerate(e))
        for e in others
    ]
    n2 = _count_box(box2, others2, budget)
    return n1 + n2


def count_standard_monomials(G: GroebnerBasis) -> int:
    """Number of monomial-component pairs outside the leading-term module."""
    v = G.ring.nvars
    total = 0
    budget = [COUNT_NODE_LIMIT]
    for leads in _leads_by_component(G):
        box, others = _box_and_others(leads, v)
        if box is None:
            continue
        total += _count_box(box, others, budget)
    return total


def krull_dimension(G: GroebnerBasis) -> int:
    """Dimension of S/I from the leading-term ideal: the largest variable
    subset meeting the support of no leading term."""
    if G.rank != 1:
        raise RankMismatch("Krull dimension is defined here for the ideal case")
    v = G.ring.nvars
    if v > 16:
        raise TooManyVariables(f"{v} variables exceeds the subset-search cap")
    supports = set()
    for _, exps in G.leading_terms():
        mask = 0
        for i, x in enumerate(exps):
            if x > 0:
                mask |= 1 << i
        if mask == 0:
            return -1  # unit ideal: empty spectrum
        supports.add(mask)
    best = 0
    for u in range(1 << v):
        pc = bin(u).count("1")
        if pc <= best:
            continue
        if all(s & ~u for s in supports):
            best = pc
    return best

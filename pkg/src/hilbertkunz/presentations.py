"""Quotient rings, finitely presented modules, and Frobenius-power lengths.

A module is presented as S^rank / N where S = F_p[x_1..x_v] and N is spanned
by explicit relation vectors together with I_R times each free generator, so
the result is a module over R = S/I_R. Lengths of Frobenius quotients come
from counting standard monomials of a Groebner basis.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import (
    NotZeroDimensional,
    RankMismatch,
    RingMismatch,
    SemanticError,
)
from .groebner import (
    DEFAULT_MAX_BASIS,
    FreeElement,
    GroebnerBasis,
    buchberger,
    count_standard_monomials,
    default_module_order,
    is_zero_dimensional,
    krull_dimension,
    syzygies,
    unit_vector,
)
from .poly import (
    PolyRing,
    Polynomial,
    check_power_of_p,
    frobenius_power_poly,
    parse_polynomial,
    ring,
)


def _as_poly(f, S: PolyRing) -> Polynomial:
    if isinstance(f, Polynomial):
        if f.ring != S:
            raise RingMismatch("polynomial from a different ring")
        return f
    return parse_polynomial(str(f), S)


@dataclass(frozen=True)
class RingSpec:
    """R = F_p[variables]/(defining_ideal); an empty ideal gives S itself."""

    ring: PolyRing
    defining_ideal: tuple[Polynomial, ...] = ()
    declared_dim: int | None = None

    def __post_init__(self):
        for g in self.defining_ideal:
            if g.ring != self.ring:
                raise RingMismatch("ideal generator from a different ring")

    @property
    def p(self) -> int:
        return self.ring.p

    def maximal_ideal(self) -> tuple[Polynomial, ...]:
        return tuple(self.ring.variable(i) for i in range(self.ring.nvars))

    def dimension(self) -> int:
        """Krull dimension of R; validates declared_dim on first use."""
        if not self.defining_ideal:
            d = self.ring.nvars
        else:
            G = buchberger(list(self.defining_ideal), rank=1)
            d = krull_dimension(G)
        if self.declared_dim is not None and self.declared_dim != d:
            raise SemanticError(
                f"declared dimension {self.declared_dim} but computed {d}"
            )
        return d


def ring_spec(variables: str, p: int, ideal=(), order: str = "grevlex") -> RingSpec:
    S = ring(variables, p, order)
    return RingSpec(S, tuple(_as_poly(g, S) for g in ideal))


@dataclass(frozen=True)
class IdealSpec:
    """An ideal of R, given by generators in S.

    Primary-ness to the maximal ideal is not checked here; the length
    computation raises NotZeroDimensional when it fails.
    """

    ringspec: RingSpec
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        for g in self.generators:
            if g.ring != self.ringspec.ring:
                raise RingMismatch("generator from a different ring")

    def frobenius_power(self, q: int) -> "IdealSpec":
        check_power_of_p(q, self.ringspec.p)
        return IdealSpec(
            self.ringspec,
            tuple(frobenius_power_poly(g, q) for g in self.generators),
        )


def ideal_spec(rs: RingSpec, generators) -> IdealSpec:
    return IdealSpec(rs, tuple(_as_poly(g, rs.ring) for g in generators))


def maximal_ideal(rs: RingSpec) -> IdealSpec:
    return IdealSpec(rs, rs.maximal_ideal())


def frobenius_power_ideal(ideal: IdealSpec, q: int) -> IdealSpec:
    """Ideal generated by the q-th powers of the given generators.

    For q a power of p this generates I^[q] regardless of the chosen
    generating set.
    """
    return ideal.frobenius_power(q)


@dataclass(frozen=True)
class ModulePresentation:
    """M = S^rank / (relations), presenting a module over R = S/I_R.

    Construction appends defining_ideal * e_j for every component j, so the
    stored relations always present an R-module. declared_generic_rank is
    the user's claim for the rank of M over R (used by delta/tau analysis);
    it is recorded, not verified.
    """

    ringspec: RingSpec
    rank: int
    relations: tuple[FreeElement, ...] = ()
    declared_generic_rank: int | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise RankMismatch("presentation rank must be at least 1")
        for r in self.relations:
            if r.ring != self.ringspec.ring:
                raise RingMismatch("relation from a different ring")
            if r.rank != self.rank:
                raise RankMismatch(
                    f"relation rank {r.rank} does not match presentation rank {self.rank}"
                )
        if (
            self.declared_generic_rank is not None
            and not 0 <= self.declared_generic_rank <= self.rank
        ):
            raise RankMismatch("declared generic rank must lie in 0..rank")
        S = self.ringspec.ring
        have = set(self.relations)
        extra = []
        for j in range(self.rank):
            for g in self.ringspec.defining_ideal:
                v = unit_vector(S, self.rank, j, g)
                if v not in have:
                    extra.append(v)
                    have.add(v)
        if extra:
            object.__setattr__(self, "relations", self.relations + tuple(extra))


def free_module(rs: RingSpec, rank: int = 1) -> ModulePresentation:
    return ModulePresentation(rs, rank, (), rank)


def cyclic_module(rs: RingSpec, generators) -> ModulePresentation:
    """R/(generators) as an R-module."""
    S = rs.ring
    rels = tuple(FreeElement((_as_poly(g, S),)) for g in generators)
    return ModulePresentation(rs, 1, rels)


def module_presentation(
    rs: RingSpec, rank: int, relations, declared_generic_rank: int | None = None
) -> ModulePresentation:
    S = rs.ring
    rels = []
    for r in relations:
        if isinstance(r, FreeElement):
            rels.append(r)
        else:
            rels.append(FreeElement(tuple(_as_poly(c, S) for c in r)))
    return ModulePresentation(rs, rank, tuple(rels), declared_generic_rank)


@dataclass(frozen=True)
class SubmoduleSpec:
    """A submodule of an ambient module, spanned by elements of its cover."""

    ambient: ModulePresentation
    generators: tuple[FreeElement, ...]

    def __post_init__(self):
        if not self.generators:
            raise RankMismatch("a submodule needs at least one generator")
        for g in self.generators:
            if g.ring != self.ambient.ringspec.ring:
                raise RingMismatch("generator from a different ring")
            if g.rank != self.ambient.rank:
                raise RankMismatch("generator rank does not match the ambient")

    def to_presentation(self, declared_generic_rank: int | None = None):
        return present_submodule(
            self.ambient, list(self.generators), declared_generic_rank
        )


def _cover_elements(module: ModulePresentation, generators) -> list[FreeElement]:
    """Coerce strings, polynomials, or component sequences to elements of
    the module's free cover."""
    S = module.ringspec.ring
    gens: list[FreeElement] = []
    for g in generators:
        if isinstance(g, FreeElement):
            pass
        elif isinstance(g, (Polynomial, str)):
            g = FreeElement((_as_poly(g, S),))
        else:
            g = FreeElement(tuple(_as_poly(c, S) for c in g))
        if g.rank != module.rank:
            raise RankMismatch(
                f"generator rank {g.rank} does not match the cover rank "
                f"{module.rank}"
            )
        if g.ring != S:
            raise RingMismatch("generator from a different ring")
        gens.append(g)
    return gens


def submodule_spec(ambient, generators) -> SubmoduleSpec:
    if isinstance(ambient, RingSpec):
        ambient = free_module(ambient, 1)
    return SubmoduleSpec(ambient, tuple(_cover_elements(ambient, generators)))


def present_submodule(
    module: ModulePresentation,
    generators,
    declared_generic_rank: int | None = None,
) -> ModulePresentation:
    """Presentation of the submodule of M spanned by the given elements.

    The kernel of S^s -> M, e_i -> g_i, is the projection to the first s
    coordinates of the syzygies of (g_1..g_s, relations of M).
    """
    gens = _cover_elements(module, generators)
    s = len(gens)
    if s == 0:
        raise RankMismatch("a submodule needs at least one generator")
    combined = gens + list(module.relations)
    rels = []
    for sy in syzygies(combined):
        head = sy.components[:s]
        if any(not c.is_zero() for c in head):
            rels.append(FreeElement(head))
    return ModulePresentation(
        module.ringspec, s, tuple(rels), declared_generic_rank
    )


def quotient_presentation(module: ModulePresentation, generators) -> ModulePresentation:
    """M / (submodule spanned by the given elements of S^rank)."""
    extra = _cover_elements(module, generators)
    return ModulePresentation(
        module.ringspec, module.rank, module.relations + tuple(extra)
    )


def direct_sum(m1: ModulePresentation, m2: ModulePresentation) -> ModulePresentation:
    if m1.ringspec != m2.ringspec:
        raise RingMismatch("direct sum needs a common ring")
    S = m1.ringspec.ring
    zero = S.zero()
    rank = m1.rank + m2.rank
    rels = []
    for r in m1.relations:
        rels.append(FreeElement(r.components + (zero,) * m2.rank))
    for r in m2.relations:
        rels.append(FreeElement((zero,) * m1.rank + r.components))
    generic = None
    if m1.declared_generic_rank is not None and m2.declared_generic_rank is not None:
        generic = m1.declared_generic_rank + m2.declared_generic_rank
    return ModulePresentation(m1.ringspec, rank, tuple(rels), generic)


def frobenius_relations(
    module: ModulePresentation, ideal: IdealSpec, n: int
) -> list[FreeElement]:
    """Relations of M/I^[p^n]M over S: the presentation relations plus the
    q-th powers of the ideal generators in every component."""
    if ideal.ringspec != module.ringspec:
        raise RingMismatch("ideal and module live over different rings")
    if n < 0:
        raise SemanticError("Frobenius exponent must be nonnegative")
    S = module.ringspec.ring
    q = S.p**n
    gens = list(module.relations)
    frob = [frobenius_power_poly(f, q) for f in ideal.generators]
    for j in range(module.rank):
        for f in frob:
            gens.append(unit_vector(S, module.rank, j, f))
    return gens


def presentation_basis(
    module: ModulePresentation,
    ideal: IdealSpec,
    n: int,
    max_basis: int = DEFAULT_MAX_BASIS,
    max_seconds: float | None = None,
) -> GroebnerBasis:
    """Groebner basis of relations(M) + I^[p^n] acting on every generator."""
    S = module.ringspec.ring
    gens = frobenius_relations(module, ideal, n)
    order = default_module_order(S, module.rank)
    deadline = time.monotonic() + max_seconds if max_seconds is not None else None
    return buchberger(
        gens, order, rank=module.rank, max_basis=max_basis, deadline=deadline
    )


def length_mod_frobenius(
    module: ModulePresentation,
    ideal: IdealSpec,
    n: int,
    max_basis: int = DEFAULT_MAX_BASIS,
    max_seconds: float | None = None,
) -> int:
    """Length of M / I^[p^n] M: the value of the length function at n."""
    G = presentation_basis(module, ideal, n, max_basis, max_seconds)
    if not is_zero_dimensional(G):
        raise NotZeroDimensional(
            "I^[q]M does not have finite length; the ideal is not primary "
            "to the maximal ideal on this module"
        )
    return count_standard_monomials(G)

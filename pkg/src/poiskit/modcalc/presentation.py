"""Finitely generated submodules of R^m and the operations on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..polyalg.polynomial import Polynomial
from .engine import ModuleEngine
from .verdict import Verdict

SATURATION_CAP = 50


class SubmodulePresentation:
    """A submodule of ``R^rank`` over ``Q[variables]`` given by generators.

    Immutable; the Groebner engine is built once on first use and reused
    (recomputation would be idempotent, the basis is deterministic).
    Ideals are the rank-1 case.
    """

    def __init__(self, variables: Sequence[str], rank: int,
                 generators: Sequence[Sequence[Polynomial]],
                 order: str = "position-over-term/degrevlex"):
        self.variables = tuple(variables)
        self.rank = rank
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != rank:
                raise ValueError(f"generator of length {len(g)} in rank-{rank} module")
            if any(p.variables != self.variables for p in g):
                raise ValueError("generator entry on a different chart")
            if any(not p.is_zero for p in g):
                gens.append(g)
        self.generators = tuple(gens)
        self.order = order
        self._engine: ModuleEngine | None = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def ideal(cls, variables: Sequence[str], polys: Sequence[Polynomial]) -> "SubmodulePresentation":
        return cls(variables, 1, [(p,) for p in polys])

    @classmethod
    def zero(cls, variables: Sequence[str], rank: int) -> "SubmodulePresentation":
        return cls(variables, rank, [])

    @classmethod
    def full(cls, variables: Sequence[str], rank: int) -> "SubmodulePresentation":
        variables = tuple(variables)
        one = Polynomial.one(variables)
        zero = Polynomial.zero(variables)
        gens = [[one if i == j else zero for j in range(rank)] for i in range(rank)]
        return cls(variables, rank, gens)

    @property
    def engine(self) -> ModuleEngine:
        if self._engine is None:
            self._engine = ModuleEngine(self.variables, self.rank, self.generators)
        return self._engine

    @property
    def is_zero_module(self) -> bool:
        return not self.generators

    # -- core queries -----------------------------------------------------------

    def groebner_basis(self) -> list[tuple[Polynomial, ...]]:
        """Reduced basis (deterministic for fixed order and generators)."""
        return [tuple(v) for v in self.engine.groebner_vectors()]

    def normal_form(self, element: Sequence[Polynomial]) -> list[Polynomial]:
        return self.engine.reduce_only(list(element))

    def contains(self, element: Sequence[Polynomial]) -> Verdict:
        """Membership with an exact certificate on yes, the nonzero normal
        form as witness on no."""
        element = list(element)
        rem, cert = self.engine.normal_form(element)
        if all(p.is_zero for p in rem):
            recombined = [Polynomial.zero(self.variables) for _ in range(self.rank)]
            for q, gen in zip(cert, self.generators):
                for i in range(self.rank):
                    recombined[i] = recombined[i] + q * gen[i]
            if any(recombined[i] != element[i] for i in range(self.rank)):
                raise AssertionError("membership certificate failed to recombine")
            return Verdict.yes(certificate={"coefficients": cert})
        return Verdict.no(witness={"normal_form": rem})

    def contains_poly(self, p: Polynomial) -> Verdict:
        if self.rank != 1:
            raise ValueError("contains_poly requires an ideal")
        return self.contains([p])

    def is_submodule_of(self, other: "SubmodulePresentation") -> Verdict:
        """Generator-wise membership; certificates collected per generator."""
        certs = []
        for g in self.generators:
            v = other.contains(g)
            if not v.is_yes:
                return Verdict.no(witness={"generator": list(g), "normal_form": v.witness})
            certs.append(v.certificate)
        return Verdict.yes(certificate={"memberships": certs})

    def equals_module(self, other: "SubmodulePresentation") -> Verdict:
        """Two-sided membership."""
        fwd = self.is_submodule_of(other)
        if not fwd.is_yes:
            return Verdict.no(witness={"direction": "left-in-right", **fwd.witness})
        bwd = other.is_submodule_of(self)
        if not bwd.is_yes:
            return Verdict.no(witness={"direction": "right-in-left", **bwd.witness})
        return Verdict.yes(certificate={"forward": fwd.certificate, "backward": bwd.certificate})

    def syzygy_module(self) -> "SubmodulePresentation":
        """All polynomial relations among the generators, in R^len(generators)."""
        return SubmodulePresentation(self.variables, len(self.generators),
                                     self.engine.syzygy_vectors())

    def verify_basis(self) -> bool:
        """Two-sided check that the cached basis generates the same module."""
        basis = self.groebner_basis()
        as_module = SubmodulePresentation(self.variables, self.rank, basis)
        return self.equals_module(as_module).is_yes

    def __repr__(self):
        return (f"SubmodulePresentation(rank={self.rank}, "
                f"generators={len(self.generators)}, vars={self.variables})")


# -- spec-level operations -------------------------------------------------------


def groebner_basis(module: SubmodulePresentation) -> SubmodulePresentation:
    """Presentation regenerated by its reduced Groebner basis."""
    out = SubmodulePresentation(module.variables, module.rank, module.groebner_basis(),
                                order=module.order)
    return out


def syzygies(matrix_rows: Sequence[Sequence[Polynomial]],
             variables: Sequence[str] | None = None) -> SubmodulePresentation:
    """Syzygies of the columns of an n-by-m polynomial matrix: the submodule
    of R^m of vectors s with ``matrix . s = 0``."""
    rows = [list(r) for r in matrix_rows]
    if not rows:
        raise ValueError("empty matrix")
    if variables is None:
        variables = rows[0][0].variables
    m = len(rows[0])
    columns = [[rows[i][j] for i in range(len(rows))] for j in range(m)]
    engine = ModuleEngine(tuple(variables), len(rows), columns)
    return SubmodulePresentation(variables, m, engine.syzygy_vectors())


def module_membership(element: Sequence[Polynomial], module: SubmodulePresentation) -> Verdict:
    return module.contains(list(element))


def colon_by_poly(module: SubmodulePresentation, f: Polynomial) -> SubmodulePresentation:
    """``module : f`` = {v : f v in module}."""
    if f.is_zero:
        raise ValueError("colon by the zero polynomial")
    r = module.rank
    variables = module.variables
    zero = Polynomial.zero(variables)
    columns: list[list[Polynomial]] = []
    for i in range(r):
        col = [zero] * r
        col[i] = f
        columns.append(col)
    columns.extend(list(g) for g in module.generators)
    engine = ModuleEngine(variables, r, columns)
    gens = []
    for s in engine.syzygy_vectors():
        v = s[:r]
        if any(not p.is_zero for p in v):
            gens.append(v)
    return SubmodulePresentation(variables, r, gens)


def intersect(a: SubmodulePresentation, b: SubmodulePresentation) -> SubmodulePresentation:
    if a.rank != b.rank or a.variables != b.variables:
        raise ValueError("intersection needs modules in the same ambient")
    columns = [list(g) for g in a.generators] + [list(g) for g in b.generators]
    if not a.generators or not b.generators:
        return SubmodulePresentation.zero(a.variables, a.rank)
    engine = ModuleEngine(a.variables, a.rank, columns)
    na = len(a.generators)
    gens = []
    for s in engine.syzygy_vectors():
        v = [Polynomial.zero(a.variables) for _ in range(a.rank)]
        nonzero = False
        for i in range(na):
            if s[i].is_zero:
                continue
            nonzero = True
            for k in range(a.rank):
                v[k] = v[k] + s[i] * a.generators[i][k]
        if nonzero and any(not p.is_zero for p in v):
            gens.append(v)
    return SubmodulePresentation(a.variables, a.rank, gens)


def colon_by_ideal(module: SubmodulePresentation, ideal_gens: Sequence[Polynomial]) -> SubmodulePresentation:
    gens = [f for f in ideal_gens if not f.is_zero]
    if not gens:
        raise ValueError("colon by the zero ideal")
    acc: SubmodulePresentation | None = None
    for f in gens:
        c = colon_by_poly(module, f)
        acc = c if acc is None else intersect(acc, c)
    return acc


@dataclass
class SaturationResult:
    module: SubmodulePresentation
    exponent: int
    stabilized: bool


def saturate(module: SubmodulePresentation, ideal_gens: Sequence[Polynomial],
             cap: int = SATURATION_CAP) -> SaturationResult:
    """``module : ideal^infinity`` by iterated colon, with the stabilization
    exponent; ``stabilized=False`` when the iteration cap is hit."""
    current = module
    for k in range(cap):
        nxt = colon_by_ideal(current, ideal_gens)
        if nxt.is_submodule_of(current).is_yes:
            return SaturationResult(current, k, True)
        current = nxt
    return SaturationResult(current, cap, False)

"""Poisson-specific analysis on a coordinate chart.

Builds on the exact calculus of :mod:`poiskit.polyalg` and the module
machinery of :mod:`poiskit.modcalc`: Jacobi verification, rank data of the
bivector, Casimirs, the kernel module of covectors annihilated by the sharp
map, the constant-rank decision with construction of the associated
distribution, linear structures from Lie algebra data, and fiber dimensions
of foliation modules.

The kernel module is computed over polynomials while the geometric statements
are about smooth objects; this gap is a documented assumption, validated on
every built-in example, and flagged in reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

from ._kernel import QQ, to_qq
from .polyalg import (
    DifferentialForm,
    MultivectorField,
    Polynomial,
    lie_derivative,
    pair,
    schouten_bracket,
    wedge,
    wedge_power,
)
from .modcalc import (
    REAL,
    RankProfile,
    SubmodulePresentation,
    Verdict,
    rank_profile,
    saturate,
    syzygies,
    variety_emptiness,
)
from .modcalc.linalg import qq_nullspace, qq_rank, span_equal, sparse_nullspace

__all__ = [
    "PoissonStructure",
    "ZeroBivectorError",
    "TopPowerData",
    "GerminalIsotropy",
    "DistributionPresentation",
    "FoliationModule",
    "LinearPoissonData",
    "check_jacobi",
    "top_power",
    "koszul_bracket",
    "casimir_test",
    "casimir_search",
    "germinal_isotropy",
    "almost_regular_decide",
    "verify_distribution",
    "linear_bivector",
    "lie_jacobi_defect",
    "linear_poisson",
    "foliation_module",
    "foliation_inclusion",
]

SMOOTHNESS_NOTE = ("kernel modules are computed over polynomials; agreement with the "
                   "smooth kernel sheaf is an assumption validated on the example suite")
DENSITY_RATIONALE = ("the zero set of a nonzero polynomial has empty interior, so the "
                     "maximal-rank locus of a nonzero polynomial bivector is dense")


class ZeroBivectorError(ValueError):
    """Raised by operations that need a nonzero bivector."""


def check_jacobi(bivector: MultivectorField) -> Verdict:
    """Yes iff ``[pi, pi] = 0`` exactly; the witness is the first nonzero
    trivector coefficient."""
    if bivector.grade != 2:
        raise ValueError("check_jacobi needs a bivector")
    bracket = schouten_bracket(bivector, bivector)
    if bracket.is_zero:
        return Verdict.yes(certificate={"identity": "[pi,pi] = 0"})
    idx = min(bracket.components)
    return Verdict.no(witness={"indices": idx, "coefficient": bracket.components[idx]})


class PoissonStructure:
    """A polynomial bivector on a chart with its rank data cached eagerly.

    ``k`` is the largest integer with ``wedge^k pi != 0``; the regular-locus
    ideal is generated by the coefficients of ``wedge^k pi``. Constructors
    verify Jacobi unless :meth:`unchecked` is used (``jacobi`` records which).
    """

    def __init__(self, bivector: MultivectorField, *, _verify: bool = True):
        if bivector.grade != 2:
            raise ValueError("a Poisson structure is a bivector")
        self.bivector = bivector
        self.variables = bivector.variables
        if _verify:
            verdict = check_jacobi(bivector)
            if not verdict.is_yes:
                raise ValueError(f"Jacobi identity fails: {verdict.witness}")
            self.jacobi: Verdict | None = verdict
        else:
            self.jacobi = None
        n = len(self.variables)
        k = 0
        power = wedge_power(bivector, 0)
        while 2 * (k + 1) <= n:
            nxt = wedge(power, bivector)
            if nxt.is_zero:
                break
            power, k = nxt, k + 1
        self.k = k
        self.top = power
        self.regular_ideal: list[Polynomial] = sorted(
            power.components.values(), key=str) if k > 0 else [Polynomial.one(self.variables)]

    @classmethod
    def from_components(cls, variables: Sequence[str], components, *, verify: bool = True) -> "PoissonStructure":
        """Components ``{(i, j): coeff}`` with i < j; strings are parsed."""
        parsed = {}
        for (i, j), c in dict(components).items():
            poly = c if isinstance(c, Polynomial) else Polynomial.parse(variables, str(c))
            parsed[(i, j)] = poly
        return cls(MultivectorField.bivector(variables, parsed), _verify=verify)

    @classmethod
    def unchecked(cls, bivector: MultivectorField) -> "PoissonStructure":
        """Skip Jacobi verification (exploratory inputs); flagged in reports."""
        return cls(bivector, _verify=False)

    @property
    def is_zero(self) -> bool:
        return self.bivector.is_zero

    def sharp(self, alpha: DifferentialForm) -> MultivectorField:
        return self.bivector.sharp(alpha)

    def hamiltonian_field(self, f: Polynomial) -> MultivectorField:
        return self.sharp(DifferentialForm.d_of(f))

    def pi_matrix(self) -> list[list[Polynomial]]:
        return self.bivector.component_matrix()

    def columns_module(self) -> SubmodulePresentation:
        """Module generated by the images of the coordinate differentials."""
        cols = self.bivector.columns()
        return SubmodulePresentation(self.variables, len(self.variables), cols)

    def __repr__(self):
        return f"PoissonStructure({self.bivector}, k={self.k})"


@dataclass
class TopPowerData:
    k: int
    top: MultivectorField
    coefficient_ideal: list[Polynomial]
    density: Verdict


def top_power(structure: PoissonStructure) -> TopPowerData:
    """Rank data of the bivector; density of the maximal-rank locus is
    certified structurally, not sampled."""
    if structure.is_zero:
        raise ZeroBivectorError("zero bivector: k undefined")
    return TopPowerData(
        k=structure.k,
        top=structure.top,
        coefficient_ideal=structure.regular_ideal,
        density=Verdict.yes(certificate={"rationale": DENSITY_RATIONALE}),
    )


def koszul_bracket(alpha: DifferentialForm, beta: DifferentialForm,
                   structure: PoissonStructure | MultivectorField) -> DifferentialForm:
    """Cotangent-algebroid bracket
    ``[a, b] = L_{#a} b - L_{#b} a - d pi(a, b)``; satisfies
    ``[df, dg] = d{f, g}``."""
    bivector = structure.bivector if isinstance(structure, PoissonStructure) else structure
    if alpha.grade != 1 or beta.grade != 1:
        raise ValueError("koszul_bracket needs grade-1 forms")
    xa = bivector.sharp(alpha)
    xb = bivector.sharp(beta)
    inner = bivector.pairing(alpha, beta)
    return lie_derivative(xa, beta) - lie_derivative(xb, alpha) - DifferentialForm.d_of(inner)


def casimir_test(structure: PoissonStructure, f: Polynomial) -> Verdict:
    """Yes iff ``sharp(df) = 0`` identically."""
    ham = structure.hamiltonian_field(f)
    if ham.is_zero:
        return Verdict.yes(certificate={"identity": "sharp(df) = 0"})
    idx = min(ham.components)
    return Verdict.no(witness={"component": idx[0], "coefficient": ham.components[idx]})


def _monomials_up_to(variables: Sequence[str], degree: int) -> list[tuple[int, ...]]:
    n = len(variables)
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return sorted(set(out))


def casimir_search(structure: PoissonStructure, max_degree: int) -> list[Polynomial]:
    """Basis of the space of polynomial Casimirs of degree <= max_degree,
    found by an exact linear solve on the coefficients of ``sharp(df) = 0``."""
    variables = structure.variables
    monos = _monomials_up_to(variables, max_degree)
    mat = structure.pi_matrix()
    n = len(variables)
    rows: dict[tuple, dict[int, object]] = {}
    for col, expo in enumerate(monos):
        mono_poly = Polynomial(variables, {expo: 1})
        dmono = DifferentialForm.d_of(mono_poly)
        ham = structure.bivector.sharp(dmono)
        for (i,), poly in ham.components.items():
            for e, c in poly.terms.items():
                rows.setdefault((i, e), {})[col] = c
    row_list = [rows[key] for key in sorted(rows)]
    kernel = sparse_nullspace(row_list, len(monos))
    basis = []
    for vec in kernel:
        terms = {monos[i]: c for i, c in enumerate(vec) if c}
        basis.append(Polynomial(variables, terms))
    basis.sort(key=lambda p: (p.total_degree(), str(p)))
    return basis


@dataclass
class GerminalIsotropy:
    """The kernel module {alpha : sharp(alpha) = 0} with its rank data.

    Evaluation at a point gives a subspace of the pointwise kernel; the
    generic dimension is ``n - 2k``.
    """

    module: SubmodulePresentation
    generic_dimension: int
    profile: RankProfile

    @property
    def drop_ideal(self) -> list[Polynomial]:
        return self.profile.drop_ideal()

    def dim_at(self, point: Sequence) -> int:
        if not self.module.generators:
            return 0
        return self.profile.rank_at(point)

    def generator_forms(self) -> list[DifferentialForm]:
        return [DifferentialForm.from_coefficients(self.module.variables, g)
                for g in self.module.generators]


def germinal_isotropy(structure: PoissonStructure) -> GerminalIsotropy:
    """Kernel of the sharp map as a polynomial module (left kernel of the
    component matrix, computed by syzygies)."""
    variables = structure.variables
    n = len(variables)
    if structure.is_zero:
        module = SubmodulePresentation.full(variables, n)
        profile = rank_profile([[g[i] for g in module.generators] for i in range(n)], variables)
        return GerminalIsotropy(module, n, profile)
    module = syzygies(structure.pi_matrix(), variables)
    for g in module.generators:
        image = structure.sharp(DifferentialForm.from_coefficients(variables, g))
        if not image.is_zero:
            raise AssertionError("kernel generator not annihilated by sharp")
    expected = n - 2 * structure.k
    if module.generators:
        matrix = [[g[i] for g in module.generators] for i in range(n)]
        profile = rank_profile(matrix, variables)
    else:
        profile = rank_profile([[] for _ in range(n)], variables)
    if profile.generic_rank != expected:
        raise AssertionError(
            f"kernel module has generic rank {profile.generic_rank}, expected {expected}")
    return GerminalIsotropy(module, expected, profile)


@dataclass
class DistributionPresentation:
    """Polynomial generators of a candidate constant-rank distribution."""

    module: SubmodulePresentation
    rank: int
    provenance: dict = field(default_factory=dict)

    @property
    def generators(self):
        return self.module.generators

    def generator_matrix(self) -> list[list[Polynomial]]:
        n = self.module.rank
        return [[g[i] for g in self.module.generators] for i in range(n)]


def _annihilator_module(iso: GerminalIsotropy, variables, n: int) -> SubmodulePresentation:
    """Vector fields paired to zero by every kernel generator."""
    if not iso.module.generators:
        return SubmodulePresentation.full(variables, n)
    rows = [list(g) for g in iso.module.generators]
    return syzygies(rows, variables)


def almost_regular_decide(structure: PoissonStructure, *, seed: int = 0,
                          samples: int = 10000) -> Verdict:
    """Constant-rank decision for the kernel module.

    Yes: the drop ideal of the kernel generator matrix is certified real-empty;
    the distribution is built both as the saturation of the image module by
    the regular-locus ideal and as the annihilator of the kernel module, and
    the two presentations are checked equal. No: a real witness point where
    the kernel dimension jumps. Inconclusive propagates from the emptiness
    certificate.
    """
    variables = structure.variables
    n = len(variables)
    if structure.is_zero:
        # degenerate branch: the zero bivector is projective of rank 0
        dist = DistributionPresentation(SubmodulePresentation.zero(variables, n), 0,
                                        provenance={"degenerate": "zero bivector"})
        return Verdict.yes(certificate={"degenerate": "zero bivector"}, distribution=dist)
    iso = germinal_isotropy(structure)
    drop = iso.drop_ideal
    emptiness = variety_emptiness(drop, REAL, seed=seed, samples=samples)
    if emptiness.is_inconclusive:
        return Verdict.inconclusive(
            "constant-rank test unresolved: " + (emptiness.reason or ""),
            unresolved_ideal=[str(p) for p in drop], isotropy=iso)
    if emptiness.is_no:
        witness = emptiness.witness["point"]
        dims = {"at_witness": iso.dim_at(witness), "generic": iso.generic_dimension}
        return Verdict.no(witness=witness, certificate=None, dims=dims, isotropy=iso)

    saturation = saturate(structure.columns_module(), structure.regular_ideal)
    if not saturation.stabilized:
        return Verdict.inconclusive("saturation did not stabilize", isotropy=iso)
    annihilator = _annihilator_module(iso, variables, n)
    equality = saturation.module.equals_module(annihilator)
    if not equality.is_yes:
        return Verdict.inconclusive(
            "saturation and annihilator presentations disagree",
            saturation=saturation.module, annihilator=annihilator, isotropy=iso)
    dist = DistributionPresentation(
        annihilator, 2 * structure.k,
        provenance={
            "constant_rank_certificate": emptiness,
            "saturation_exponent": saturation.exponent,
            "presentations_equal": equality,
        })
    return Verdict.yes(certificate={"drop_ideal_empty": emptiness.certificate},
                       distribution=dist, isotropy=iso)


def verify_distribution(dist: DistributionPresentation, structure: PoissonStructure,
                        *, seed: int = 0) -> Verdict:
    """Involutivity, invariance (columns of pi are sections), and pointwise
    rank ``2k`` everywhere."""
    variables = structure.variables
    module = dist.module
    gens = [MultivectorField.from_coefficients(variables, g) for g in module.generators]

    involutive: Verdict = Verdict.yes()
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            bracket = schouten_bracket(gens[i], gens[j])
            member = module.contains(bracket.coefficients())
            if not member.is_yes:
                involutive = Verdict.no(witness={"pair": (i, j),
                                                 "bracket": [str(p) for p in bracket.coefficients()]})
                break
        if involutive.is_no:
            break

    poisson_cols: Verdict = Verdict.yes()
    for col in structure.bivector.columns():
        member = module.contains(col)
        if not member.is_yes:
            poisson_cols = Verdict.no(witness={"column": [str(p) for p in col]})
            break

    if module.generators:
        profile = rank_profile(dist.generator_matrix(), variables)
        if profile.generic_rank != dist.rank:
            constant_rank: Verdict = Verdict.no(
                witness={"generic_rank": profile.generic_rank, "expected": dist.rank})
        else:
            emptiness = variety_emptiness(profile.drop_ideal(), REAL, seed=seed)
            if emptiness.is_yes:
                constant_rank = Verdict.yes(certificate=emptiness.certificate)
            elif emptiness.is_no:
                constant_rank = Verdict.no(witness=emptiness.witness)
            else:
                constant_rank = Verdict.inconclusive(
                    emptiness.reason or "rank drop locus unresolved",
                    unresolved_ideal=[str(p) for p in profile.drop_ideal()])
    else:
        constant_rank = Verdict.yes() if dist.rank == 0 else Verdict.no(
            witness={"generic_rank": 0, "expected": dist.rank})

    checks = {"involutive": involutive, "poisson_columns": poisson_cols,
              "constant_rank": constant_rank}
    if all(v.is_yes for v in checks.values()):
        return Verdict.yes(certificate={k: v.to_json() for k, v in checks.items()}, **checks)
    if any(v.is_no for v in checks.values()):
        bad = {k: v for k, v in checks.items() if v.is_no}
        return Verdict.no(witness={k: v.witness for k, v in bad.items()}, **checks)
    return Verdict.inconclusive("distribution checks unresolved", **checks)


# -- linear Poisson structures ---------------------------------------------------


def _normalize_constants(constants) -> list[list[list]]:
    c = [[[to_qq(v) for v in row] for row in plane] for plane in constants]
    n = len(c)
    for i in range(n):
        if len(c[i]) != n or any(len(c[i][j]) != n for j in range(n)):
            raise ValueError("structure constants must be an n x n x n array")
    return c


def lie_jacobi_defect(constants) -> list[tuple]:
    """Direct check of antisymmetry and the Lie-Jacobi identity on structure
    constants; returns the offending index tuples (empty = a Lie algebra).

    This is the independent route used to cross-check ``check_jacobi`` on the
    associated linear bivector.
    """
    c = _normalize_constants(constants)
    n = len(c)
    bad = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    bad.append(("antisymmetry", i, j, k))
    for i, j, k in combinations_with_replacement(range(n), 3):
        for l in range(n):
            total = QQ(0)
            for m in range(n):
                total += (c[i][j][m] * c[m][k][l]
                          + c[j][k][m] * c[m][i][l]
                          + c[k][i][m] * c[m][j][l])
            if total:
                bad.append(("jacobi", i, j, k, l))
    return bad


def linear_bivector(constants, variables: Sequence[str] | None = None) -> MultivectorField:
    """Linear bivector ``{x_i, x_j} = sum_k c^k_ij x_k`` on the dual chart
    (no Lie-Jacobi gate; see :func:`linear_poisson` for the gated builder)."""
    c = _normalize_constants(constants)
    n = len(c)
    if variables is None:
        variables = tuple(f"x{i+1}" for i in range(n))
    variables = tuple(variables)
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            terms = {}
            for k in range(n):
                if c[i][j][k]:
                    e = [0] * n
                    e[k] = 1
                    terms[tuple(e)] = c[i][j][k]
            if terms:
                comps[(i, j)] = Polynomial(variables, terms)
    return MultivectorField.bivector(variables, comps)


@dataclass
class LinearPoissonData:
    structure: PoissonStructure
    center_basis: list[list]
    isotropy: GerminalIsotropy
    h0_matches_center: Verdict


def linear_poisson(constants, variables: Sequence[str] | None = None) -> LinearPoissonData:
    """Linear structure on the dual of a Lie algebra given by structure
    constants, with the center cross-check at the origin: the kernel module
    evaluated at 0 must span the center."""
    defects = lie_jacobi_defect(constants)
    if defects:
        raise ValueError(f"structure constants are not a Lie algebra: {defects[:3]}")
    c = _normalize_constants(constants)
    n = len(c)
    bivector = linear_bivector(c, variables)
    structure = PoissonStructure(bivector)

    # center: v with sum_i v_i c^k_ij = 0 for all j, k
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([c[i][j][k] for i in range(n)])
    center = qq_nullspace(rows, ncols=n)

    iso = germinal_isotropy(structure)
    origin = [QQ(0)] * n
    h0_vectors = []
    for g in iso.module.generators:
        vec = [p.eval(origin) for p in g]
        if any(vec):
            h0_vectors.append(vec)
    dim_h0 = qq_rank(h0_vectors) if h0_vectors else 0
    dim_z = len(center)
    if dim_h0 == dim_z and span_equal(h0_vectors, center, n):
        verdict = Verdict.yes(certificate={"dim": dim_z})
    else:
        verdict = Verdict.no(witness={"dim_h0": dim_h0, "dim_center": dim_z})
    return LinearPoissonData(structure, center, iso, verdict)


# -- foliation modules -------------------------------------------------------------


@dataclass
class FoliationModule:
    """Finitely generated module of vector fields with its syzygy data."""

    variables: tuple[str, ...]
    generators: list[list[Polynomial]]
    module: SubmodulePresentation
    syzygy: SubmodulePresentation
    syzygy_profile: RankProfile | None

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def fiber_dim_at(self, point: Sequence) -> int:
        """dim of (module / I_x module) = m - rank of evaluated syzygies."""
        if self.syzygy_profile is None:
            return self.num_generators
        return self.num_generators - self.syzygy_profile.rank_at(point)

    def generic_fiber_dim(self) -> int:
        if self.syzygy_profile is None:
            return self.num_generators
        return self.num_generators - self.syzygy_profile.generic_rank

    def projectivity(self, *, seed: int = 0) -> Verdict:
        """Yes iff the fiber dimension is constant (syzygy rank never drops)."""
        if self.syzygy_profile is None:
            return Verdict.yes(certificate={"reason": "no syzygies"})
        emptiness = variety_emptiness(self.syzygy_profile.drop_ideal(), REAL, seed=seed)
        if emptiness.is_yes:
            return Verdict.yes(certificate=emptiness.certificate)
        if emptiness.is_no:
            point = emptiness.witness["point"]
            return Verdict.no(witness=point,
                              dims={"at_witness": self.fiber_dim_at(point),
                                    "generic": self.generic_fiber_dim()})
        return Verdict.inconclusive(emptiness.reason or "drop locus unresolved",
                                    unresolved_ideal=[str(p) for p in self.syzygy_profile.drop_ideal()])

    def is_bracket_closed(self) -> Verdict:
        fields = [MultivectorField.from_coefficients(self.variables, g) for g in self.generators]
        for i in range(len(fields)):
            for j in range(i + 1, len(fields)):
                bracket = schouten_bracket(fields[i], fields[j])
                if not self.module.contains(bracket.coefficients()).is_yes:
                    return Verdict.no(witness={"pair": (i, j)})
        return Verdict.yes()


def foliation_module(fields: Sequence[MultivectorField | Sequence[Polynomial]],
                     variables: Sequence[str] | None = None) -> FoliationModule:
    gens = []
    for f in fields:
        if isinstance(f, MultivectorField):
            if variables is None:
                variables = f.variables
            gens.append(f.coefficients())
        else:
            f = list(f)
            if variables is None:
                variables = f[0].variables
            gens.append(f)
    variables = tuple(variables)
    n = len(variables)
    module = SubmodulePresentation(variables, n, gens)
    matrix = [[g[i] for g in gens] for i in range(n)]
    syz = syzygies(matrix, variables)
    profile = None
    if syz.generators:
        syz_matrix = [[s[i] for s in syz.generators] for i in range(len(gens))]
        profile = rank_profile(syz_matrix, variables)
    return FoliationModule(variables, gens, module, syz, profile)


def foliation_inclusion(inner: FoliationModule, outer: FoliationModule) -> Verdict:
    """Membership of every generator of ``inner`` in ``outer``."""
    return inner.module.is_submodule_of(outer.module)

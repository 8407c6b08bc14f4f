"""Explicit finite-dimensional groupoid models and monodromy periods.

The model is the action groupoid ``V* x V x R`` over ``V x R`` for a
full-rank constant bivector scaled by a one-variable profile ``f(t)``:
``xi`` acts on ``V x {t}`` by translation by ``f(t) sharp(xi)``.  Each
``t``-slice carries the constant symplectic pairing

    Omega((xi, v), (xi', v')) = <v, xi'> - <v', xi> + f(t) pi(xi, xi').

``sharp`` uses the same transpose convention as the rest of the package
(``sharp(xi) = PI^T xi``), which is what makes the slice target map Poisson
and the target-source map into the fiberwise pair groupoid anti-Poisson.

The monodromy integrator evaluates the kernel-valued curvature of the
minimal-norm splitting of ``sharp`` over a 2-sphere inside a regular leaf,
with the curvature assembled symbolically on a chart extended by one
variable ``_u`` standing for ``1/<alpha, alpha>`` (a Casimir for the
built-in family, hence leaf-constant).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._kernel import QQ, to_qq
from .polyalg import (
    DifferentialForm,
    MultivectorField,
    Polynomial,
)
from .modcalc.linalg import qq_det
from .poisson import PoissonStructure, germinal_isotropy, koszul_bracket

__all__ = [
    "GroupoidElement",
    "LinearGroupoidModel",
    "OmegaReport",
    "MorphismReport",
    "omega_form",
    "pair_morphism_check",
    "SphereMap",
    "round_sphere",
    "planar_sphere",
    "MonodromyProblem",
    "PeriodResult",
    "monodromy_period",
    "pairwise_sum",
]

FLOAT_COMPOSABILITY_TOL = 1e-12


def _is_float_entry(x) -> bool:
    return isinstance(x, float) or isinstance(x, np.floating)


GroupoidElement = tuple  # (xi, v, t)


class LinearGroupoidModel:
    """Action groupoid of ``(V*, +)`` on ``V x R`` translating by
    ``f(t) sharp(xi)``; ``pi`` must be a full-rank skew rational matrix."""

    def __init__(self, pi_matrix: Sequence[Sequence], f: Polynomial):
        self.pi = [[to_qq(x) for x in row] for row in pi_matrix]
        self.d = len(self.pi)
        if self.d % 2:
            raise ValueError("V must be even dimensional")
        for i in range(self.d):
            for j in range(self.d):
                if self.pi[i][j] != -self.pi[j][i]:
                    raise ValueError("pi must be skew")
        if not qq_det(self.pi):
            raise ValueError("pi must have full rank")
        if len(f.variables) != 1:
            raise ValueError("f must be a polynomial in the single variable t")
        self.f = f

    def f_at(self, t):
        return self.f.eval([t])

    def sharp(self, xi: Sequence):
        """``PI^T xi`` with exact arithmetic for rational input."""
        exact = not any(_is_float_entry(x) for x in xi)
        vals = [to_qq(x) for x in xi] if exact else [float(x) for x in xi]
        out = []
        for j in range(self.d):
            acc = QQ(0) if exact else 0.0
            for i in range(self.d):
                if self.pi[i][j]:
                    acc = acc + vals[i] * (self.pi[i][j] if exact else float(self.pi[i][j]))
            out.append(acc)
        return out

    def translation(self, xi: Sequence, t):
        c = self.f_at(t)
        return [c * s for s in self.sharp(xi)]

    # -- structure maps ------------------------------------------------------

    def source(self, g: GroupoidElement):
        xi, v, t = g
        return (tuple(v), t)

    def target(self, g: GroupoidElement):
        xi, v, t = g
        tr = self.translation(xi, t)
        return (tuple(a + b for a, b in zip(v, tr)), t)

    def unit(self, v: Sequence, t) -> GroupoidElement:
        zero = tuple(QQ(0) for _ in range(self.d))
        return (zero, tuple(v), t)

    def inverse(self, g: GroupoidElement) -> GroupoidElement:
        xi, v, t = g
        w, _ = self.target(g)
        return (tuple(-x for x in xi), w, t)

    def composable(self, g: GroupoidElement, h: GroupoidElement) -> bool:
        (sv, st) = self.source(g)
        (tv, tt) = self.target(h)
        exact = not any(_is_float_entry(x) for x in (*sv, st, *tv, tt))
        if exact:
            return st == tt and all(a == b for a, b in zip(sv, tv))
        if abs(float(st) - float(tt)) > FLOAT_COMPOSABILITY_TOL:
            return False
        return all(abs(float(a) - float(b)) <= FLOAT_COMPOSABILITY_TOL
                   for a, b in zip(sv, tv))

    def multiply(self, g: GroupoidElement, h: GroupoidElement) -> GroupoidElement:
        if not self.composable(g, h):
            raise ValueError("non-composable pair")
        xi_g, _, t = g
        xi_h, v_h, _ = h
        return (tuple(a + b for a, b in zip(xi_g, xi_h)), tuple(v_h), t)

    # -- the target-source map into the fiberwise pair groupoid ----------------

    def pair_map(self, g: GroupoidElement):
        xi, v, t = g
        (w, _) = self.target(g)
        return (w, tuple(v), t)

    def pair_slice_inverse(self, element, *, t=None):
        """Inverse of the slice map ``(xi, v) -> (v + f(t) sharp xi, v)``
        when ``f(t) != 0`` (exact for rational data)."""
        w, v, t = element if len(element) == 3 else (*element, t)
        c = self.f_at(t)
        if not c:
            raise ValueError("slice map is not invertible where f(t) = 0")
        diff = [(a - b) / c for a, b in zip(w, v)]
        # solve PI^T xi = diff exactly
        from .modcalc.linalg import qq_solve

        rows = [[self.pi[i][j] for i in range(self.d)] for j in range(self.d)]
        xi = qq_solve(rows, diff)
        if xi is None:
            raise AssertionError("full-rank sharp failed to invert")
        return (tuple(xi), tuple(v), t)


@dataclass
class OmegaReport:
    t: object
    matrix: list[list]
    determinant: object
    nondegenerate: bool
    closed: str = "constant coefficients, hence closed"


def omega_form(model: LinearGroupoidModel, t) -> OmegaReport:
    """The 2d x 2d skew matrix of the slice symplectic form at parameter t."""
    c = model.f_at(t)
    d = model.d
    size = 2 * d
    mat = [[QQ(0)] * size for _ in range(size)]
    for i in range(d):
        for j in range(d):
            mat[i][j] = c * model.pi[i][j]
        mat[i][d + i] = QQ(-1)
        mat[d + i][i] = QQ(1)
    det = qq_det(mat)
    return OmegaReport(t=t, matrix=mat, determinant=det, nondegenerate=bool(det))


@dataclass
class MorphismReport:
    samples: int
    morphism_exact: bool
    morphism_failures: int
    anti_poisson_max_residual: float
    anti_poisson_samples: int
    rank_at_zero: dict


def _random_rational_vector(rng: random.Random, d: int) -> tuple:
    return tuple(QQ(rng.randint(-50, 50), rng.randint(1, 10)) for _ in range(d))


def pair_morphism_check(model: LinearGroupoidModel, samples: int = 1000,
                        seed: int = 0) -> MorphismReport:
    """(a) the target-source map is a groupoid morphism into the fiberwise
    pair groupoid, exactly on rational samples; (b) it pushes the slice
    Poisson bivector (inverse of Omega) to ``(-f(t) pi) (+) (f(t) pi)``
    where ``f(t) != 0``; (c) the Jacobian rank where ``f(t) = 0``."""
    rng = random.Random(seed)
    d = model.d
    failures = 0
    for _ in range(samples):
        t = QQ(rng.randint(-20, 20), rng.randint(1, 10))
        h = (_random_rational_vector(rng, d), _random_rational_vector(rng, d), t)
        g = (_random_rational_vector(rng, d), model.target(h)[0], t)
        lhs = model.pair_map(model.multiply(g, h))
        pg, ph = model.pair_map(g), model.pair_map(h)
        if pg[1] != ph[0]:
            failures += 1
            continue
        rhs = (pg[0], ph[1], t)
        if lhs != rhs:
            failures += 1

    pi_f = np.array([[float(x) for x in row] for row in model.pi])
    sharp_f = pi_f.T
    max_res = 0.0
    ap_samples = 100
    rng2 = random.Random(seed + 1)
    for _ in range(ap_samples):
        t = 0.1 + 1.9 * rng2.random()
        c = float(model.f_at(t))
        if c == 0.0:
            continue
        omega = np.zeros((2 * d, 2 * d))
        omega[:d, :d] = c * pi_f
        omega[:d, d:] = -np.eye(d)
        omega[d:, :d] = np.eye(d)
        leaf = np.linalg.inv(omega)
        jac = np.zeros((2 * d, 2 * d))
        jac[:d, :d] = c * sharp_f
        jac[:d, d:] = np.eye(d)
        jac[d:, d:] = np.eye(d)
        pushed = jac @ leaf @ jac.T
        expected = np.zeros((2 * d, 2 * d))
        expected[:d, :d] = -c * pi_f
        expected[d:, d:] = c * pi_f
        max_res = max(max_res, float(np.max(np.abs(pushed - expected))))

    # rank of the full Jacobian at a zero of f
    rank_report = {}
    zeros = [t for t in (0,) if model.f_at(t) == 0]
    for t0 in zeros:
        xi = np.ones(d)
        fprime = float(model.f.diff(0).eval([float(t0)]))
        jac = np.zeros((2 * d + 1, 2 * d + 1))
        jac[:d, d:2 * d] = np.eye(d)      # d target / d v
        jac[:d, 2 * d] = fprime * (sharp_f @ xi)
        jac[d:2 * d, d:2 * d] = np.eye(d)
        jac[2 * d, 2 * d] = 1.0
        rank_report[float(t0)] = int(np.linalg.matrix_rank(jac))
    return MorphismReport(samples=samples, morphism_exact=failures == 0,
                          morphism_failures=failures,
                          anti_poisson_max_residual=max_res,
                          anti_poisson_samples=ap_samples,
                          rank_at_zero=rank_report)


# -- monodromy periods -----------------------------------------------------------


def pairwise_sum(values: Sequence[float]) -> float:
    """Deterministic pairwise tree reduction (reproducible bit-for-bit)."""
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = []
        for i in range(0, len(vals) - 1, 2):
            nxt.append(vals[i] + vals[i + 1])
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return float(vals[0])


@dataclass
class SphereMap:
    """Parameterized closed surface with exact tangents."""

    point: Callable[[float, float], np.ndarray]
    jacobian: Callable[[float, float], np.ndarray]   # shape (n, 2)
    label: str = "sphere"


def round_sphere(radius: float, dimension: int, axes: tuple[int, int, int] = (0, 1, 2),
                 center: Sequence | None = None) -> SphereMap:
    """Radius-r sphere in the three chosen coordinate axes."""
    c = np.zeros(dimension) if center is None else np.array([float(x) for x in center])
    i, j, k = axes
    r = float(radius)

    def point(theta: float, phi: float) -> np.ndarray:
        x = c.copy()
        x[i] += r * np.sin(theta) * np.cos(phi)
        x[j] += r * np.sin(theta) * np.sin(phi)
        x[k] += r * np.cos(theta)
        return x

    def jacobian(theta: float, phi: float) -> np.ndarray:
        out = np.zeros((dimension, 2))
        out[i, 0] = r * np.cos(theta) * np.cos(phi)
        out[j, 0] = r * np.cos(theta) * np.sin(phi)
        out[k, 0] = -r * np.sin(theta)
        out[i, 1] = -r * np.sin(theta) * np.sin(phi)
        out[j, 1] = r * np.sin(theta) * np.cos(phi)
        return out

    return SphereMap(point, jacobian, label=f"round r={radius} axes={axes}")


def planar_sphere(radius: float, dimension: int, axes: tuple[int, int] = (0, 1),
                  center: Sequence | None = None) -> SphereMap:
    """Degenerate sphere collapsed into a 2-plane (image inside one leaf of a
    constant-rank structure); used for the flat zero-curvature case."""
    c = np.zeros(dimension) if center is None else np.array([float(x) for x in center])
    i, j = axes
    r = float(radius)

    def point(theta: float, phi: float) -> np.ndarray:
        x = c.copy()
        x[i] += r * np.sin(theta) * np.cos(phi)
        x[j] += r * np.sin(theta) * np.sin(phi)
        return x

    def jacobian(theta: float, phi: float) -> np.ndarray:
        out = np.zeros((dimension, 2))
        out[i, 0] = r * np.cos(theta) * np.cos(phi)
        out[j, 0] = r * np.cos(theta) * np.sin(phi)
        out[i, 1] = -r * np.sin(theta) * np.sin(phi)
        out[j, 1] = r * np.sin(theta) * np.cos(phi)
        return out

    return SphereMap(point, jacobian, label=f"planar r={radius} axes={axes}")


class MonodromyProblem:
    """Curvature-period data for a sphere inside a regular leaf.

    Preconditions (checked): the kernel module has a single generator
    ``alpha`` whose squared length is a Casimir (so the minimal-norm
    splitting is leaf-wise polynomial after adjoining ``_u = 1/|alpha|^2``),
    the sphere stays in the regular locus, and its tangents lie in the image
    of sharp at every mesh point.
    """

    def __init__(self, structure: PoissonStructure, sphere: SphereMap,
                 *, splitting_tol: float = 1e-12, gauge: Sequence | None = None):
        self.structure = structure
        self.sphere = sphere
        self.splitting_tol = splitting_tol
        n = len(structure.variables)
        self.n = n
        iso = germinal_isotropy(structure)
        if len(iso.module.generators) != 1:
            raise ValueError("built-in splitting needs a single kernel generator")
        alpha = list(iso.module.generators[0])
        self.alpha = alpha
        q = sum((a * a for a in alpha), Polynomial.zero(structure.variables))
        ham_q = structure.hamiltonian_field(q)
        if not ham_q.is_zero:
            raise ValueError("|alpha|^2 is not a Casimir; supply a custom splitting")
        self.q = q
        self.gauge = [to_qq(x) for x in gauge] if gauge is not None else None
        self._build_symbolic()

    def _build_symbolic(self) -> None:
        base = self.structure.variables
        ext = base + ("_u",)
        self.ext_variables = ext
        n = self.n

        def lift(p: Polynomial) -> Polynomial:
            return p.on_chart(ext)

        pi_ext = MultivectorField.bivector(
            ext, {k: lift(p) for k, p in self.structure.bivector.components.items()})
        alpha_ext = DifferentialForm.from_coefficients(ext, [lift(a) for a in self.alpha])
        u = Polynomial.variable(ext, "_u")

        def sigma_of_hamiltonian(g_ext: Polynomial) -> DifferentialForm:
            # minimal-norm preimage of sharp(dg): dg - u <dg, alpha> alpha
            dg = DifferentialForm.d_of(g_ext)
            inner = Polynomial.zero(ext)
            for i in range(n):
                inner = inner + g_ext.diff(i) * lift(self.alpha[i])
            return dg - alpha_ext.scale(inner * u)

        betas = []
        for i in range(n):
            g = Polynomial.variable(ext, ext[i])
            betas.append(sigma_of_hamiltonian(g))
        if self.gauge is not None:
            # gauge term: sigma'(V) = sigma(V) + <lambda, V> alpha
            lam = [Polynomial.constant(ext, c) for c in self.gauge]
            for i in range(n):
                v = pi_ext.sharp(DifferentialForm.coordinate_differential(ext, i))
                inner = sum((lam[j] * v.coefficients()[j] for j in range(n)),
                            Polynomial.zero(ext))
                betas[i] = betas[i] + alpha_ext.scale(inner)
        pi_mat_ext = pi_ext.component_matrix()

        self._scalar: dict[tuple[int, int], list[Polynomial]] = {}
        for i in range(n):
            for j in range(i + 1, n):
                bracket_ham = pi_mat_ext[i][j]        # {x_i, x_j}
                sigma_bracket = sigma_of_hamiltonian(bracket_ham)
                if self.gauge is not None:
                    lam = [Polynomial.constant(ext, c) for c in self.gauge]
                    vb = pi_ext.sharp(DifferentialForm.d_of(bracket_ham))
                    inner = sum((lam[a] * vb.coefficients()[a] for a in range(n)),
                                Polynomial.zero(ext))
                    sigma_bracket = sigma_bracket + alpha_ext.scale(inner)
                curv = sigma_bracket - koszul_bracket(betas[i], betas[j], pi_ext)
                self._scalar[(i, j)] = curv.coefficients()
        self._pi_mat = self.structure.pi_matrix()

    def curvature_matrix(self, x: np.ndarray) -> np.ndarray:
        """Pairings <R(V_i, V_j), alpha>/|alpha| at a point (floats)."""
        n = self.n
        alpha_val = np.array([float(p.eval(list(x))) for p in self.alpha])
        norm = float(np.linalg.norm(alpha_val))
        qval = float(norm * norm)
        pt = list(x) + [1.0 / qval]
        out = np.zeros((n, n))
        for (i, j), coeffs in self._scalar.items():
            vec = np.array([float(p.eval(pt)) for p in coeffs[:n]])
            tangential = vec - (vec @ alpha_val) / qval * alpha_val
            if np.linalg.norm(tangential) > 1e-8 * max(1.0, np.linalg.norm(vec)):
                raise AssertionError("curvature value is not kernel-valued on the leaf")
            s = float(vec @ alpha_val) / norm
            out[i, j] = s
            out[j, i] = -s
        return out


@dataclass
class PeriodResult:
    value: float
    error_estimate: float
    coarse_value: float
    meshes: tuple[int, int]
    max_splitting_residual: float
    label: str = ""


def _integrate(problem: MonodromyProblem, mesh: int) -> tuple[float, float]:
    nodes_t, weights_t = np.polynomial.legendre.leggauss(mesh)
    theta = 0.5 * np.pi * (nodes_t + 1.0)
    wt = 0.5 * np.pi * weights_t
    phi = np.pi * (nodes_t + 1.0)
    wp = np.pi * weights_t

    pi_rows = problem._pi_mat
    n = problem.n
    contributions = []
    max_residual = 0.0
    for a, th in enumerate(theta):
        for b, ph in enumerate(phi):
            x = problem.sphere.point(th, ph)
            jac = problem.sphere.jacobian(th, ph)
            pival = np.array([[float(p.eval(list(x))) for p in row] for row in pi_rows])
            sharp_mat = pival.T
            rank = np.linalg.matrix_rank(sharp_mat, tol=1e-9)
            if rank != 2 * problem.structure.k:
                raise ValueError("leaf hits the singular locus on the sphere")
            sol, res, *_ = np.linalg.lstsq(sharp_mat, jac, rcond=None)
            residual = float(np.max(np.abs(sharp_mat @ sol - jac)))
            scale = max(1.0, float(np.max(np.abs(jac))))
            if residual > problem.splitting_tol * scale * 10:
                raise ValueError(
                    f"splitting residual too large ({residual:.2e}); sphere not tangent to the leaf")
            max_residual = max(max_residual, residual / scale)
            smat = problem.curvature_matrix(x)
            integrand = float(sol[:, 0] @ smat @ sol[:, 1])
            contributions.append(wt[a] * wp[b] * integrand)
    return pairwise_sum(contributions), max_residual


def monodromy_period(problem: MonodromyProblem,
                     meshes: tuple[int, int] = (32, 64)) -> PeriodResult:
    """Integral of the kernel-paired curvature over the sphere, with a
    two-mesh Richardson error estimate."""
    coarse, res1 = _integrate(problem, meshes[0])
    fine, res2 = _integrate(problem, meshes[1])
    return PeriodResult(value=fine, error_estimate=abs(fine - coarse),
                        coarse_value=coarse, meshes=meshes,
                        max_splitting_residual=max(res1, res2),
                        label=problem.sphere.label)

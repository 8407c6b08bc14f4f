"""Poisson analysis: Jacobi, rank data, kernel module, decision, linear case."""

from __future__ import annotations

import random

import pytest

from poiskit._kernel import QQ
from poiskit.polyalg import (
    DifferentialForm,
    MultivectorField,
    Polynomial,
    wedge,
)
from poiskit.modcalc import SubmodulePresentation
from poiskit.poisson import (
    DistributionPresentation,
    PoissonStructure,
    ZeroBivectorError,
    almost_regular_decide,
    casimir_search,
    casimir_test,
    check_jacobi,
    foliation_inclusion,
    foliation_module,
    germinal_isotropy,
    koszul_bracket,
    lie_jacobi_defect,
    linear_bivector,
    linear_poisson,
    top_power,
    verify_distribution,
)
from conftest import (
    aff1_plus_r_constants,
    heis3_constants,
    sl2_constants,
    su2_constants,
    zero_constants,
)

V3 = ("x", "y", "z")


# -- Jacobi -----------------------------------------------------------------------


def test_jacobi_trivially_on_r2():
    pi = MultivectorField.bivector(("x", "y"), {(0, 1): Polynomial.parse(("x", "y"), "x")})
    assert check_jacobi(pi).is_yes


def test_jacobi_rotation_bivector(su2):
    assert check_jacobi(su2.bivector).is_yes


def test_jacobi_failure_carries_witness():
    pv = lambda s: Polynomial.parse(V3, s)
    pi = MultivectorField.bivector(V3, {(1, 2): pv("x"), (0, 2): pv("-y"), (0, 1): pv("x^2")})
    verdict = check_jacobi(pi)
    assert verdict.is_no
    assert verdict.witness["indices"] == (0, 1, 2)
    # independent expansion: [pi,pi] = -2<w, curl w> dx^dy^dz with w = (x, y, x^2)
    assert verdict.witness["coefficient"] == pv("-2*(x*0 + y*(-2*x) + x^2*0)")


def test_constructor_rejects_non_poisson():
    pv = lambda s: Polynomial.parse(V3, s)
    pi = MultivectorField.bivector(V3, {(1, 2): pv("x"), (0, 2): pv("-y"), (0, 1): pv("x^2")})
    with pytest.raises(ValueError):
        PoissonStructure(pi)
    assert PoissonStructure.unchecked(pi).jacobi is None


# -- top power -----------------------------------------------------------------------


def test_top_power_rotation(su2):
    data = top_power(su2)
    assert data.k == 1
    assert sorted(str(p) for p in data.coefficient_ideal) == ["-y", "x", "z"]
    assert data.density.is_yes


def test_top_power_heisenberg(heis):
    data = top_power(heis)
    assert data.k == 1 and [str(p) for p in data.coefficient_ideal] == ["t"]


def test_top_power_constant_symplectic_r4():
    ps = PoissonStructure.from_components(("x", "y", "z", "w"), {(0, 1): "1", (2, 3): "1"})
    data = top_power(ps)
    assert data.k == 2
    assert [str(p) for p in data.coefficient_ideal] == ["2"]


def test_top_power_zero_bivector_errors():
    ps = PoissonStructure(MultivectorField.zero(V3, 2))
    with pytest.raises(ZeroBivectorError):
        top_power(ps)


# -- Koszul bracket ---------------------------------------------------------------------


def test_koszul_bracket_quadratic_example():
    ps = PoissonStructure.from_components(("x", "y"), {(0, 1): "x^2"})
    dx = DifferentialForm.coordinate_differential(("x", "y"), "x")
    dy = DifferentialForm.coordinate_differential(("x", "y"), "y")
    assert koszul_bracket(dx, dy, ps) == DifferentialForm(
        ("x", "y"), 1, {(0,): Polynomial.parse(("x", "y"), "2*x")})


def test_koszul_bracket_defining_identity_randomized(su2):
    rng = random.Random(17)
    for _ in range(12):
        f = Polynomial(V3, {tuple(rng.randint(0, 2) for _ in V3): rng.randint(-3, 3)})
        g = Polynomial(V3, {tuple(rng.randint(0, 2) for _ in V3): rng.randint(-3, 3)})
        lhs = koszul_bracket(DifferentialForm.d_of(f), DifferentialForm.d_of(g), su2)
        rhs = DifferentialForm.d_of(su2.bivector.pairing(DifferentialForm.d_of(f),
                                                         DifferentialForm.d_of(g)))
        assert lhs == rhs


def test_koszul_centrality_at_kernel_points(su2):
    # alpha in the kernel module, beta with sharp(beta)(x0) = 0: bracket vanishes at x0
    iso = germinal_isotropy(su2)
    alpha = iso.generator_forms()[0]
    beta = DifferentialForm.coordinate_differential(V3, "x")
    x0 = [QQ(1), QQ(0), QQ(0)]  # sharp(dx) = z d/dy - y d/dz vanishes here
    assert su2.sharp(beta).evaluate(x0).is_zero
    bracket = koszul_bracket(alpha, beta, su2)
    assert bracket.evaluate(x0).is_zero


# -- Casimirs ------------------------------------------------------------------------------


def test_casimir_heisenberg(heis):
    assert casimir_test(heis, Polynomial.variable(("x", "y", "t"), "t")).is_yes
    assert casimir_test(heis, Polynomial.variable(("x", "y", "t"), "x")).is_no


def test_casimir_radius_squared(su2):
    assert casimir_test(su2, Polynomial.parse(V3, "x^2 + y^2 + z^2")).is_yes


def test_casimir_search_symplectic_finds_constants_only():
    ps = PoissonStructure.from_components(("x", "y"), {(0, 1): "1"})
    basis = casimir_search(ps, 3)
    assert [str(p) for p in basis] == ["1"]


def test_casimir_search_heisenberg(heis):
    basis = casimir_search(heis, 2)
    assert [str(p) for p in basis] == ["1", "t", "t^2"]


# -- kernel module -----------------------------------------------------------------------


def test_kernel_module_rotation(su2):
    iso = germinal_isotropy(su2)
    assert [[str(p) for p in g] for g in iso.module.generators] == [["x", "y", "z"]]
    assert iso.generic_dimension == 1
    assert iso.dim_at([0, 0, 0]) == 0
    assert iso.dim_at([1, 0, 0]) == 1


def test_kernel_module_heisenberg(heis):
    iso = germinal_isotropy(heis)
    assert [[str(p) for p in g] for g in iso.module.generators] == [["0", "0", "1"]]
    assert iso.dim_at([2, 3, 5]) == 1 and iso.dim_at([0, 0, 0]) == 1


def test_kernel_module_symplectic_r4_is_zero():
    ps = PoissonStructure.from_components(("x", "y", "z", "w"), {(0, 1): "1", (2, 3): "1"})
    iso = germinal_isotropy(ps)
    assert iso.module.is_zero_module and iso.generic_dimension == 0


def test_kernel_pointwise_inside_pointwise_kernel(su2):
    from poiskit.modcalc.linalg import qq_rank

    rng = random.Random(23)
    iso = germinal_isotropy(su2)
    mat = su2.pi_matrix()
    for _ in range(100):
        pt = [QQ(rng.randint(-5, 5), rng.randint(1, 3)) for _ in V3]
        pival = [[p.eval(pt) for p in row] for row in mat]
        for g in iso.module.generators:
            alpha = [p.eval(pt) for p in g]
            image = [sum(pival[i][j] * alpha[i] for i in range(3)) for j in range(3)]
            assert all(v == 0 for v in image)
        # at regular points, the kernel dimension matches n - 2k
        if any(any(row) for row in pival):
            if qq_rank(pival) == 2 * su2.k:
                assert iso.dim_at(pt) == 3 - 2 * su2.k


# -- the constant-rank decision -----------------------------------------------------------


def test_decision_heisenberg_yes(heis):
    verdict = almost_regular_decide(heis)
    assert verdict.is_yes
    dist = verdict.payload["distribution"]
    expected = SubmodulePresentation(
        ("x", "y", "t"), 3,
        [[Polynomial.one(("x", "y", "t")), Polynomial.zero(("x", "y", "t")),
          Polynomial.zero(("x", "y", "t"))],
         [Polynomial.zero(("x", "y", "t")), Polynomial.one(("x", "y", "t")),
          Polynomial.zero(("x", "y", "t"))]])
    assert dist.module.equals_module(expected).is_yes
    assert dist.rank == 2


def test_decision_rotation_no_with_origin_witness(su2):
    verdict = almost_regular_decide(su2)
    assert verdict.is_no
    assert list(verdict.witness) == [0, 0, 0]
    assert verdict.payload["dims"] == {"at_witness": 0, "generic": 1}


def test_decision_log_symplectic_r2_full_tangent():
    ps = PoissonStructure.from_components(("x", "y"), {(0, 1): "x"})
    verdict = almost_regular_decide(ps)
    assert verdict.is_yes
    dist = verdict.payload["distribution"]
    assert dist.rank == 2
    assert dist.module.equals_module(SubmodulePresentation.full(("x", "y"), 2)).is_yes


def test_decision_zero_bivector_degenerate_branch():
    ps = PoissonStructure(MultivectorField.zero(V3, 2))
    verdict = almost_regular_decide(ps)
    assert verdict.is_yes
    assert verdict.payload["distribution"].rank == 0
    iso = germinal_isotropy(ps)
    assert iso.generic_dimension == 3


def test_decision_distribution_agrees_on_regular_locus(heis):
    # on the regular locus the distribution module contains the sharp images
    verdict = almost_regular_decide(heis)
    dist = verdict.payload["distribution"]
    for col in heis.bivector.columns():
        assert dist.module.contains(col).is_yes


def test_distribution_localizes_to_image_module(heis):
    # after clearing a regular-locus denominator, distribution generators fall
    # into the image module: q^k * v with q nonvanishing at a regular point
    verdict = almost_regular_decide(heis)
    dist = verdict.payload["distribution"]
    k = dist.provenance["saturation_exponent"]
    columns = heis.columns_module()
    q = heis.regular_ideal[0]          # q = t, nonzero at any regular point
    assert q.eval([0, 0, 1]) != 0
    for gen in dist.generators:
        scaled = [q ** k * c for c in gen]
        assert columns.contains(scaled).is_yes


# -- distribution verification ---------------------------------------------------------------


def test_verify_distribution_heisenberg(heis):
    verdict = almost_regular_decide(heis)
    checks = verify_distribution(verdict.payload["distribution"], heis)
    assert checks.is_yes
    assert all(v.is_yes for v in checks.payload.values())


def test_verify_distribution_catches_non_involutive(heis):
    variables = ("x", "y", "t")
    pv = lambda s: Polynomial.parse(variables, s)
    # span(d/dx, x d/dt + d/dy) is not involutive: the bracket is d/dt
    gens = [[pv("1"), pv("0"), pv("0")], [pv("0"), pv("1"), pv("x")]]
    dist = DistributionPresentation(SubmodulePresentation(variables, 3, gens), 2)
    checks = verify_distribution(dist, heis)
    assert checks.is_no
    assert checks.payload["involutive"].is_no


def test_verify_distribution_full_tangent_always_passes(heis):
    dist = DistributionPresentation(SubmodulePresentation.full(("x", "y", "t"), 3), 3)
    checks = verify_distribution(dist, heis)
    assert checks.payload["involutive"].is_yes
    assert checks.payload["poisson_columns"].is_yes


# -- linear structures ---------------------------------------------------------------------


@pytest.mark.parametrize("constants,center_dim", [
    (zero_constants(3), 3),
    (heis3_constants(), 1),
    (aff1_plus_r_constants(), 1),
    (su2_constants(), 0),
    (sl2_constants(), 0),
])
def test_linear_origin_kernel_matches_center(constants, center_dim):
    data = linear_poisson(constants)
    assert len(data.center_basis) == center_dim
    assert data.h0_matches_center.is_yes


def test_linear_rejects_non_lie_constants():
    c = zero_constants(3)
    c[0][1][2], c[1][0][2] = 1, -1
    c[1][2][1], c[2][1][1] = 1, -1
    assert lie_jacobi_defect(c)
    with pytest.raises(ValueError):
        linear_poisson(c)


def test_jacobi_equivalence_randomized():
    rng = random.Random(99)
    checked_yes = checked_no = 0
    for _ in range(30):
        c = zero_constants(3)
        for i in range(3):
            for j in range(i + 1, 3):
                for k in range(3):
                    v = rng.randint(-2, 2)
                    c[i][j][k], c[j][i][k] = v, -v
        direct = not lie_jacobi_defect(c)
        bracket = check_jacobi(linear_bivector(c)).is_yes
        assert direct == bracket
        checked_yes += bracket
        checked_no += not bracket
    assert checked_no > 0  # the sample hits non-Lie tables


# -- foliation modules -----------------------------------------------------------------------


def _actions_pair(k: int = 2):
    variables = ("x1", "y1", "x2", "y2")
    pv = lambda s: Polynomial.parse(variables, s)
    v = MultivectorField.from_coefficients(
        variables, [pv("x1"), pv("y1"), pv(f"{k}*x2"), pv(f"{k}*y2")])
    w = MultivectorField.from_coefficients(
        variables, [pv("-y1"), pv("x1"), pv(f"-{k}*y2"), pv(f"{k}*x2")])
    return variables, v, w


def test_action_foliation_is_projective():
    variables, v, w = _actions_pair()
    fol = foliation_module([v, w])
    assert fol.fiber_dim_at([0, 0, 0, 0]) == 2
    assert fol.fiber_dim_at([1, 0, 0, 0]) == 2
    assert fol.projectivity().is_yes
    assert fol.is_bracket_closed().is_yes


def test_quadratic_image_foliation_not_projective():
    variables, v, w = _actions_pair()
    pi = PoissonStructure(wedge(v, w))
    fol = foliation_module([MultivectorField.from_coefficients(variables, col)
                            for col in pi.bivector.columns()])
    assert fol.fiber_dim_at([0, 0, 0, 0]) == 4
    assert fol.fiber_dim_at([1, 0, 0, 0]) == 2
    verdict = fol.projectivity()
    assert verdict.is_no
    assert verdict.payload["dims"] == {"at_witness": 4, "generic": 2}


def test_quadratic_image_inside_action_module():
    variables, v, w = _actions_pair()
    pi = PoissonStructure(wedge(v, w))
    inner = foliation_module([MultivectorField.from_coefficients(variables, col)
                              for col in pi.bivector.columns()])
    outer = foliation_module([v, w])
    assert foliation_inclusion(inner, outer).is_yes


def test_matrix_action_foliation_dimension_profile():
    variables = ("x", "y")
    pv = lambda s: Polynomial.parse(variables, s)
    gens = [
        MultivectorField.from_coefficients(variables, [pv("x"), pv("0")]),
        MultivectorField.from_coefficients(variables, [pv("y"), pv("0")]),
        MultivectorField.from_coefficients(variables, [pv("0"), pv("x")]),
        MultivectorField.from_coefficients(variables, [pv("0"), pv("y")]),
    ]
    fol = foliation_module(gens)
    assert fol.fiber_dim_at([0, 0]) == 4
    assert fol.fiber_dim_at([1, 0]) == 2
    assert fol.projectivity().is_no

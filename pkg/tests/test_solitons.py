import numpy as np
import pytest
from hypothesis import given, strategies as st

from walker3 import expr as E
from walker3.errors import BuildError, InconsistencyError
from walker3.jets import grad_eval
from walker3.metric import christoffel, metric_at
from walker3.solitons import (
    CottonCase,
    FieldPotential,
    GradientField,
    Potential,
    RicciCase,
    VectorFieldAnsatz,
    build_cotton_soliton,
    build_ricci_soliton,
    cotton_remark_metric,
    cotton_remark_field,
    cotton_remark_report,
    derive_cotton_potential,
    hessian,
    homothety_residual,
    homothety_scalar,
    homothety_search,
    label,
    lie_metric,
    verify_soliton,
)

coef = st.floats(-1, 1)
pts = st.tuples(st.floats(-1, 1), st.floats(-1, 1))
F = E.parse("exp(y)*(1 + x^2) + x*y^2")


def _lie_via_connection(X, f, point):
    """nabla_a X_b + nabla_b X_a with X_b = g_bc X^c."""
    x, y = point
    m = metric_at(f, point)
    G = christoffel(f, point)
    _, fx, fy = grad_eval(f, x, y)
    Xv, D = X.at(point)
    dg = np.zeros((3, 3, 3))  # dg[a, b, c] = d_a g_bc
    dg[0, 0, 0], dg[1, 0, 0] = -2 * fx, -2 * fy
    dX = np.einsum("abc,c->ab", dg, Xv) + np.einsum("bc,ca->ab", m.g, D)  # d_a X_b
    Xlow = m.g @ Xv
    nab = dX - np.einsum("cab,c->ab", G, Xlow)
    return nab + nab.T


@given(coef, coef, coef, coef, coef, pts)
def test_lie_derivative_matches_connection_formula(a, abar, mu, u1, t2, p):
    X = VectorFieldAnsatz(a, abar, mu, E.const(u1) * E.X, E.const(t2) * E.X * E.X)
    np.testing.assert_allclose(lie_metric(X, F, p), _lie_via_connection(X, F, p), atol=1e-12)


@given(coef, coef, coef, pts)
def test_gradient_field_lie_derivative_is_twice_hessian(c1, c2, c3, p):
    h = FieldPotential(E.const(c1) * E.X * E.Y + E.const(c2) * E.sin(E.X) + E.const(c3) * E.Y * E.Y)
    np.testing.assert_allclose(lie_metric(GradientField(h, F), F, p), 2 * hessian(h, F, p), atol=1e-12)


@given(coef, coef, coef, coef, coef, pts)
def test_homothety_scalar_is_the_only_entry(a, abar, mu, u1, t2, p):
    X = VectorFieldAnsatz(a, abar, mu, E.const(u1) * E.X * E.X, E.const(t2) * E.X)
    fv = grad_eval(F, *p)[0]
    R = lie_metric(X, F, p) - mu * metric_at(F, p).g
    expected = np.zeros((3, 3))
    expected[0, 0] = -2 * homothety_scalar(X, F, p)
    np.testing.assert_allclose(R, expected, atol=1e-11 * (1 + abs(fv)))


def test_printed_xt_coefficient_breaks_symmetry():
    X = VectorFieldAnsatz(0.3, 0.7, 0.5, printed_xt_coeff=True)
    L = lie_metric(X, F, (0.2, 0.1)) - 0.5 * metric_at(F, (0.2, 0.1)).g
    assert abs(L[0, 2]) == pytest.approx(0.4)


def test_printed_scalar_differs():
    X = VectorFieldAnsatz(0.2, 0.1, 0.4)
    p = (0.3, 0.2)
    s, t = homothety_residual(X, F, [p])
    assert t == pytest.approx(2 * s)
    assert abs(homothety_scalar(X, F, p, printed=True) + homothety_scalar(X, F, p)) > 1e-3


SAMPLES = [(x, y) for x in np.linspace(0, 1, 5) for y in np.linspace(-1, 1, 10)]


@pytest.mark.parametrize("kappa", [1.0, -2.0, 0.5])
def test_ricci_r1(kappa):
    rc = RicciCase("R1", E.parse("1 + x^2"), E.parse("sin(x)"), E.parse("x"), kappa)
    f, h = build_ricci_soliton(rc, SAMPLES)
    cert = verify_soliton(f, h, 0.0, "Ricci", SAMPLES)
    assert cert.residual < 1e-8 and cert.label == "steady"
    assert h.mu == kappa / 2


def test_ricci_r2_and_potential_profile():
    rc = RicciCase("R2", E.parse("2 + cos(x)"), E.const(1.0), E.const(0.0))
    f, h = build_ricci_soliton(rc, SAMPLES)
    assert verify_soliton(f, h, 0.0, "Ricci", SAMPLES).residual < 1e-8
    # hh_xx = -(2 + cos x) with hh(0) = hh_x(0) = 0
    x = 0.7
    ref = -(x * x) + np.cos(x) - 1.0
    assert h.hhat([x])[0, 0] == pytest.approx(ref, abs=1e-11)


def test_ricci_wrong_potential_is_rejected():
    f = E.parse("y^2*(1+x)")
    assert verify_soliton(f, Potential(0.0, E.const(0.0)), 0.0, "Ricci", SAMPLES).residual > 1.0
    with pytest.raises(BuildError):
        build_ricci_soliton(RicciCase("R1", E.X, E.X, E.X, 0.0))


CASES = [
    CottonCase("C1", E.parse("1 + x^2"), E.parse("exp(x)"), E.parse("sin(x)"), E.X, 1.3),
    CottonCase("C2", E.parse("cos(x)"), E.parse("x"), E.parse("1 + x"), E.const(0.0), 0.8),
    CottonCase("C3", E.parse("2 + x"), E.parse("x^2"), E.parse("x"), E.const(1.0)),
]


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.case)
@pytest.mark.parametrize("sign", [1, -1])
def test_cotton_corrected_potential(case, sign):
    f, h, rep = build_cotton_soliton(case, SAMPLES, sign)
    assert rep.family_residual < 1e-9
    assert rep.corrected_residual < 1e-8
    assert h.mu == pytest.approx(rep.mu, abs=1e-9)
    assert not rep.printed_agrees
    assert min(rep.printed_residual.values()) > 1e-3


def test_cotton_printed_c3_matches_opposite_doubled_convention():
    case = CASES[2]
    f = case.f()
    pmu, phxx, _ = case.printed()
    h = Potential(pmu, phxx)
    assert verify_soliton(f, h, 0.0, "Cotton", SAMPLES, -1, "full").residual < 1e-9
    assert verify_soliton(f, h, 0.0, "Cotton", SAMPLES, 1, "pairs").residual > 1.0


def test_cotton_printed_c1_c2_depend_on_y():
    for case in CASES[:2]:
        _, _, rep = build_cotton_soliton(case, SAMPLES)
        assert rep.printed_hxx_y_variation > 1e-2
        assert rep.printed_grad_dy != 0.0


def test_cotton_build_from_scattered_samples():
    rng = np.random.default_rng(3)
    scattered = list(zip(rng.uniform(0, 1, 12), rng.uniform(-1, 1, 12)))
    _, h, rep = build_cotton_soliton(CASES[0], scattered)
    assert h.mu == pytest.approx(-(1.3**2) / 4)
    assert rep.corrected_residual < 1e-8
    assert rep.printed_hxx_y_variation > 1e-2


def test_derive_cotton_potential_rejects_non_soliton():
    with pytest.raises(InconsistencyError):
        derive_cotton_potential(E.parse("y^4"), SAMPLES)
    mu, hxx, fit, trivial = derive_cotton_potential(E.parse("x*y + x^2"), SAMPLES)
    assert trivial and mu == 0.0


@pytest.mark.parametrize("lam", [0.7, -1.2])
def test_cotton_remark(lam):
    rep = cotton_remark_report(lam)
    assert max(rep["corrected"].values()) < 1e-10
    assert rep["label"] == ("shrinking" if lam > 0 else "expanding")
    assert rep["printed"][(1, "full")] < 1e-10
    assert rep["printed"][(1, "pairs")] > 1e-3


def test_cotton_remark_printed_theta_with_constant_gamma():
    lam, g0 = 0.7, 0.3
    f = cotton_remark_metric(lam, E.const(g0))
    Xp = cotton_remark_field(lam, g0, printed=True)
    res = verify_soliton(f, Xp, lam, "Cotton", SAMPLES, 1, "full").residual
    # the printed theta carries gamma where gamma_x belongs; the leftover is exactly |gamma0|
    assert res == pytest.approx(abs(g0), rel=1e-12)
    X = cotton_remark_field(lam, g0, 1)
    assert verify_soliton(f, X, lam, "Cotton", SAMPLES, 1).residual < 1e-10


def test_homothety_search_on_exp_y():
    pts = [(x, y) for x in np.linspace(-1, 1, 5) for y in np.linspace(-1, 1, 5)]
    res = homothety_search(E.parse("exp(y)"), pts, [0.0, 0.5], [0.0, 1.0], [-0.5, 0.0, 0.5])
    assert res.best_killing < 1e-12
    assert res.best_nonkilling > 1e-2
    assert res.homotheties_found == []


def test_labels():
    assert [label(v) for v in (0.0, 1.0, -1.0)] == ["steady", "shrinking", "expanding"]

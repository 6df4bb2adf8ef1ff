import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import random_exppoly
from walker3 import expr as E
from walker3.errors import DomainError, OrderError
from walker3.jets import Jet2, eval_x, grad_eval, jet_eval, partial

seeds = st.integers(0, 2**32 - 1)
coords = st.floats(-1, 1)


@given(seeds, coords, coords)
def test_partials_match_leibniz_oracle(seed, x, y):
    F = random_exppoly(np.random.default_rng(seed))
    jet = jet_eval(F.expr(), (x, y), 6)
    for p in range(7):
        for q in range(7 - p):
            ref = F.d(p, q, x, y)
            assert jet.partial(p, q) == pytest.approx(ref, rel=1e-10, abs=1e-10)


@given(seeds, coords, coords)
def test_grad_eval_agrees_with_order_one_jet(seed, x, y):
    f = random_exppoly(np.random.default_rng(seed)).expr()
    jet = jet_eval(f, (x, y), 1)
    v, vx, vy = grad_eval(f, x, y)
    assert (v, vx, vy) == pytest.approx((jet.value, jet.partial(1, 0), jet.partial(0, 1)), rel=1e-13, abs=1e-13)


@given(st.floats(0.2, 3), st.floats(-1, 1))
def test_transcendental_identities(x, y):
    u = E.X * E.X + E.exp(E.Y)
    for g, ref in ((E.exp(E.ln(u)), u), (E.sin(u) ** 2 + E.cos(u) ** 2, E.const(1.0))):
        a, b = jet_eval(g, (x, y), 5).c, jet_eval(ref, (x, y), 5).c
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10)


def test_frozen_values():
    # d^4/dy^4 of exp(x y) at (1, 1) is x^4 e^(x y) = e
    assert partial(E.parse("exp(x*y)"), (1.0, 1.0), 0, 4) == pytest.approx(math.e, rel=1e-14)
    # d^2/dx^2 of (1-x)^-2 at 0 is 6
    assert eval_x(E.parse("(1-x)^-2"), 0.0, 2) == pytest.approx([1.0, 2.0, 6.0], rel=1e-14)
    # d^3/dx dy^2 of x^2 y^3 ln(x) at (e, 1): d/dx(6 x^2 ln x) = 12 e + 6 e
    assert partial(E.parse("x^2*y^3*ln(x)"), (math.e, 1.0), 1, 2) == pytest.approx(18 * math.e, rel=1e-13)


def test_derivative_nodes_shift_the_jet():
    f = E.parse("sin(x)*exp(2*y)")
    j = jet_eval(E.dx(E.dy(f)), (0.3, 0.1), 3)
    ref = jet_eval(f, (0.3, 0.1), 5)
    assert j.partial(1, 1) == pytest.approx(ref.partial(2, 2), rel=1e-13)


def test_errors():
    with pytest.raises(DomainError):
        jet_eval(E.parse("ln(x)"), (0.0, 0.0), 2)
    with pytest.raises(DomainError):
        grad_eval(E.parse("y^-3"), 1.0, 0.0)
    with pytest.raises(OverflowError):
        jet_eval(E.parse("exp(exp(x))"), (7.0, 0.0), 2)
    with pytest.raises(OrderError):
        jet_eval(E.X, (0, 0), 2).partial(2, 1)
    with pytest.raises(OrderError):
        partial(E.X, (0, 0), 6, 6, max_order=10)


def test_jet_arithmetic_matches_coefficients():
    a = Jet2.variable("x", 0.5, 3)
    b = Jet2.variable("y", -1.0, 3)
    assert a.order == 3 and a.value == 0.5
    assert b.partial(0, 1) == 1.0 and b.partial(1, 0) == 0.0

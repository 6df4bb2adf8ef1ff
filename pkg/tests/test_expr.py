import math

import pytest
from hypothesis import given, strategies as st

from walker3 import expr as E
from walker3.errors import DomainError, ParseError


def test_infix_parse_and_evaluate():
    f = E.parse("(1-x)^-2 * y^2")
    assert f(0.0, 1.0) == pytest.approx(1.0)
    assert f(0.5, 2.0) == pytest.approx(16.0)
    assert E.parse("2**3")(0, 0) == 8.0
    assert E.parse("-x^2")(3.0) == -9.0


def test_parameters_substitute():
    f = E.parse("eps*y^2 + k*x", {"eps": 2.0, "k": -1.0})
    assert f(1.0, 3.0) == 17.0
    with pytest.raises(ParseError):
        E.parse("eps*y^2")


@pytest.mark.parametrize("text", ["(x", "x +", "foo(x)", "x^0.5", "1 2", ""])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        E.parse(text)


def test_json_schema_both_ways():
    f = E.parse("exp(2*y) * sin(x) + ln(x)")
    assert E.loads(E.dumps(f)) == f
    node = {"op": "mul", "args": [{"op": "const", "value": 3}, {"op": "pow", "args": [{"op": "y"}], "value": 2}]}
    assert E.from_json(node)(0.0, 2.0) == 12.0
    with pytest.raises(ParseError):
        E.from_json({"op": "pow", "args": [{"op": "y"}], "value": 0.5})
    with pytest.raises(ParseError):
        E.loads('{"op": "tan", "args": [{"op": "x"}]}')


def test_domain_errors():
    with pytest.raises(DomainError):
        E.parse("ln(x)")(-1.0)
    with pytest.raises(DomainError):
        E.parse("x^-1")(0.0)


def test_derivative_nodes():
    f = E.dx(E.parse("x^3 * y"))
    assert f(2.0, 5.0) == pytest.approx(60.0)
    assert E.dy(E.dy(E.parse("sin(x*y)")))(1.0, 0.5) == pytest.approx(-math.sin(0.5))


_leaf = st.one_of(
    st.sampled_from([E.X, E.Y]),
    st.floats(-3, 3, allow_nan=False).map(E.const),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: t[0] + t[1]),
        st.tuples(children, children).map(lambda t: t[0] * t[1]),
        children.map(lambda c: -c),
        children.map(E.sin),
        children.map(E.cos),
        st.tuples(children, st.integers(0, 3)).map(lambda t: t[0] ** t[1]),
    )


exprs = st.recursive(_leaf, _extend, max_leaves=8)


@given(exprs, st.floats(-2, 2), st.floats(-2, 2))
def test_infix_round_trip_preserves_values(f, x, y):
    g = E.parse(E.to_infix(f))
    assert g(x, y) == pytest.approx(f(x, y), rel=1e-12, abs=1e-12)


@given(exprs)
def test_json_round_trip_is_identity(f):
    assert E.from_json(E.to_json(f)) == f

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from walker3 import expr as E
from walker3.classify import nb_beta, pc_alpha, pc_parameter
from walker3.errors import DivisionError, NotNormalizedError, SignError
from walker3.frames import (
    MODEL_GRAM,
    FrameCoeffs,
    ModelRecord,
    frame_0,
    frame_1,
    invariant_ratio,
    kv_frame,
    kv_weighted_slots,
    pc_recursion_constants,
    match_model,
    model_invariants,
)
from walker3.metric import metric_at


def _nb(b, alpha=E.parse("2 + sin(x)"), gamma=E.parse("x^2")):
    return E.const(b**-2) * alpha * E.exp(E.const(b) * E.Y) + E.Y * nb_beta(alpha, b) + gamma


@given(st.floats(0.1, 2), st.floats(-3, 3), st.floats(-1, 1), st.floats(-1, 1))
def test_normalized_frames_are_pseudo_orthonormal(a11, a12, x, y):
    f = E.parse("x*y + exp(y)")
    fr = FrameCoeffs.normalized(a11, a12)
    m = metric_at(f, (x, y))
    np.testing.assert_allclose(fr.gram(m.g, f(x, y)), MODEL_GRAM, atol=1e-10)


@pytest.mark.parametrize("b", [1.0, -0.5, 2.0])
def test_nb_family_realizes_n2(b):
    f = _nb(b)
    for p in [(0.1, -0.3), (0.7, 0.4)]:
        rec = model_invariants(f, p, frame_1(f, p), 2)
        np.testing.assert_allclose(rec.as_vector(), [1, 0, b, -1, 0, 0, b * b], atol=1e-9)
        tag = match_model(rec)
        assert tag.name == "N2" and tag.parameter == pytest.approx(b)


def test_pc_family_realizes_p2_and_higher_constants():
    f = E.const(0.5) * E.power(E.Y, 2) * pc_alpha(2.0, -1.0) + E.Y * E.parse("sin(x)")
    p = (0.3, 0.2)
    c = pc_parameter(2.0, -1.0, p[0])
    rec = model_invariants(f, p, frame_0(f, p), 2)
    assert match_model(rec).name == "P2"
    assert rec.d2R[0] == pytest.approx(1.5 * c * c, rel=1e-12)
    assert pc_recursion_constants(c, 2) == pytest.approx([1.0, c, 1.5 * c * c])


def test_match_model_branches():
    assert match_model(ModelRecord(0, 1.0)).name == "A0"
    assert match_model(ModelRecord(1, 1.0, (0.0, 0.0))).name == "CW"
    assert str(match_model(ModelRecord(1, 1.0, (0.0, 2.0)))) == "N1(2)"
    assert match_model(ModelRecord(1, 1.0, (0.5, 0.0))).name == "P1"
    assert match_model(ModelRecord(2, 1.0, (0.0, 2.0), (-1, 0, 0, 3.0))).name == "None"
    with pytest.raises(NotNormalizedError):
        match_model(ModelRecord(0, 2.0))


@given(st.floats(0.5, 2), st.floats(0.1, 1), st.floats(-1, 1))
def test_kv_weighted_slots(a, x, y):
    f = E.power(E.Y + E.const(2.0), 3) * (E.X + E.const(a))
    assert kv_weighted_slots(f, (x, y)) == pytest.approx((1.0, 0.0, 1.0), abs=1e-9)
    lam, _ = kv_frame(f, (x, y))
    assert lam == pytest.approx(invariant_ratio(f, (x, y)))


def test_frame_errors():
    with pytest.raises(SignError):
        frame_0(E.parse("-y^2"), (0, 1))
    with pytest.raises(DivisionError):
        frame_1(E.parse("y^2"), (0, 1))
    with pytest.raises(SignError):
        kv_frame(E.parse("-y^3 + y^2"), (0, 0.1))


def test_pc_recursion_constants_frozen():
    c = math.sqrt(2)
    assert pc_recursion_constants(c, 6)[3] == pytest.approx(6 * math.sqrt(2), rel=1e-15)
    assert pc_recursion_constants(c, 6)[6] == pytest.approx(630.0, rel=1e-14)

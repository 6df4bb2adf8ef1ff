"""Truncated bivariate Taylor (jet) arithmetic over :class:`~walker3.expr.Expr2` trees."""

from __future__ import annotations

import math

import numpy as np

from . import _jetops as J
from .errors import DomainError, OrderError
from .expr import Expr2

DEFAULT_ORDER = 10


class Jet2:
    """Normalized Taylor coefficients ``c[i, j] = d^(i+j) f / dx^i dy^j / (i! j!)``.

    Instances are treated as immutable.
    """

    __slots__ = ("c",)

    def __init__(self, c):
        c = np.asarray(c, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("jet coefficients must be a square array")
        self.c = c

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @classmethod
    def constant(cls, v: float, order: int) -> "Jet2":
        c = np.zeros((order + 1, order + 1))
        c[0, 0] = v
        return cls(c)

    @classmethod
    def variable(cls, which: str, at: float, order: int) -> "Jet2":
        c = np.zeros((order + 1, order + 1))
        c[0, 0] = at
        if order >= 1:
            c[(1, 0) if which == "x" else (0, 1)] = 1.0
        return cls(c)

    @property
    def value(self) -> float:
        return float(self.c[0, 0])

    def partial(self, i: int, j: int) -> float:
        if i + j > self.order:
            raise OrderError(f"partial of order {i + j} from a jet of order {self.order}")
        return float(self.c[i, j]) * math.factorial(i) * math.factorial(j)

    def dx(self) -> "Jet2":
        return Jet2(J.dx(self.c))

    def dy(self) -> "Jet2":
        return Jet2(J.dy(self.c))

    def truncate(self, m: int) -> "Jet2":
        return Jet2(J.truncate(self.c, m))

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.c + other.c)
        out = self.c.copy()
        out[0, 0] += other
        return Jet2(out)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet2):
            return Jet2(J.mul(self.c, other.c))
        return Jet2(self.c * other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Jet2(order={self.order}, value={self.value!r})"

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.c)))


def _compose(a: np.ndarray, coeffs) -> np.ndarray:
    """Evaluate sum_n coeffs[n] * (a - a0)^n by Horner's rule."""
    n = a.shape[0]
    d = a.copy()
    d[0, 0] = 0.0
    out = np.zeros_like(a)
    out[0, 0] = coeffs[-1]
    for cn in reversed(coeffs[:-1]):
        out = J.mul(out, d)
        out[0, 0] += cn
    out[~J.tri_mask(n)] = 0.0
    return out


def _int_power(a: np.ndarray, p: int) -> np.ndarray:
    result = np.zeros_like(a)
    result[0, 0] = 1.0
    base = a
    while p:
        if p & 1:
            result = J.mul(result, base)
        p >>= 1
        if p:
            base = J.mul(base, base)
    return result


def _primitive(kind: str, a: np.ndarray, exponent: int = 0) -> np.ndarray:
    a0 = float(a[0, 0])
    K = a.shape[0] - 1
    if kind == "exp":
        e0 = math.exp(a0)
        coeffs = [e0 / math.factorial(n) for n in range(K + 1)]
    elif kind == "ln":
        if not a0 > 0.0:
            raise DomainError(f"ln of non-positive value {a0}")
        coeffs = [math.log(a0)] + [(-1.0) ** (n + 1) / (n * a0**n) for n in range(1, K + 1)]
    elif kind in ("sin", "cos"):
        s, c = math.sin(a0), math.cos(a0)
        cycle = [s, c, -s, -c] if kind == "sin" else [c, -s, -c, s]
        coeffs = [cycle[n % 4] / math.factorial(n) for n in range(K + 1)]
    elif kind == "pow":
        if exponent >= 0:
            return _int_power(a, exponent)
        if a0 == 0.0:
            raise DomainError("negative power of zero")
        inv = _compose(a, [(-1.0) ** n / a0 ** (n + 1) for n in range(K + 1)])
        return _int_power(inv, -exponent)
    else:
        raise ValueError(kind)
    return _compose(a, coeffs)


def _eval(e: Expr2, x0: float, y0: float, order: int, memo: dict) -> np.ndarray:
    key = (id(e), order)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    k = e.kind
    n = order + 1
    if k == "const":
        out = np.zeros((n, n))
        out[0, 0] = e.value
    elif k in ("x", "y"):
        out = Jet2.variable(k, x0 if k == "x" else y0, order).c
    elif k == "add":
        out = sum(_eval(a, x0, y0, order, memo) for a in e.args)
    elif k == "mul":
        parts = [_eval(a, x0, y0, order, memo) for a in e.args]
        out = parts[0]
        for p in parts[1:]:
            out = J.mul(out, p)
    elif k == "neg":
        out = -_eval(e.args[0], x0, y0, order, memo)
    elif k == "dx":
        out = J.dx(_eval(e.args[0], x0, y0, order + 1, memo))
    elif k == "dy":
        out = J.dy(_eval(e.args[0], x0, y0, order + 1, memo))
    else:
        inner = _eval(e.args[0], x0, y0, order, memo)
        out = _primitive(k, inner, int(e.value) if k == "pow" else 0)
    # keep e alive so id() stays unique for the lifetime of memo
    memo[key] = (e, out)
    return out


def jet_eval(expr: Expr2, point, order: int = DEFAULT_ORDER) -> Jet2:
    """Order-``order`` jet of ``expr`` at ``point = (x, y)``.

    Raises :class:`DomainError` when a primitive is undefined at the point and
    :class:`OverflowError` when a coefficient is not finite.
    """
    if order < 0:
        raise OrderError("jet order must be non-negative")
    x0, y0 = float(point[0]), float(point[1])
    with np.errstate(over="ignore", invalid="ignore"):
        c = _eval(expr, x0, y0, int(order), {})
    jet = Jet2(np.array(c, dtype=float, copy=True))
    if not jet.is_finite():
        raise OverflowError(f"non-finite jet coefficient for {expr} at {point}")
    return jet


def partial(expr: Expr2, point, i: int, j: int, max_order: int = DEFAULT_ORDER) -> float:
    """``d^(i+j) expr / dx^i dy^j`` at ``point``."""
    if i < 0 or j < 0:
        raise OrderError("derivative orders must be non-negative")
    if i + j > max_order:
        raise OrderError(f"order {i + j} exceeds the configured maximum {max_order}")
    return jet_eval(expr, point, i + j).partial(i, j)


def eval_x(expr: Expr2, x: float, order: int = 2) -> list:
    """Value and the first ``order`` x-derivatives of a function of x alone."""
    jet = jet_eval(expr, (x, 0.0), order)
    return [jet.partial(i, 0) for i in range(order + 1)]


def _dual(e: Expr2, x0: float, y0: float, memo: dict):
    hit = memo.get(id(e))
    if hit is not None:
        return hit[1]
    k = e.kind
    if k == "const":
        out = (e.value, 0.0, 0.0)
    elif k == "x":
        out = (x0, 1.0, 0.0)
    elif k == "y":
        out = (y0, 0.0, 1.0)
    elif k == "add":
        v = vx = vy = 0.0
        for a in e.args:
            av, ax, ay = _dual(a, x0, y0, memo)
            v, vx, vy = v + av, vx + ax, vy + ay
        out = (v, vx, vy)
    elif k == "mul":
        v, vx, vy = 1.0, 0.0, 0.0
        for a in e.args:
            av, ax, ay = _dual(a, x0, y0, memo)
            v, vx, vy = v * av, vx * av + v * ax, vy * av + v * ay
        out = (v, vx, vy)
    elif k == "neg":
        v, vx, vy = _dual(e.args[0], x0, y0, memo)
        out = (-v, -vx, -vy)
    elif k in ("dx", "dy"):
        c = _eval(e, x0, y0, 1, {})
        out = (float(c[0, 0]), float(c[1, 0]), float(c[0, 1]))
    else:
        v, vx, vy = _dual(e.args[0], x0, y0, memo)
        if k == "exp":
            w = math.exp(v)
            d = w
        elif k == "ln":
            if not v > 0.0:
                raise DomainError(f"ln of non-positive value {v}")
            w, d = math.log(v), 1.0 / v
        elif k == "sin":
            w, d = math.sin(v), math.cos(v)
        elif k == "cos":
            w, d = math.cos(v), -math.sin(v)
        else:
            n = int(e.value)
            if v == 0.0 and n < 0:
                raise DomainError("negative power of zero")
            w = v**n
            d = n * v ** (n - 1) if n != 0 else 0.0
        out = (w, d * vx, d * vy)
    memo[id(e)] = (e, out)
    return out


def grad_eval(expr: Expr2, x: float, y: float):
    """``(f, f_x, f_y)`` at a point by first-order forward differentiation.

    Same values as an order-1 :func:`jet_eval`, without the array overhead;
    meant for ODE right-hand sides.
    """
    try:
        out = _dual(expr, float(x), float(y), {})
    except OverflowError as exc:
        raise OverflowError(f"overflow evaluating {expr} at {(x, y)}") from exc
    if not all(math.isfinite(v) for v in out):
        raise OverflowError(f"non-finite value for {expr} at {(x, y)}")
    return out

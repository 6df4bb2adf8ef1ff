"""Expression trees for the metric function f(x, y) and coefficient functions of x.

Trees are built with ordinary Python operators::

    >>> from walker3.expr import X, Y, exp
    >>> f = 0.25 * exp(2 * Y) + X * Y
    >>> f(0.0, 0.0)
    0.25

or parsed from infix text (``parse("(1-x)^-2 * y^2")``) or from the JSON
schema ``{"op": kind, "args": [...], "value": number}``.

Node kinds: ``const``, ``x``, ``y``, ``add``, ``neg``, ``mul``, ``pow``
(integer exponent in ``value``, may be negative), ``exp``, ``ln``, ``sin``,
``cos``, and the derivative nodes ``dx``/``dy``.  The derivative nodes are
evaluated exactly by the jet machinery and let formulas such as
``beta = (alpha'' - alpha'^2/alpha) / (b alpha)`` be written without any
symbolic differentiation.
"""

from __future__ import annotations

import json
import math
import numbers
import re
from dataclasses import dataclass, field

from .errors import DomainError, ParseError

KINDS = ("const", "x", "y", "add", "neg", "mul", "pow", "exp", "ln", "sin", "cos", "dx", "dy")
_UNARY = ("neg", "exp", "ln", "sin", "cos", "dx", "dy")


@dataclass(frozen=True, eq=True)
class Expr2:
    kind: str
    args: tuple = ()
    value: float = 0.0
    _hash: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParseError(f"unknown node kind {self.kind!r}")
        if self.kind in _UNARY and len(self.args) != 1:
            raise ParseError(f"{self.kind} takes exactly one argument")
        if self.kind in ("add", "mul") and len(self.args) < 1:
            raise ParseError(f"{self.kind} needs at least one argument")
        if self.kind == "pow":
            if len(self.args) != 1:
                raise ParseError("pow takes exactly one argument")
            if float(self.value) != int(self.value):
                raise ParseError("pow exponent must be an integer")
        object.__setattr__(self, "_hash", hash((self.kind, self.args, self.value)))

    def __hash__(self):
        return self._hash

    # construction sugar
    def __add__(self, other):
        return add(self, lift(other))

    def __radd__(self, other):
        return add(lift(other), self)

    def __sub__(self, other):
        return add(self, neg(lift(other)))

    def __rsub__(self, other):
        return add(lift(other), neg(self))

    def __mul__(self, other):
        return mul(self, lift(other))

    def __rmul__(self, other):
        return mul(lift(other), self)

    def __truediv__(self, other):
        other = lift(other)
        if other.kind == "const":
            if other.value == 0:
                raise ZeroDivisionError("division by constant zero")
            return mul(self, const(1.0 / other.value))
        return mul(self, power(other, -1))

    def __rtruediv__(self, other):
        return mul(lift(other), power(self, -1))

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        if isinstance(n, Expr2):
            if n.kind != "const":
                raise ParseError("exponent must be a constant integer")
            n = n.value
        if float(n) != int(n):
            raise ParseError(f"exponent must be an integer, got {n}")
        return power(self, int(n))

    def __call__(self, x, y=0.0):
        return evaluate(self, x, y)

    def __str__(self):
        return to_infix(self)

    @property
    def is_constant(self) -> bool:
        if self.kind == "const":
            return True
        if self.kind in ("x", "y"):
            return False
        return all(a.is_constant for a in self.args)

    def depends_on_y(self) -> bool:
        if self.kind == "y":
            return True
        return any(a.depends_on_y() for a in self.args)


def lift(v) -> Expr2:
    if isinstance(v, Expr2):
        return v
    if isinstance(v, numbers.Real):
        return const(float(v))
    raise TypeError(f"cannot use {type(v).__name__} in an expression")


def const(v: float) -> Expr2:
    return Expr2("const", (), float(v))


X = Expr2("x")
Y = Expr2("y")


def add(*terms) -> Expr2:
    terms = [lift(t) for t in terms]
    flat = []
    for t in terms:
        flat.extend(t.args if t.kind == "add" else (t,))
    consts = [t.value for t in flat if t.kind == "const"]
    rest = [t for t in flat if t.kind != "const"]
    c = math.fsum(consts)
    if c != 0.0 or not rest:
        rest.append(const(c))
    return rest[0] if len(rest) == 1 else Expr2("add", tuple(rest))


def mul(*factors) -> Expr2:
    factors = [lift(t) for t in factors]
    flat = []
    for t in factors:
        flat.extend(t.args if t.kind == "mul" else (t,))
    c = 1.0
    rest = []
    for t in flat:
        if t.kind == "const":
            c *= t.value
        else:
            rest.append(t)
    if c == 0.0:
        return const(0.0)
    if c != 1.0 or not rest:
        rest.insert(0, const(c))
    return rest[0] if len(rest) == 1 else Expr2("mul", tuple(rest))


def neg(e) -> Expr2:
    e = lift(e)
    if e.kind == "const":
        return const(-e.value)
    if e.kind == "neg":
        return e.args[0]
    return Expr2("neg", (e,))


def power(e, n: int) -> Expr2:
    e = lift(e)
    n = int(n)
    if n == 1:
        return e
    if n == 0:
        return const(1.0)
    if e.kind == "const" and (e.value != 0 or n > 0):
        return const(e.value**n)
    return Expr2("pow", (e,), float(n))


def _unary(kind):
    def build(e) -> Expr2:
        return Expr2(kind, (lift(e),))

    build.__name__ = kind
    return build


exp = _unary("exp")
ln = _unary("ln")
sin = _unary("sin")
cos = _unary("cos")
dx = _unary("dx")
dy = _unary("dy")
log = ln


# ---------------------------------------------------------------- evaluation


def evaluate(e: Expr2, x: float, y: float = 0.0) -> float:
    """Point value by plain float arithmetic.

    Derivative nodes are delegated to the jet evaluator.
    """
    k = e.kind
    if k == "const":
        return e.value
    if k == "x":
        return float(x)
    if k == "y":
        return float(y)
    if k == "add":
        return math.fsum(evaluate(a, x, y) for a in e.args)
    if k == "mul":
        out = 1.0
        for a in e.args:
            out *= evaluate(a, x, y)
        return out
    if k == "neg":
        return -evaluate(e.args[0], x, y)
    if k in ("dx", "dy"):
        from .jets import jet_eval

        return jet_eval(e, (x, y), 0).c[0, 0]
    v = evaluate(e.args[0], x, y)
    if k == "pow":
        if v == 0.0 and e.value < 0:
            raise DomainError("negative power of zero")
        return v ** int(e.value)
    if k == "exp":
        return math.exp(v)
    if k == "ln":
        if v <= 0.0:
            raise DomainError(f"ln of non-positive value {v}")
        return math.log(v)
    if k == "sin":
        return math.sin(v)
    if k == "cos":
        return math.cos(v)
    raise ParseError(f"unknown node kind {k!r}")


# ---------------------------------------------------------------- JSON


def to_json(e: Expr2) -> dict:
    node = {"op": e.kind}
    if e.args:
        node["args"] = [to_json(a) for a in e.args]
    if e.kind in ("const", "pow"):
        node["value"] = e.value if e.kind == "const" else int(e.value)
    return node


def from_json(node) -> Expr2:
    if isinstance(node, numbers.Real) and not isinstance(node, bool):
        return const(node)
    if isinstance(node, str):
        return parse(node)
    if not isinstance(node, dict) or "op" not in node:
        raise ParseError(f"malformed expression node: {node!r}")
    op = node["op"]
    if op == "log":
        op = "ln"
    if op not in KINDS:
        raise ParseError(f"unknown op {op!r}")
    args = tuple(from_json(a) for a in node.get("args", []))
    if op == "const":
        if "value" not in node:
            raise ParseError("const node needs a value")
        return const(node["value"])
    if op in ("x", "y"):
        return X if op == "x" else Y
    if op == "pow":
        v = node.get("value")
        if v is None or float(v) != int(v):
            raise ParseError("pow node needs an integer value")
        return Expr2("pow", args, float(int(v)))
    return Expr2(op, args)


def dumps(e: Expr2) -> str:
    return json.dumps(to_json(e))


def loads(text: str, params=None) -> Expr2:
    """Accept either the JSON schema or infix text."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            node = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return from_json(node)
    return parse(stripped, params)


def to_infix(e: Expr2) -> str:
    k = e.kind
    if k == "const":
        return repr(e.value)
    if k in ("x", "y"):
        return k
    if k == "add":
        return "(" + " + ".join(to_infix(a) for a in e.args) + ")"
    if k == "mul":
        return "(" + "*".join(to_infix(a) for a in e.args) + ")"
    if k == "neg":
        return "(-" + to_infix(e.args[0]) + ")"
    if k == "pow":
        return f"({to_infix(e.args[0])})^({int(e.value)})"
    return f"{k}({to_infix(e.args[0])})"


# ---------------------------------------------------------------- infix parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^(),]))"
)
_FUNCS = {"exp": exp, "ln": ln, "log": ln, "sin": sin, "cos": cos, "dx": dx, "dy": dy}


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        kind = m.lastgroup
        tok = m.group(kind)
        if kind == "op" and tok == "**":
            tok = "^"
        out.append((kind, tok))
    return out


class _Parser:
    def __init__(self, text, params):
        self.toks = _tokenize(text)
        self.i = 0
        self.params = {"pi": math.pi}
        self.params.update(params or {})

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, expected=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of expression")
        if expected is not None and tok[1] != expected:
            raise ParseError(f"expected {expected!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            e = e * rhs if op == "*" else e / rhs
        return e

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            exponent = self.unary()
            if not exponent.is_constant or exponent.kind != "const":
                raise ParseError("exponent must be a constant")
            if float(exponent.value) != int(exponent.value):
                raise ParseError(f"non-integer exponent {exponent.value}")
            return base ** int(exponent.value)
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "num":
            return const(float(tok))
        if kind == "name":
            if tok in _FUNCS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return _FUNCS[tok](arg)
            if tok == "x":
                return X
            if tok == "y":
                return Y
            if tok in self.params:
                return const(float(self.params[tok]))
            raise ParseError(f"unknown name {tok!r}")
        if tok == "(":
            e = self.expr()
            self.take(")")
            return e
        raise ParseError(f"unexpected token {tok!r}")


def parse(text: str, params=None) -> Expr2:
    """Parse infix text such as ``"eps*y^2"`` with ``params={"eps": 1.0}``."""
    return _Parser(text, params).parse()

"""Gradient Ricci and Cotton solitons, Lie derivatives of g_f and homothetic fields.

A soliton is 𝓛_X g + T = lam g with T = Ric or T = C (the (0,2) Cotton
tensor).  For X = grad h this reads 2 Hes h + T = lam g.  On g_f the only
entry of 2 Hes h + T that can fail for h = mu y + hh(x) is

    xx:  2 (hh_xx - mu f_y) + T_xx,

with Ric_xx = f_yy and C_xx = -(s/2) f_yyy, s the Cotton sign flag.

Homothetic fields use the ansatz

    X = (a x + abar) d_x + (mu y / 2 + U) d_y + (T - y U_x + (mu - a) xt) d_xt,

for which 𝓛_X g - mu g vanishes except in the xx slot, where it equals -2 times

    (mu y / 2 + U) f_y + (a x + abar) f_x - T_x + y U_xx - (mu - 2a) f.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import expr as E
from .errors import BuildError, InconsistencyError
from .expr import Expr2
from .integrate import solve_at
from .jets import eval_x, grad_eval, jet_eval
from .metric import cotton

IU = np.triu_indices(3)


def _g(fv: float) -> np.ndarray:
    return np.array([[-2.0 * fv, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])


def _point3(point):
    return (float(point[0]), float(point[1]), float(point[2]) if len(point) > 2 else 0.0)


# ---------------------------------------------------------------- potentials


@dataclass(frozen=True)
class Potential:
    """h = mu y + hh(x) with hh_xx given; hh(x0) = hh_x(x0) = 0."""

    mu: float
    hxx: Expr2
    x0: float = 0.0
    tol: float = 1e-12

    def hhat(self, xs) -> np.ndarray:
        """Rows (hh, hh_x, hh_xx) at the requested x."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        rhs = lambda x, s: np.array([s[1], E.evaluate(self.hxx, x)])
        table = solve_at(rhs, self.x0, (0.0, 0.0), xs, self.tol, self.tol)
        return np.array([[*table[float(x)], E.evaluate(self.hxx, x)] for x in xs])

    def derivatives(self, point, need_first: bool = True):
        """(dh, ddh): coordinate gradient (3,) and second partials (3, 3)."""
        x = float(point[0])
        hxx = E.evaluate(self.hxx, x)
        hx = self.hhat([x])[0, 1] if need_first else 0.0
        dd = np.zeros((3, 3))
        dd[0, 0] = hxx
        return np.array([hx, self.mu, 0.0]), dd


@dataclass(frozen=True)
class FieldPotential:
    """An arbitrary potential h(x, y) given as an expression."""

    h: Expr2

    def derivatives(self, point, need_first: bool = True):
        jet = jet_eval(self.h, (point[0], point[1]), 2)
        dh = np.array([jet.partial(1, 0), jet.partial(0, 1), 0.0])
        dd = np.zeros((3, 3))
        dd[0, 0] = jet.partial(2, 0)
        dd[0, 1] = dd[1, 0] = jet.partial(1, 1)
        dd[1, 1] = jet.partial(0, 2)
        return dh, dd


# -------------------------------------------------------------- vector fields


@dataclass(frozen=True)
class VectorFieldAnsatz:
    """(a x + abar) d_x + (mu y/2 + U) d_y + (T - y U_x + k xt) d_xt.

    k = mu - a.  ``printed_xt_coeff=True`` uses k = mu - abar instead, which
    breaks the (x, xt) entry of 𝓛_X g = mu g unless a = abar.
    """

    a: float = 0.0
    abar: float = 0.0
    mu: float = 0.0
    U: Expr2 = E.const(0.0)
    T: Expr2 = E.const(0.0)
    printed_xt_coeff: bool = False

    @property
    def k(self) -> float:
        return self.mu - (self.abar if self.printed_xt_coeff else self.a)

    def at(self, point):
        """Components X^c and D[c, a] = d_a X^c."""
        x, y, xt = _point3(point)
        U, Ux, Uxx = eval_x(self.U, x, 2)
        T, Tx = eval_x(self.T, x, 1)
        X = np.array([self.a * x + self.abar, 0.5 * self.mu * y + U, T - y * Ux + self.k * xt])
        D = np.array(
            [
                [self.a, 0.0, 0.0],
                [Ux, 0.5 * self.mu, 0.0],
                [Tx - y * Uxx, -Ux, self.k],
            ]
        )
        return X, D

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "abar": self.abar,
            "mu": self.mu,
            "U": E.to_json(self.U),
            "T": E.to_json(self.T),
            "xt_coefficient": self.k,
        }


@dataclass(frozen=True)
class GradientField:
    """grad h = g^-1 dh on g_f."""

    h: object  # Potential or FieldPotential
    f: Expr2

    def at(self, point):
        x, y, _ = _point3(point)
        dh, dd = self.h.derivatives((x, y))
        fv = grad_eval(self.f, x, y)[0]
        ginv = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 2.0 * fv]])
        # d_a (g^cb dh_b) = g^cb dd_ab + (d_a g^cb) dh_b; the second term carries
        # d_a g^{xt xt} = 2 f_a times dh_xt, which is zero
        return ginv @ dh, ginv @ dd


@dataclass(frozen=True)
class ZeroField:
    def at(self, point):
        return np.zeros(3), np.zeros((3, 3))


# --------------------------------------------------------------- operators


def hessian(h, f: Expr2, point) -> np.ndarray:
    """Hes(h)_ab = d_a d_b h - Gamma^c_ab d_c h."""
    x, y = float(point[0]), float(point[1])
    dh, dd = h.derivatives((x, y), need_first=False) if isinstance(h, Potential) else h.derivatives((x, y))
    _, fx, fy = grad_eval(f, x, y)
    H = dd.copy()
    # Gamma^xt_xx = -f_x, Gamma^y_xx = f_y, Gamma^xt_xy = -f_y
    H[0, 0] -= fy * dh[1] - fx * dh[2]
    H[0, 1] += fy * dh[2]
    H[1, 0] += fy * dh[2]
    return H


def lie_metric(X, f: Expr2, point) -> np.ndarray:
    """(𝓛_X g)_ab = X^c d_c g_ab + d_a X^c g_cb + d_b X^c g_ac."""
    x, y = float(point[0]), float(point[1])
    fv, fx, fy = grad_eval(f, x, y)
    Xv, D = X.at(point)
    g = _g(fv)
    L = D.T @ g + g @ D
    L[0, 0] += -2.0 * (Xv[0] * fx + Xv[1] * fy)
    return L


def ricci_xx(f: Expr2, point) -> np.ndarray:
    """Ricci tensor: the only entry is Ric_xx = f_yy."""
    R = np.zeros((3, 3))
    R[0, 0] = jet_eval(f, point, 2).partial(0, 2)
    return R


def cotton_tensor(f: Expr2, point, sign: int = 1, normalization: str = "pairs") -> np.ndarray:
    return cotton(f, point, sign, normalization).c2


# -------------------------------------------------------------- certificates


def label(lam: float) -> str:
    return "steady" if lam == 0.0 else ("shrinking" if lam > 0.0 else "expanding")


@dataclass
class SolitonCertificate:
    kind: str  # Ricci or Cotton
    lam: float
    residual: float
    samples: int
    cotton_sign: Optional[int] = None

    @property
    def label(self) -> str:
        return label(self.lam)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "lambda": self.lam, "label": self.label, "residual": self.residual, "samples": self.samples}
        if self.cotton_sign is not None:
            out["cotton_sign"] = self.cotton_sign
        return out


def _as_field(X_or_h, f):
    if isinstance(X_or_h, (Potential, FieldPotential)):
        return GradientField(X_or_h, f)
    if X_or_h is None:
        return ZeroField()
    return X_or_h


def soliton_tensor(
    f, X_or_h, lam: float, kind: str, point, cotton_sign: int = 1, normalization: str = "pairs"
) -> np.ndarray:
    """𝓛_X g + (Ric or C) - lam g at a point."""
    X = _as_field(X_or_h, f)
    if kind == "Ricci":
        T = ricci_xx(f, point)
    elif kind == "Cotton":
        T = cotton_tensor(f, point, cotton_sign, normalization)
    else:
        raise ValueError(f"kind must be Ricci or Cotton, not {kind!r}")
    return lie_metric(X, f, point) + T - lam * _g(grad_eval(f, point[0], point[1])[0])


def verify_soliton(
    f: Expr2, X_or_h, lam: float, kind: str, samples, cotton_sign: int = 1, normalization: str = "pairs"
) -> SolitonCertificate:
    samples = np.asarray(samples, dtype=float).reshape(len(samples), -1)
    worst = 0.0
    for p in samples:
        T = soliton_tensor(f, X_or_h, lam, kind, p, cotton_sign, normalization)
        worst = max(worst, float(np.max(np.abs(T[IU]))))
    return SolitonCertificate(kind, float(lam), worst, len(samples), cotton_sign if kind == "Cotton" else None)


# ------------------------------------------------------------ Ricci builders


@dataclass(frozen=True)
class RicciCase:
    case: str  # R1 or R2
    alpha: Expr2
    beta: Expr2
    gamma: Expr2
    kappa: float = 0.0


def build_ricci_soliton(case: RicciCase, samples=None, tol: float = 1e-8):
    """(f, h) for the two gradient Ricci soliton families.

    R1: f = kappa^-2 e^(kappa y) alpha + y beta + gamma, h = (kappa/2) y + hh, hh_xx = (kappa/2) beta.
    R2: f = y^2 alpha + y beta + gamma, h = hh, hh_xx = -alpha(x).
    Both are steady; the build is checked on ``samples`` (default: a 5 x 5 grid on [0,1]^2).
    """
    al, be, ga = case.alpha, case.beta, case.gamma
    if case.case == "R1":
        k = case.kappa
        if k == 0.0:
            raise BuildError("R1 needs kappa != 0")
        f = E.const(1.0 / (k * k)) * E.exp(E.const(k) * E.Y) * al + E.Y * be + ga
        h = Potential(k / 2.0, E.const(k / 2.0) * be)
    elif case.case == "R2":
        f = E.power(E.Y, 2) * al + E.Y * be + ga
        h = Potential(0.0, -al)
    else:
        raise ValueError(f"unknown Ricci case {case.case!r}")
    if samples is None:
        samples = [(x, y) for x in np.linspace(0, 1, 5) for y in np.linspace(0, 1, 5)]
    cert = verify_soliton(f, h, 0.0, "Ricci", samples)
    if not cert.residual < tol:
        raise BuildError(f"Ricci soliton residual {cert.residual:.3e} exceeds {tol:.1e}")
    return f, h


# ----------------------------------------------------------- Cotton builders


@dataclass(frozen=True)
class CottonCase:
    case: str  # C1, C2, C3
    alpha1: Expr2
    alpha2: Expr2
    beta: Expr2
    gamma: Expr2
    kappa: float = 0.0

    def f(self) -> Expr2:
        a1, a2, be, ga = self.alpha1, self.alpha2, self.beta, self.gamma
        k = self.kappa
        if self.case in ("C1", "C2") and k == 0.0:
            raise BuildError(f"{self.case} needs kappa != 0")
        lin = E.Y * be + ga
        if self.case == "C1":
            ky = E.const(k) * E.Y
            return E.const(1.0 / k**2) * (E.exp(ky) * a1 + E.exp(-ky) * a2) + lin
        if self.case == "C2":
            ky = E.const(k) * E.Y
            return E.const(-1.0 / k**2) * (E.cos(ky) * a1 + E.sin(ky) * a2) + lin
        if self.case == "C3":
            return E.power(E.Y, 3) * a1 + E.power(E.Y, 2) * a2 + lin
        raise ValueError(f"unknown Cotton case {self.case!r}")

    def family_constant(self) -> float:
        """c with f_yyyy = c f_yy: kappa^2, -kappa^2 or 0."""
        return {"C1": self.kappa**2, "C2": -self.kappa**2, "C3": 0.0}[self.case]

    def corrected(self, sign: int) -> tuple:
        """(mu, hh_xx expression) closing 2 Hes h + C = 0 under Cotton sign ``sign``."""
        k, s = self.kappa, sign
        if self.case == "C1":
            return -s * k * k / 4.0, E.const(-s * k * k / 4.0) * self.beta
        if self.case == "C2":
            return s * k * k / 4.0, E.const(s * k * k / 4.0) * self.beta
        return 0.0, E.const(1.5 * s) * self.alpha1

    def printed(self):
        """Printed potential data: (mu, hh_xx(x, y) as an expression in x and y, grad d_y coefficient)."""
        k = self.kappa
        if self.case == "C1":
            ky = E.const(k) * E.Y
            hxx = E.const(k / 2) * (E.exp(ky) * self.alpha1 - E.exp(-ky) * self.alpha2 + E.const(2 * k) * self.beta)
            return k / 2.0, hxx, k * k
        if self.case == "C2":
            ky = E.const(k) * E.Y
            beta_at_y = _substitute_x_by_y(self.beta)
            hxx = E.const(k / 2) * (E.cos(ky) - E.sin(ky) - E.const(2 * k) * beta_at_y)
            return -k / 2.0, hxx, -k * k
        return 0.0, E.const(-3.0) * self.alpha1, 0.0


def _substitute_x_by_y(e: Expr2) -> Expr2:
    if e.kind == "x":
        return E.Y
    if not e.args:
        return e
    return Expr2(e.kind, tuple(_substitute_x_by_y(a) for a in e.args), e.value)


@dataclass
class CottonReport:
    case: str
    cotton_sign: int
    family_residual: float  # max |f_yyyy - c f_yy|
    mu: float  # derived from the tensor equation
    hxx_fit_residual: float  # closure of the least-squares fit
    corrected_mu: float
    corrected_residual: float  # soliton residual with the corrected potential
    printed_mu: float
    printed_hxx_y_variation: float  # > 0 means the printed hh_xx depends on y
    printed_hxx_deviation: float  # max |printed - derived| hh_xx over samples
    printed_grad_dy: float
    printed_residual: dict = field(default_factory=dict)  # sign -> soliton residual with printed potential
    trivial: bool = False

    @property
    def printed_agrees(self) -> bool:
        return self.printed_hxx_deviation < 1e-8 and abs(self.printed_mu - self.mu) < 1e-8

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["printed_residual"] = {str(k): v for k, v in self.printed_residual.items()}
        out["printed_agrees"] = self.printed_agrees
        return out


def _default_samples():
    return [(x, y) for x in np.linspace(0.1, 0.9, 5) for y in np.linspace(-0.5, 0.5, 5)]


def with_partners(samples, dy: float = 0.5) -> list:
    """The samples plus (x, y + dy) for each, so every x is seen at two heights.

    hh_xx is one unknown per x; a lone sample at some x cannot separate it
    from the mu f_y term.
    """
    out = [tuple(map(float, p)) for p in samples]
    seen = set(out)
    for x, y in list(out):
        q = (x, y + dy)
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def derive_cotton_potential(f: Expr2, samples, sign: int = 1, tol: float = 1e-8):
    """Least-squares (mu, hh_xx(x_i)) from 2 (hh_xx - mu f_y) + C_xx = 0 on the samples.

    hh_xx gets one unknown per distinct x.  Raises :class:`InconsistencyError`
    when no y-independent hh_xx closes the equation.
    Returns ``(mu, {x: hh_xx}, fit_residual, trivial)``; ``trivial`` means f_yy
    vanishes on the samples, in which case mu = 0 and hh_xx = 0.
    """
    samples = [tuple(map(float, p)) for p in samples]
    xs = sorted(set(p[0] for p in samples))
    col = {x: i + 1 for i, x in enumerate(xs)}
    A = np.zeros((len(samples), len(xs) + 1))
    rhs = np.zeros(len(samples))
    fyy_max = 0.0
    for r, p in enumerate(samples):
        jet = jet_eval(f, p, 2)
        fyy_max = max(fyy_max, abs(jet.partial(0, 2)))
        A[r, 0] = -2.0 * jet.partial(0, 1)
        A[r, col[p[0]]] = 2.0
        rhs[r] = -cotton(f, p, sign).c2[0, 0]
    if fyy_max <= 1e-12:
        return 0.0, {x: 0.0 for x in xs}, 0.0, True
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    fit = float(np.max(np.abs(A @ sol - rhs)))
    if fit > tol:
        raise InconsistencyError(f"no y-independent hh_xx closes the equation (residual {fit:.3e})")
    return float(sol[0]), {x: float(sol[col[x]]) for x in xs}, fit, False


def build_cotton_soliton(case: CottonCase, samples=None, sign: int = 1, tol: float = 1e-8):
    """(f, h, report) for a gradient Cotton soliton family.

    The potential is derived from the xx entry of the tensor equation under
    Cotton sign ``sign`` and compared with the printed potential data.  Each
    sample is paired with a point at the same x (see :func:`with_partners`).
    """
    f = case.f()
    samples = with_partners(_default_samples() if samples is None else samples)
    mu, hxx_fit, fit, trivial = derive_cotton_potential(f, samples, sign, tol)
    c = case.family_constant()
    fam = 0.0
    for p in samples:
        jet = jet_eval(f, p, 4)
        fam = max(fam, abs(jet.partial(0, 4) - c * jet.partial(0, 2)))
    if trivial:
        h = Potential(0.0, E.const(0.0))
        cmu = 0.0
    else:
        cmu, chxx = case.corrected(sign)
        dev = max(abs(E.evaluate(chxx, x) - v) for x, v in hxx_fit.items())
        if abs(cmu - mu) > tol or dev > tol:
            raise InconsistencyError(f"derived potential disagrees with the closed form (mu {mu} vs {cmu}, hh_xx {dev:.3e})")
        h = Potential(cmu, chxx)
    corrected_res = verify_soliton(f, h, 0.0, "Cotton", samples, sign).residual
    pmu, phxx, pgrad = case.printed()
    y_var = 0.0
    deviation = 0.0
    by_x = {}
    for x, y in samples:
        v = E.evaluate(phxx, x, y)
        by_x.setdefault(x, []).append(v)
        deviation = max(deviation, abs(v - hxx_fit[x]))
    y_var = max(float(np.ptp(v)) for v in by_x.values())
    printed_res = {}
    for s in (1, -1):
        worst = 0.0
        for x, y in samples:
            fv, _, fy = grad_eval(f, x, y)
            Cxx = cotton(f, (x, y), s).c2[0, 0]
            worst = max(worst, abs(2.0 * (E.evaluate(phxx, x, y) - pmu * fy) + Cxx))
        printed_res[s] = float(worst)
    report = CottonReport(
        case.case, sign, fam, mu, fit, cmu, corrected_res, pmu, y_var, deviation, pgrad, printed_res, trivial
    )
    return f, h, report


# ---------------------------------------------------------- the Cotton remark


def cotton_remark_metric(lam: float, gamma: Expr2 = E.const(0.0)) -> Expr2:
    """f = y^3 e^(-lam x) + y^2 + y e^(lam x) + gamma(x)."""
    lx = E.const(lam) * E.X
    return E.power(E.Y, 3) * E.exp(-lx) + E.power(E.Y, 2) + E.Y * E.exp(lx) + gamma


def cotton_remark_field(lam: float, gamma0: float = 0.0, sign: int = 1, printed: bool = False) -> VectorFieldAnsatz:
    """X = d_x / 2 + (lam/2) y d_y + (lam xt + theta) d_xt for constant gamma = gamma0.

    Closing 𝓛_X g + C = lam g needs theta_x = gamma_x / 2 - lam gamma + (3 s / 2) e^(-lam x),
    i.e. theta = -lam gamma0 x - (3 s / (2 lam)) e^(-lam x).  ``printed=True`` uses
    theta_x = 3 e^(-lam x) + (1/2 - lam) gamma instead.
    """
    lx = E.const(lam) * E.X
    if printed:
        theta = E.const(-3.0 / lam) * E.exp(-lx) + E.const((0.5 - lam) * gamma0) * E.X
    else:
        theta = E.const(-lam * gamma0) * E.X + E.const(-1.5 * sign / lam) * E.exp(-lx)
    return VectorFieldAnsatz(a=0.0, abar=0.5, mu=lam, U=E.const(0.0), T=theta)


def cotton_remark_report(lam: float, gamma0: float = 0.0, samples=None) -> dict:
    """Soliton residuals of the remark field on its metric under every convention.

    Keys ``corrected[s]`` use the closing theta for Cotton sign s; keys
    ``printed[s, normalization]`` use the printed theta.  The soliton constant
    is lam in all cases, since 𝓛_X g - lam g only has an xx entry.
    """
    samples = _default_samples() if samples is None else samples
    f = cotton_remark_metric(lam, E.const(gamma0))
    out = {"lambda": lam, "label": label(lam), "corrected": {}, "printed": {}}
    for s in (1, -1):
        X = cotton_remark_field(lam, gamma0, s)
        out["corrected"][s] = verify_soliton(f, X, lam, "Cotton", samples, s).residual
        Xp = cotton_remark_field(lam, gamma0, printed=True)
        for norm in ("pairs", "full"):
            out["printed"][(s, norm)] = verify_soliton(f, Xp, lam, "Cotton", samples, s, norm).residual
    return out


# ---------------------------------------------------------------- homothety


def homothety_scalar(X: VectorFieldAnsatz, f: Expr2, point, printed: bool = False) -> float:
    """Scalar homothety equation at a point.

    Default: (mu y/2 + U) f_y + (a x + abar) f_x - T_x + y U_xx - (mu - 2a) f.
    ``printed=True``: 2 a f + mu + T_x - y U_xx - (mu y/2 + U) f_y - (a x + abar) f_x.
    """
    x, y = float(point[0]), float(point[1])
    fv, fx, fy = grad_eval(f, x, y)
    U, _, Uxx = eval_x(X.U, x, 2)
    _, Tx = eval_x(X.T, x, 1)
    B = 0.5 * X.mu * y + U
    A = X.a * x + X.abar
    if printed:
        return 2 * X.a * fv + X.mu + Tx - y * Uxx - B * fy - A * fx
    return B * fy + A * fx - Tx + y * Uxx - (X.mu - 2 * X.a) * fv


def homothety_residual(X: VectorFieldAnsatz, f: Expr2, samples, printed: bool = False):
    """(max |scalar equation|, max |𝓛_X g - mu g|) over the samples."""
    s_worst = t_worst = 0.0
    for p in samples:
        s_worst = max(s_worst, abs(homothety_scalar(X, f, p, printed)))
        fv = grad_eval(f, p[0], p[1])[0]
        R = lie_metric(X, f, p) - X.mu * _g(fv)
        t_worst = max(t_worst, float(np.max(np.abs(R[IU]))))
    return s_worst, t_worst


@dataclass
class HomothetyCandidate:
    a: float
    abar: float
    mu: float
    residual: float
    U: tuple
    T: tuple

    def field(self) -> VectorFieldAnsatz:
        return VectorFieldAnsatz(self.a, self.abar, self.mu, _poly(self.U), _poly(self.T))


def _poly(coeffs) -> Expr2:
    out = E.const(0.0)
    for j, c in enumerate(coeffs):
        if c != 0.0:
            out = out + E.const(c) * (E.power(E.X, j) if j else E.const(1.0))
    return out


@dataclass
class HomothetySearch:
    candidates: list
    best_killing: float
    best_nonkilling: float
    threshold: float

    @property
    def homotheties_found(self) -> list:
        return [c for c in self.candidates if abs(c.mu) > 1e-3 and c.residual < self.threshold]


def homothety_search(f: Expr2, samples, a_values, abar_values, mu_values, degree: int = 2) -> HomothetySearch:
    """Grid over (a, abar, mu); U and T are polynomials of degree <= ``degree`` fitted by least squares.

    The scalar equation is linear in the coefficients of U and T, so each grid
    point is one least-squares solve; the reported residual is
    max |𝓛_X g - mu g| of the fitted field.
    """
    samples = [tuple(map(float, p)) for p in samples]
    pre = [(p, grad_eval(f, *p)) for p in samples]
    n = degree + 1
    cands = []
    for a, abar, mu in itertools.product(a_values, abar_values, mu_values):
        A = np.zeros((len(samples), 2 * n))
        b = np.zeros(len(samples))
        for r, ((x, y), (fv, fx, fy)) in enumerate(pre):
            for j in range(n):
                A[r, j] = x**j * fy + (y * j * (j - 1) * x ** (j - 2) if j >= 2 else 0.0)
                A[r, n + j] = -(j * x ** (j - 1) if j >= 1 else 0.0)
            b[r] = -(0.5 * mu * y * fy + (a * x + abar) * fx - (mu - 2 * a) * fv)
        coef, *_ = np.linalg.lstsq(A, b, rcond=None)
        coef = np.where(np.abs(coef) < 1e-13, 0.0, coef)
        cand = HomothetyCandidate(float(a), float(abar), float(mu), 0.0, tuple(coef[:n]), tuple(coef[n:]))
        cand.residual = homothety_residual(cand.field(), f, samples)[1]
        cands.append(cand)
    kill = [c.residual for c in cands if c.mu == 0.0]
    non = [c.residual for c in cands if abs(c.mu) > 1e-3]
    best_k = min(kill) if kill else math.inf
    best_n = min(non) if non else math.inf
    return HomothetySearch(cands, best_k, best_n, 1e3 * max(best_k, 1e-14))


__all__ = [
    "Potential",
    "FieldPotential",
    "VectorFieldAnsatz",
    "GradientField",
    "ZeroField",
    "SolitonCertificate",
    "RicciCase",
    "CottonCase",
    "CottonReport",
    "HomothetyCandidate",
    "HomothetySearch",
    "hessian",
    "lie_metric",
    "ricci_xx",
    "cotton_tensor",
    "soliton_tensor",
    "verify_soliton",
    "build_ricci_soliton",
    "derive_cotton_potential",
    "with_partners",
    "build_cotton_soliton",
    "cotton_remark_metric",
    "cotton_remark_field",
    "cotton_remark_report",
    "homothety_scalar",
    "homothety_residual",
    "homothety_search",
    "label",
]

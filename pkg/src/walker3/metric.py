"""Tensor quantities of the Walker metric g_f at a point.

Coordinates are ordered ``(x, y, xt)`` everywhere, ``xt`` standing for the
third (null) coordinate x-tilde.  In these coordinates

    g(dx, dx) = -2 f(x, y),   g(dx, dxt) = g(dy, dy) = 1,

and nothing depends on ``xt``.  Every field (metric, Christoffel symbols,
curvature, ...) is carried as a table of jets, so covariant derivatives of any
order are computed by the generic recursion

    (nabla T)_{a1..ar; e} = d_e T_{a1..ar} - sum_i Gamma^m_{e a_i} T_{a1..m..ar}

with the derivative slot appended last.  Curvature conventions:
``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``, ``R(X, Y, Z, W) = g(R(X, Y) Z, W)``,
``Ric(Y, Z) = tr(X -> R(X, Y) Z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from . import _jetops as J
from .errors import OrderError, ZeroCurvatureError
from .expr import Expr2
from .jets import jet_eval

LABELS = ("x", "y", "xt")
IX, IY, IT = 0, 1, 2
ZERO_RTOL = 1e-9


def is_zero(v: float, scale: float = 0.0) -> bool:
    return abs(v) <= ZERO_RTOL * (1.0 + scale)


@dataclass(frozen=True)
class MetricAtPoint:
    g: np.ndarray
    g_inv: np.ndarray
    det: float


@dataclass(frozen=True)
class CovTensor:
    """Component table of nabla^k R (all indices down) at a point.

    ``components[a, b, c, d, e1, ..., ek]`` is nabla^k R(d_a, d_b, d_c, d_d; d_e1, ..., d_ek).
    """

    k: int
    components: np.ndarray
    point: tuple
    scale: float = 0.0

    def __getitem__(self, labels):
        if isinstance(labels, str):
            labels = labels.replace(";", " ").split()
        idx = tuple(LABELS.index(s) if isinstance(s, str) else int(s) for s in labels)
        return float(self.components[idx])

    def nonzero(self, rtol: float = ZERO_RTOL):
        out = []
        for idx in zip(*np.nonzero(np.abs(self.components) > rtol * (1.0 + self.scale))):
            out.append((tuple(LABELS[i] for i in idx), float(self.components[idx])))
        return out

    def to_json(self, rtol: float = ZERO_RTOL) -> dict:
        return {
            "k": self.k,
            "point": list(self.point),
            "index_order": list(LABELS),
            "components": [
                {"indices": list(lab[:4]) + ([";"] + list(lab[4:]) if self.k else []), "value": v}
                for lab, v in self.nonzero(rtol)
            ],
        }


@dataclass(frozen=True)
class OneForm:
    components: tuple

    def to_json(self) -> dict:
        return dict(zip(LABELS, self.components))


class WalkerGeometry:
    """Jet-valued fields of g_f around one point.

    ``order`` is the jet order of f; curvature fields have order ``order - 2``
    and nabla^k R has order ``order - 2 - k``.
    """

    def __init__(self, f: Expr2, point, order: int):
        if order < 2:
            raise OrderError("need a jet of order >= 2 for curvature")
        self.f = f
        self.point = (float(point[0]), float(point[1]))
        self.order = int(order)
        self.fjet = jet_eval(f, self.point, self.order).c
        self.scale = float(np.max(np.abs(self.fjet)))
        self._nabla = {}

    # -- metric
    @cached_property
    def g(self) -> np.ndarray:
        n = self.order + 1
        g = np.zeros((3, 3, n, n))
        g[IX, IX] = -2.0 * self.fjet
        g[IX, IT, 0, 0] = g[IT, IX, 0, 0] = 1.0
        g[IY, IY, 0, 0] = 1.0
        return g

    @cached_property
    def g_inv(self) -> np.ndarray:
        n = self.order + 1
        gi = np.zeros((3, 3, n, n))
        gi[IX, IT, 0, 0] = gi[IT, IX, 0, 0] = 1.0
        gi[IY, IY, 0, 0] = 1.0
        gi[IT, IT] = 2.0 * self.fjet
        return gi

    # -- connection, from the generic Levi-Civita formula
    @cached_property
    def christoffel(self) -> np.ndarray:
        """``Gamma[c, a, b]`` = Gamma^c_{ab}, jets of order ``order - 1``."""
        m = self.order - 1
        dg = J.gradient3(self.g)  # dg[a, b, d] = d_d g_ab
        dg = np.moveaxis(dg, -3, 0)  # dg[d, a, b]
        # lowered: Gamma_{d ab} = 1/2 (d_a g_bd + d_b g_ad - d_d g_ab)
        low = 0.5 * (
            np.einsum("abd...->dab...", dg)
            + np.einsum("bad...->dab...", dg)
            - dg
        )
        return J.contract("cd,dab->cab", J.truncate(self.g_inv, m), low)

    # -- curvature
    @cached_property
    def riemann_up(self) -> np.ndarray:
        """``Rup[d, c, a, b]`` with R(d_a, d_b) d_c = Rup[d, c, a, b] d_d."""
        m = self.order - 2
        G = self.christoffel
        dG = np.moveaxis(J.gradient3(G), -3, 0)  # dG[a, d, b, c] = d_a Gamma^d_bc
        Gm = J.truncate(G, m)
        term = np.einsum("adbc...->dcab...", dG) - np.einsum("bdac...->dcab...", dG)
        quad = J.contract("dae,ebc->dcab", Gm, Gm)
        term = term + quad - np.einsum("dcba...->dcab...", quad)
        return term

    @cached_property
    def riemann_field(self) -> np.ndarray:
        """``R[a, b, c, d]`` = R(d_a, d_b, d_c, d_d), jets of order ``order - 2``."""
        m = self.order - 2
        return J.contract("de,ecab->abcd", J.truncate(self.g, m), self.riemann_up)

    def nabla_field(self, k: int) -> np.ndarray:
        if k + 2 > self.order:
            raise OrderError(f"nabla^{k} R needs jet order {k + 2}, have {self.order}")
        if k == 0:
            return self.riemann_field
        if k not in self._nabla:
            self._nabla[k] = covariant_derivative(self.nabla_field(k - 1), self.christoffel)
        return self._nabla[k]

    def nabla(self, k: int) -> CovTensor:
        comps = J.value(self.nabla_field(k)).copy()
        return CovTensor(k, comps, self.point, self.scale)

    @cached_property
    def ricci_field(self) -> np.ndarray:
        return np.einsum("acab...->bc...", self.riemann_up)

    @cached_property
    def scalar_field(self) -> np.ndarray:
        m = self.order - 2
        return J.contract("bc,bc->", J.truncate(self.g_inv, m), self.ricci_field)

    @cached_property
    def schouten_field(self) -> np.ndarray:
        m = self.order - 2
        return self.ricci_field - 0.25 * J.mul(self.scalar_field[None, None], J.truncate(self.g, m))

    @cached_property
    def cotton3_field(self) -> np.ndarray:
        """``C[i, j, k] = (nabla_i S)_jk - (nabla_j S)_ik``, jets of order ``order - 3``."""
        dS = covariant_derivative(self.schouten_field, self.christoffel)  # dS[j, k, i]
        return np.einsum("jki...->ijk...", dS) - np.einsum("ikj...->ijk...", dS)


def covariant_derivative(T: np.ndarray, christoffel: np.ndarray) -> np.ndarray:
    """nabla of a covariant tensor field given as a jet table; new index last."""
    rank = T.ndim - 2
    m = J.order_of(T) - 1
    out = J.gradient3(T)
    Tm = J.truncate(T, m)
    G = J.truncate(christoffel, m)
    letters = "abcdefghijklmnopqrstuvw"[:rank]
    for slot in range(rank):
        src = letters[:slot] + "z" + letters[slot + 1 :]
        # Gamma^z_{y a_slot} T_{..z..} -> [..a_slot.., y]
        sig = f"zy{letters[slot]},{src}->{letters}y"
        out = out - J.contract(sig, G, Tm)
    return out


# ------------------------------------------------------------------ operations


def metric_at(f: Expr2, point) -> MetricAtPoint:
    fv = jet_eval(f, point, 0).value
    g = np.array([[-2.0 * fv, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
    g_inv = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 2.0 * fv]])
    return MetricAtPoint(g, g_inv, float(np.linalg.det(g)))


def christoffel(f: Expr2, point) -> np.ndarray:
    """``Gamma[c, a, b]`` = Gamma^c_{ab} at the point."""
    return J.value(WalkerGeometry(f, point, 2).christoffel).copy()


def riemann(f: Expr2, point) -> CovTensor:
    return WalkerGeometry(f, point, 2).nabla(0)


def riemann_13(f: Expr2, point) -> np.ndarray:
    """(1,3) tensor ``Rup[d, c, a, b]``: R(d_a, d_b) d_c = sum_d Rup[d, c, a, b] d_d."""
    return J.value(WalkerGeometry(f, point, 2).riemann_up).copy()


def nabla_k_R(f: Expr2, point, k: int, order: int | None = None) -> CovTensor:
    """nabla^k R at ``point``.  ``order`` defaults to the minimum ``k + 2``."""
    if k < 0:
        raise OrderError("k must be non-negative")
    order = k + 2 if order is None else order
    return WalkerGeometry(f, point, order).nabla(k)


def ricci_scalar_schouten(f: Expr2, point):
    geo = WalkerGeometry(f, point, 2)
    ric = J.value(geo.ricci_field).copy()
    sc = float(J.value(geo.scalar_field))
    S = J.value(geo.schouten_field).copy()
    return ric, sc, S


@dataclass(frozen=True)
class CottonResult:
    c3: np.ndarray
    c2: np.ndarray
    sign: int
    convention: dict = field(default_factory=dict)


def levi_civita(sign: int = 1) -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for i, j, k in product(range(3), repeat=3):
        if len({i, j, k}) == 3:
            perm = [i, j, k]
            inversions = sum(perm[a] > perm[b] for a in range(3) for b in range(a + 1, 3))
            eps[i, j, k] = sign * (-1) ** inversions
    return eps


COTTON_NORMALIZATIONS = ("pairs", "full")


def cotton_from_c3(c3: np.ndarray, g: np.ndarray, sign: int = 1, normalization: str = "pairs") -> np.ndarray:
    """(0,2) Cotton tensor by Hodge duality.

    ``pairs``: C_ij = 1/(2 sqrt|det g|) sum_{n<m} C_{n m i} eps^{n m l} g_{l j}
    ``full``:  the same prefactor with an unrestricted sum over n, m, which
    counts each antisymmetric pair twice and doubles every component.
    """
    if normalization not in COTTON_NORMALIZATIONS:
        raise ValueError(f"normalization must be one of {COTTON_NORMALIZATIONS}")
    eps = levi_civita(sign)
    vol = math.sqrt(abs(np.linalg.det(g)))
    full = np.einsum("nmi,nml,lj->ij", c3, eps, g) / (2.0 * vol)
    return full / 2.0 if normalization == "pairs" else full


def cotton(f: Expr2, point, sign: int = 1, normalization: str = "pairs") -> CottonResult:
    """Cotton tensor in (0,3) and (0,2) form.

    ``sign`` fixes the orientation eps^{x y xt} = sign.  With ``sign=+1`` and
    the default normalization the only (0,2) component is C(dx, dx) = -f_yyy / 2;
    ``normalization="full"`` doubles it.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    geo = WalkerGeometry(f, point, 3)
    c3 = J.value(geo.cotton3_field).copy()
    g = J.value(geo.g)
    c2 = cotton_from_c3(c3, g, sign, normalization)
    conv = {
        "orientation": f"eps^(x,y,xt) = {sign:+d}",
        "normalization": normalization,
        "C_xx": "-sign * f_yyy / 2" if normalization == "pairs" else "-sign * f_yyy",
    }
    return CottonResult(c3, c2, sign, conv)


def recurrence_form(f: Expr2, point):
    """Recurrence 1-form omega with nabla R = omega (x) R, and the max residual."""
    geo = WalkerGeometry(f, point, 3)
    R = J.value(geo.nabla_field(0))
    dR = J.value(geo.nabla_field(1))
    fyy = R[IX, IY, IY, IX]
    if is_zero(fyy, 0.0) or fyy == 0.0:
        raise ZeroCurvatureError(f"f_yy vanishes at {point}")
    jet = geo.fjet
    fxyy = 2.0 * jet[1, 2]
    fyyy = 6.0 * jet[0, 3]
    omega = np.array([fxyy / fyy, fyyy / fyy, 0.0])
    residual = float(np.max(np.abs(dR - np.multiply.outer(R, omega))))
    return OneForm(tuple(float(v) for v in omega)), residual

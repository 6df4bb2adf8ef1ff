"""Pseudo-orthonormal frames and the curvature models A0, N1(b), P1(c), N2(b), P2(c).

The frame is

    xi1 = a11 (dx + f dxt + a12 dy + a13 dxt),   xi2 = a22 dy + a23 dxt,   xi3 = a33 dxt

with <xi1, xi3> = <xi2, xi2> = 1 and all other pairings zero.

N1(b) fixes nabla R(xi1, xi2, xi2, xi1; xi2) = b.  (The slot (xi1, xi2, xi2, xi2)
vanishes identically by antisymmetry, so it cannot carry b.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _jetops as J
from .errors import DivisionError, NotNormalizedError, SignError
from .metric import WalkerGeometry, is_zero

MATCH_RTOL = 1e-7


@dataclass(frozen=True)
class FrameCoeffs:
    a11: float
    a12: float
    a13: float
    a22: float
    a23: float
    a33: float

    @classmethod
    def normalized(cls, a11: float, a12: float) -> "FrameCoeffs":
        return cls(a11, a12, -0.5 * a12 * a12, 1.0, -a12, 1.0 / a11)

    def vectors(self, fval: float) -> np.ndarray:
        """Rows are xi1, xi2, xi3 in coordinates (x, y, xt)."""
        return np.array(
            [
                [self.a11, self.a11 * self.a12, self.a11 * (fval + self.a13)],
                [0.0, self.a22, self.a23],
                [0.0, 0.0, self.a33],
            ]
        )

    def gram(self, g: np.ndarray, fval: float) -> np.ndarray:
        E = self.vectors(fval)
        return E @ g @ E.T


MODEL_GRAM = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])


def _partials(geo: WalkerGeometry):
    c = geo.fjet
    K = geo.order
    out = {"f": c[0, 0], "f_yy": 2.0 * c[0, 2]}
    if K >= 3:
        out["f_yyy"] = 6.0 * c[0, 3]
        out["f_xyy"] = 2.0 * c[1, 2]
    return out


def frame_0(f, point, a12: float = 0.0) -> FrameCoeffs:
    """Frame with R(xi1, xi2, xi2, xi1) = 1; ``a12`` is free."""
    geo = WalkerGeometry(f, point, 2)
    fyy = _partials(geo)["f_yy"]
    if not fyy > 0.0:
        raise SignError(f"f_yy = {fyy} is not positive at {point}")
    return FrameCoeffs.normalized(fyy**-0.5, float(a12))


def frame_1(f, point) -> FrameCoeffs:
    """frame_0 with a12 = -f_xyy / f_yyy, which kills nabla R(...; xi1)."""
    geo = WalkerGeometry(f, point, 3)
    p = _partials(geo)
    if not p["f_yy"] > 0.0:
        raise SignError(f"f_yy = {p['f_yy']} is not positive at {point}")
    if p["f_yyy"] == 0.0 or is_zero(p["f_yyy"], 0.0):
        raise DivisionError(f"f_yyy vanishes at {point}")
    return FrameCoeffs.normalized(p["f_yy"] ** -0.5, -p["f_xyy"] / p["f_yyy"])


def kv_frame(f, point):
    """Frame for homothety-weighted (Kowalski-Vanzurova) 1-curvature homogeneity.

    Returns ``(lam, frame)`` with lam = f_yyy / f_yy, so that
    R(1221) = lam^2, nabla R(1221; 1) = 0 and nabla R(1221; 2) = lam^3.
    """
    geo = WalkerGeometry(f, point, 3)
    p = _partials(geo)
    if not (p["f_yy"] > 0.0 and p["f_yyy"] > 0.0):
        raise SignError(f"need f_yy > 0 and f_yyy > 0 at {point}")
    lam = p["f_yyy"] / p["f_yy"]
    return lam, FrameCoeffs.normalized(lam * p["f_yy"] ** -0.5, -p["f_xyy"] / p["f_yyy"])


@dataclass(frozen=True)
class ModelRecord:
    """Frame values of R, nabla R, nabla^2 R on the slot (xi1, xi2, xi2, xi1).

    ``dR = (;1, ;2)`` and ``d2R = (;11, ;12, ;21, ;22)``; absent orders are ``()``.
    """

    k: int
    R: float
    dR: tuple = ()
    d2R: tuple = ()

    def slots(self) -> dict:
        out = {"R_1221": self.R}
        for name, v in zip(("1", "2"), self.dR):
            out[f"dR_1221_{name}"] = v
        for name, v in zip(("11", "12", "21", "22"), self.d2R):
            out[f"d2R_1221_{name}"] = v
        return out

    def to_json(self) -> dict:
        return {"k": self.k, "slots": self.slots()}

    def as_vector(self) -> np.ndarray:
        return np.array([self.R, *self.dR, *self.d2R])


def frame_slots(T: np.ndarray, E: np.ndarray, idx) -> float:
    """Contract all slots of a component table with frame rows ``E[idx[i]]``."""
    out = T
    for i in idx:
        out = np.tensordot(out, E[i], axes=([0], [0]))
    return float(out)


def model_invariants(f, point, frame: FrameCoeffs, k: int = 2, geometry: Optional[WalkerGeometry] = None) -> ModelRecord:
    if k not in (0, 1, 2):
        raise ValueError("model records are defined for k <= 2")
    geo = geometry if geometry is not None else WalkerGeometry(f, point, k + 2)
    E = frame.vectors(float(geo.fjet[0, 0]))
    base = (0, 1, 1, 0)
    R = frame_slots(J.value(geo.nabla_field(0)), E, base)
    dR = d2R = ()
    if k >= 1:
        T1 = J.value(geo.nabla_field(1))
        dR = tuple(frame_slots(T1, E, base + (e,)) for e in (0, 1))
    if k >= 2:
        T2 = J.value(geo.nabla_field(2))
        d2R = tuple(frame_slots(T2, E, base + (e1, e2)) for e1 in (0, 1) for e2 in (0, 1))
    return ModelRecord(k, R, dR, d2R)


def kv_weighted_slots(f, point):
    """(R(1221)/lam^2, nabla R(1221;1)/lam^3, nabla R(1221;2)/lam^3) in the KV frame."""
    lam, frame = kv_frame(f, point)
    rec = model_invariants(f, point, frame, 1)
    return (rec.R / lam**2, rec.dR[0] / lam**3, rec.dR[1] / lam**3)


@dataclass(frozen=True)
class ModelTag:
    name: str  # A0, N1, P1, N2, P2, CW, None
    parameter: Optional[float] = None

    def __str__(self):
        return self.name if self.parameter is None else f"{self.name}({self.parameter:.12g})"


def _close(a: float, b: float, rtol: float = MATCH_RTOL) -> bool:
    return abs(a - b) <= rtol * (1.0 + abs(b))


def match_model(record: ModelRecord, rtol: float = MATCH_RTOL) -> ModelTag:
    """Identify the curvature model realized by a frame record.

    Derivative-free records (k = 0) are A0.  At k >= 1, b is read from the
    (;2) slot and c from the (;1) slot; at k = 2 the nabla^2 slots must equal
    (-1, 0, 0, b^2) for N2(b) or (3c^2/2, 0, 0, 0) for P2(c).
    """
    if not _close(record.R, 1.0, rtol):
        raise NotNormalizedError(f"R(xi1,xi2,xi2,xi1) = {record.R}, expected 1")
    if record.k == 0:
        return ModelTag("A0")
    d1, d2 = record.dR
    z1, z2 = abs(d1) <= rtol, abs(d2) <= rtol
    if record.k >= 2:
        s11, s12, s21, s22 = record.d2R
        if z1 and z2:
            if all(abs(s) <= rtol for s in record.d2R):
                return ModelTag("CW")
            return ModelTag("None")
        if z1 and not z2:
            b = d2
            ok = _close(s11, -1.0, rtol) and abs(s12) <= rtol and abs(s21) <= rtol and _close(s22, b * b, rtol)
            return ModelTag("N2", b) if ok else ModelTag("None")
        if z2 and not z1:
            c = d1
            ok = _close(s11, 1.5 * c * c, rtol) and all(abs(s) <= rtol for s in (s12, s21, s22))
            return ModelTag("P2", c) if ok else ModelTag("None")
        return ModelTag("None")
    if z1 and z2:
        return ModelTag("CW")
    if z1:
        return ModelTag("N1", d2)
    if z2:
        return ModelTag("P1", d1)
    return ModelTag("None")


def invariant_ratio(f, point) -> float:
    """f_yyy / f_yy, the frame-independent value of nabla R(1221; 2)."""
    geo = WalkerGeometry(f, point, 3)
    p = _partials(geo)
    if p["f_yy"] == 0.0:
        raise DivisionError(f"f_yy vanishes at {point}")
    return p["f_yyy"] / p["f_yy"]


def pc_invariant(f, point) -> float:
    """f_xyy f_yy^(-3/2), the value of nabla R(1221; 1) when f_yyy = 0."""
    geo = WalkerGeometry(f, point, 3)
    p = _partials(geo)
    if not p["f_yy"] > 0.0:
        raise SignError(f"f_yy = {p['f_yy']} is not positive at {point}")
    return p["f_xyy"] * p["f_yy"] ** -1.5


def pc_recursion_constants(c: float, kmax: int) -> list:
    """c_0 = 1, c_k = c_{k-1} * c * (1 + k) / 2."""
    out = [1.0]
    for k in range(1, kmax + 1):
        out.append(out[-1] * c * (1 + k) / 2.0)
    return out


__all__ = [
    "FrameCoeffs",
    "ModelRecord",
    "ModelTag",
    "MODEL_GRAM",
    "frame_0",
    "frame_1",
    "kv_frame",
    "kv_weighted_slots",
    "model_invariants",
    "match_model",
    "invariant_ratio",
    "pc_invariant",
    "pc_recursion_constants",
    "frame_slots",
]


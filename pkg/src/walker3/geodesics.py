"""Geodesics, parallel transport and the P_c blowup run.

The geodesic equations of g_f in coordinates (x, y, xt) are

    x'' = 0,   y'' = -f_y x'^2,   xt'' = f_x x'^2 + 2 f_y x' y'

and the energy g_f(v, v) = -2 f x'^2 + 2 x' xt' + y'^2 is conserved.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as E
from .errors import DomainError
from .expr import Expr2
from .integrate import OdeSolution, solve
from .jets import grad_eval, jet_eval

CSV_COLUMNS = ("t", "x", "y", "xt", "xp", "yp", "xtp", "energy")


def _f01(f: Expr2, x: float, y: float):
    return grad_eval(f, x, y)


def christoffel_from_partials(fx: float, fy: float) -> np.ndarray:
    """Gamma[c, a, b] from f_x and f_y alone (nothing else survives)."""
    G = np.zeros((3, 3, 3))
    G[2, 0, 0] = -fx
    G[1, 0, 0] = fy
    G[2, 0, 1] = G[2, 1, 0] = -fy
    return G


def energy(f: Expr2, pos, vel) -> float:
    fv = grad_eval(f, pos[0], pos[1])[0]
    return -2.0 * fv * vel[0] ** 2 + 2.0 * vel[0] * vel[2] + vel[1] ** 2


def inner(f: Expr2, pos, u, v) -> float:
    fv = grad_eval(f, pos[0], pos[1])[0]
    return -2.0 * fv * u[0] * v[0] + u[0] * v[2] + u[2] * v[0] + u[1] * v[1]


def sectional_numerator(f: Expr2, pos, u, v) -> float:
    """R(u, v, v, u); only R(dx, dy, dy, dx) = f_yy survives, so this is f_yy (u^x v^y - u^y v^x)^2."""
    fyy = 2.0 * jet_eval(f, (pos[0], pos[1]), 2).c[0, 2]
    return fyy * (u[0] * v[1] - u[1] * v[0]) ** 2


@dataclass(frozen=True)
class GeodesicState:
    t: float
    pos: tuple
    vel: tuple

    def as_array(self) -> np.ndarray:
        return np.array([*self.pos, *self.vel], dtype=float)

    @classmethod
    def from_array(cls, t, arr) -> "GeodesicState":
        return cls(float(t), tuple(float(v) for v in arr[:3]), tuple(float(v) for v in arr[3:6]))


def geodesic_rhs(f: Expr2, state: GeodesicState) -> GeodesicState:
    """Time derivative of ``state``, returned as a state whose pos/vel hold (v, a)."""
    d = _rhs_array(f, state.as_array())
    return GeodesicState(state.t, tuple(d[:3]), tuple(d[3:]))


def _rhs_array(f: Expr2, s: np.ndarray) -> np.ndarray:
    _, fx, fy = _f01(f, s[0], s[1])
    xp, yp, tp = s[3], s[4], s[5]
    return np.array([xp, yp, tp, 0.0, -fy * xp * xp, fx * xp * xp + 2.0 * fy * xp * yp])


@dataclass
class GeodesicTrajectory:
    t: np.ndarray
    states: np.ndarray  # rows (x, y, xt, x', y', xt')
    termination: str
    nsteps: int = 0
    energies: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return self.t.size

    def state(self, i: int) -> GeodesicState:
        return GeodesicState.from_array(self.t[i], self.states[i])

    def __iter__(self):
        return (self.state(i) for i in range(len(self)))

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energies - self.energies[0])))

    def rows(self):
        for i in range(len(self)):
            yield [self.t[i], *self.states[i], self.energies[i]]

    def to_csv(self) -> str:
        return write_csv(CSV_COLUMNS, self.rows())


def write_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["%.17g" % v for v in r])
    return buf.getvalue()


def _trajectory(f, sol: OdeSolution) -> GeodesicTrajectory:
    en = np.array([energy(f, s[:3], s[3:]) for s in sol.y])
    return GeodesicTrajectory(sol.t, sol.y, sol.status, sol.nsteps, en)


def integrate_geodesic(
    f: Expr2,
    initial: GeodesicState,
    tmax: float,
    tol: float = 1e-10,
    t_eval=None,
    max_steps: int = 10**7,
) -> GeodesicTrajectory:
    """Adaptive DP5(4) integration; failures are reported in ``termination``."""
    s0 = initial.as_array()
    if not np.all(np.isfinite(s0)):
        raise ValueError("initial state must be finite")
    sol = solve(
        lambda t, s: _rhs_array(f, s), initial.t, s0, tmax, rtol=tol, atol=tol, t_eval=t_eval, max_steps=max_steps
    )
    return _trajectory(f, sol)


# ---------------------------------------------------------------- N_b oracle


def nb_metric(b: float) -> Expr2:
    """f = b^-2 e^(b y)."""
    return E.const(1.0 / (b * b)) * E.exp(E.const(b) * E.Y)


def nb_constants(b: float, alpha: float, y0: float, v0: float):
    """(C1, C2) of the sech^2 solution with y(0) = y0, y'(0) = v0 and x' = alpha."""
    C1 = math.sqrt(v0 * v0 + 2.0 * alpha * alpha * math.exp(b * y0) / (b * b))
    u0 = math.atanh(-v0 / C1)
    return C1, 2.0 * u0 / (b * C1)


def nb_closed_form(b: float, alpha: float, C1: float, C2: float, t):
    """y(t) = b^-1 ln((b^2 C1^2 / 2 alpha^2) sech^2(|b C1 (t + C2)| / 2))."""
    if alpha == 0.0 or C1 == 0.0:
        raise DomainError("need alpha != 0 and C1 != 0")
    u = 0.5 * np.abs(b * C1 * (np.asarray(t, dtype=float) + C2))
    # ln sech^2 u = -2 (u + ln(1 + e^{-2u}) - ln 2), stable for large u
    log_sech2 = -2.0 * (u + np.log1p(np.exp(-2.0 * u)) - math.log(2.0))
    return (math.log(b * b * C1 * C1 / (2.0 * alpha * alpha)) + log_sech2) / b


def nb_closed_form_velocity(b: float, C1: float, C2: float, t):
    return -C1 * np.tanh(0.5 * b * C1 * (np.asarray(t, dtype=float) + C2))


# ---------------------------------------------------------- parallel transport


@dataclass
class TransportResult:
    t: np.ndarray
    states: np.ndarray
    Y: np.ndarray
    termination: str
    norms: np.ndarray = field(repr=False, default=None)  # <Y, Y>
    pairings: np.ndarray = field(repr=False, default=None)  # <gamma', Y>


def _transport_rhs(f, s):
    _, fx, fy = _f01(f, s[0], s[1])
    xp, yp, tp = s[3], s[4], s[5]
    Yx, Yy = s[6], s[7]
    return np.array(
        [
            xp,
            yp,
            tp,
            0.0,
            -fy * xp * xp,
            fx * xp * xp + 2.0 * fy * xp * yp,
            0.0,
            -fy * xp * Yx,
            fx * xp * Yx + fy * (xp * Yy + yp * Yx),
        ]
    )


def parallel_transport(f: Expr2, trajectory: GeodesicTrajectory, Y0, tol: float = 1e-10) -> TransportResult:
    """Solve Y^c' + Gamma^c_ab gamma'^a Y^b = 0 along ``trajectory``.

    The geodesic is re-integrated jointly with Y and sampled at the
    trajectory's times.
    """
    s0 = np.concatenate([trajectory.states[0], np.asarray(Y0, dtype=float)])
    sol = solve(lambda t, s: _transport_rhs(f, s), trajectory.t[0], s0, trajectory.t[-1], rtol=tol, atol=tol, t_eval=trajectory.t)
    states, Y = sol.y[:, :6], sol.y[:, 6:]
    norms = np.array([inner(f, s[:3], y, y) for s, y in zip(states, Y)])
    pair = np.array([inner(f, s[:3], s[3:], y) for s, y in zip(states, Y)])
    return TransportResult(sol.t, states, Y, sol.status, norms, pair)


# ----------------------------------------------------------------- P_c blowup


def pc_blowup_metric() -> Expr2:
    """f = (1 - x)^-2 y^2."""
    return E.power(E.const(1.0) - E.X, -2) * E.power(E.Y, 2)


SQRT7 = math.sqrt(7.0)


def pc_phi(t, a1: float = 1.0, a2: float = -1.0 / SQRT7):
    """Solution of phi_tt + 2 (1 - t)^-2 phi = 0 with phi(0) = a1.

    phi_t(0) = -(a1 + sqrt(7) a2) / 2, so the default a2 gives phi_t(0) = 0.
    """
    s = np.log1p(-np.asarray(t, dtype=float))
    return np.sqrt(1.0 - np.asarray(t, dtype=float)) * (a1 * np.cos(SQRT7 * s / 2) + a2 * np.sin(SQRT7 * s / 2))


@dataclass
class BlowupResult:
    columns: tuple
    table: np.ndarray
    termination: str
    t_star: float
    curvature_at_t_star: float
    trajectory: GeodesicTrajectory
    transport: TransportResult

    def to_csv(self) -> str:
        return write_csv(self.columns, self.table)


BLOWUP_COLUMNS = CSV_COLUMNS + ("curvature", "curvature_expected", "g_vel_Y", "g_Y_Y", "phi_expected")


def blowup_experiment_pc(
    tol: float = 1e-12,
    curvature_cap: float = 1e6,
    psi_t0: float = 1.5,
    a1: float = 1.0,
    a2: float = -1.0 / SQRT7,
    tmax: float = 2.0,
) -> BlowupResult:
    """Follow gamma(t) = (t, phi, psi) on f = (1 - x)^-2 y^2 towards t = 1.

    gamma(0) = (0, a1, 0) and gamma'(0) = dx + phi_t(0) dy + psi_t0 dxt; the
    energy is 2 psi_t0 - 2 a1^2 + phi_t(0)^2, which is 1 for the defaults.
    Y = dy + Psi dxt is transported along gamma, and the table records
    R(gamma', Y, Y, gamma') next to 2 (1 - t)^-2 up to the first row where it
    exceeds ``curvature_cap``.
    """
    f = pc_blowup_metric()
    phi_t0 = -0.5 * (a1 + SQRT7 * a2)
    init = GeodesicState(0.0, (0.0, a1, 0.0), (1.0, phi_t0, psi_t0))
    traj = integrate_geodesic(f, init, tmax, tol)
    rows = []
    end = len(traj)
    for i in range(len(traj)):
        x = traj.states[i, 0]
        if x >= 1.0:
            end = i
            break
    # transport over the same times, stopping before the singular slice
    cut = GeodesicTrajectory(traj.t[:end], traj.states[:end], traj.termination, traj.nsteps, traj.energies[:end])
    tr = parallel_transport(f, cut, (0.0, 1.0, 0.0), tol)
    for i in range(min(end, tr.t.size)):
        s = traj.states[i]
        t = traj.t[i]
        curv = sectional_numerator(f, s[:3], s[3:], tr.Y[i])
        expected = 2.0 * (1.0 - t) ** -2
        rows.append([t, *s, traj.energies[i], curv, expected, tr.pairings[i], tr.norms[i], pc_phi(t, a1, a2)])
        if curv > curvature_cap:
            break
    t_star = float(traj.t[-1])
    x_star = traj.states[-1, 0]
    k_star = 2.0 * (1.0 - x_star) ** -2 * traj.states[-1, 3] ** 2 if x_star < 1.0 else math.inf
    return BlowupResult(BLOWUP_COLUMNS, np.array(rows), traj.termination, t_star, k_star, traj, tr)


__all__ = [
    "GeodesicState",
    "GeodesicTrajectory",
    "TransportResult",
    "BlowupResult",
    "geodesic_rhs",
    "integrate_geodesic",
    "energy",
    "inner",
    "sectional_numerator",
    "christoffel_from_partials",
    "nb_metric",
    "nb_constants",
    "nb_closed_form",
    "nb_closed_form_velocity",
    "parallel_transport",
    "pc_blowup_metric",
    "pc_phi",
    "blowup_experiment_pc",
    "write_csv",
]

"""Embedded Dormand-Prince 5(4) integrator with PI step control.

One kernel serves geodesics, parallel transport and the second-order ODEs that
build isometries.  Failures are reported through ``status`` rather than raised:

* ``ReachedTmax`` - integrated to ``t_end``
* ``StepUnderflow`` - |h| dropped below ``h_min``
* ``NonFinite`` - the state became non-finite or exceeded ``blowup`` in magnitude
* ``LeftDomain`` - the right-hand side raised :class:`DomainError`
* ``MaxSteps`` - step budget exhausted
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ODESolveError

# Dormand-Prince tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array(_A[6] + [0.0])
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

STATUSES = ("ReachedTmax", "StepUnderflow", "NonFinite", "LeftDomain", "MaxSteps")


@dataclass
class OdeSolution:
    t: np.ndarray
    y: np.ndarray
    status: str
    nsteps: int
    nfev: int
    nreject: int
    message: str = ""

    @property
    def success(self) -> bool:
        return self.status == "ReachedTmax"


def _initial_step(rhs, t0, y0, f0, direction, rtol, atol):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    f1 = rhs(t0 + direction * h0, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def solve(
    rhs,
    t0: float,
    y0,
    t_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    t_eval=None,
    max_steps: int = 10**7,
    h_min: float = 1e-14,
    blowup: float = 1e12,
    h_max: float = np.inf,
) -> OdeSolution:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t_end``.

    Without ``t_eval`` every accepted step is recorded; with it the solver
    lands exactly on each requested time and records only those (plus the
    final state when it stops early).
    """
    y = np.array(y0, dtype=float)
    t = float(t0)
    direction = 1.0 if t_end >= t0 else -1.0
    span = abs(t_end - t0)
    targets = None
    if t_eval is not None:
        targets = np.asarray(t_eval, dtype=float)
        if np.any(direction * np.diff(targets) < 0):
            raise ValueError("t_eval must be monotone in the integration direction")
    ts, ys = [], []
    if targets is None or (targets.size and targets[0] == t):
        ts.append(t)
        ys.append(y.copy())
    next_target = 0
    if targets is not None:
        while next_target < targets.size and direction * (targets[next_target] - t) <= 0:
            next_target += 1
    nfev = nsteps = nreject = 0

    def finish(status, message=""):
        if targets is not None and (not ts or ts[-1] != t):
            ts.append(t)
            ys.append(y.copy())
        return OdeSolution(np.array(ts), np.array(ys), status, nsteps, nfev, nreject, message)

    if span == 0.0:
        return finish("ReachedTmax")
    try:
        k1 = np.asarray(rhs(t, y), dtype=float)
        nfev += 1
        h = min(_initial_step(rhs, t, y, k1, direction, rtol, atol), span, h_max)
        nfev += 1
    except DomainError as exc:
        return finish("LeftDomain", str(exc))
    except (OverflowError, FloatingPointError) as exc:
        return finish("NonFinite", str(exc))
    err_prev = 1.0
    domain_hit = None
    K = np.empty((7, y.size))
    while True:
        if nsteps >= max_steps:
            return finish("MaxSteps")
        remaining = direction * (t_end - t)
        if remaining <= 0.0:
            return finish("ReachedTmax")
        stop_at = t_end
        if targets is not None and next_target < targets.size:
            stop_at = targets[next_target]
        h = min(h, abs(stop_at - t), h_max)
        if h < h_min or t + direction * h == t:
            if domain_hit is not None:
                return finish("LeftDomain", domain_hit)
            return finish("StepUnderflow", f"h = {h:.3e} at t = {t!r}")
        K[0] = k1
        try:
            with np.errstate(over="raise", invalid="raise"):
                for s in range(1, 7):
                    ys_ = y + direction * h * (np.dot(_A[s], K[:s]) if s > 1 else _A[s][0] * K[0])
                    K[s] = rhs(t + direction * _C[s] * h, ys_)
                nfev += 6
                y_new = y + direction * h * np.dot(_B, K)
                err_vec = direction * h * np.dot(_E, K)
        except DomainError as exc:
            # a trial stage left the domain: shrink and retry
            domain_hit = str(exc)
            nreject += 1
            h *= 0.25
            continue
        except (OverflowError, FloatingPointError) as exc:
            if h * 0.25 < h_min:
                return finish("NonFinite", str(exc))
            nreject += 1
            h *= 0.25
            continue
        if not np.all(np.isfinite(y_new)):
            nreject += 1
            h *= 0.25
            continue
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        if err <= 1.0:
            t_new = t + direction * h
            if targets is not None and next_target < targets.size and h == abs(stop_at - t):
                t_new = stop_at
            t, y = t_new, y_new
            k1 = K[6].copy()
            nsteps += 1
            domain_hit = None
            if targets is None:
                ts.append(t)
                ys.append(y.copy())
            else:
                while next_target < targets.size and direction * (targets[next_target] - t) <= 0:
                    if targets[next_target] == t:
                        ts.append(t)
                        ys.append(y.copy())
                    next_target += 1
            if np.max(np.abs(y)) > blowup:
                return finish("NonFinite", f"|y| > {blowup:g} at t = {t!r}")
            fac = 0.9 * max(err, 1e-10) ** -0.14 * err_prev**0.08
            h *= min(5.0, max(0.2, fac))
            err_prev = max(err, 1e-4)
        else:
            nreject += 1
            h *= max(0.2, 0.9 * err**-0.2)


def solve_at(rhs, t0: float, y0, ts, rtol: float = 1e-12, atol: float = 1e-12) -> dict:
    """States at every requested time, integrating outward from ``t0`` in both directions.

    Returns ``{t: state}``.  Raises :class:`ODESolveError` if a leg does not
    reach its last target.
    """
    y0 = np.asarray(y0, dtype=float)
    wanted = sorted(set(float(t) for t in np.atleast_1d(ts)))
    out = {float(t0): y0.copy()}
    for leg in ([t for t in wanted if t > t0], sorted((t for t in wanted if t < t0), reverse=True)):
        if not leg:
            continue
        sol = solve(rhs, t0, y0, leg[-1], rtol, atol, t_eval=leg)
        if not sol.success:
            raise ODESolveError(f"integration stopped with {sol.status}: {sol.message}")
        out.update((float(t), s) for t, s in zip(sol.t, sol.y))
    return out

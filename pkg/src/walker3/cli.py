"""Command-line front end: ``walker3 <command> [options]``.

Machine-readable output goes to stdout (or ``--out``), a one-line human
summary to stderr.  Exit codes: 0 ok, 2 parse/usage error, 3 domain error,
4 any other library error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import expr as E
from .classify import Grid, classify_sampled
from .config import RunConfig, load_config
from .errors import DomainError, ParseError, WalkerError
from .frames import frame_0, frame_1, kv_frame, kv_weighted_slots, match_model, model_invariants
from .geodesics import GeodesicState, blowup_experiment_pc, integrate_geodesic, nb_closed_form, nb_constants
from .jets import jet_eval
from .metric import nabla_k_R
from .solitons import (
    CottonCase,
    RicciCase,
    build_cotton_soliton,
    build_ricci_soliton,
    cotton_remark_report,
    verify_soliton,
)

EXIT_PARSE, EXIT_DOMAIN, EXIT_OTHER = 2, 3, 4


# ------------------------------------------------------------------ output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return "%.17g" % v
    if isinstance(v, str):
        import json

        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{_fmt(str(k))}: {_fmt(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dump_json(obj) -> str:
    """JSON with every float printed to 17 significant digits."""
    return _fmt(obj) + "\n"


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------- inputs


def _params(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ParseError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError as exc:
            raise ParseError(f"bad parameter value {v!r}") from exc
    return out


def _read_f(args):
    params = _params(args.param)
    if args.f:
        try:
            text = Path(args.f).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {args.f}: {exc}") from exc
        return E.loads(text, params)
    if args.expr:
        return E.loads(args.expr, params)
    raise ParseError("an expression is required (--f FILE or --expr TEXT)")


def _floats(text: str, n: int, what: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad {what} {text!r}") from exc
    if len(vals) != n:
        raise ParseError(f"{what} needs {n} comma-separated numbers")
    return vals


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    grid = None
    if args.grid:
        try:
            grid = Grid.parse(args.grid)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    return cfg.updated(ode_tol=args.tol, grid=grid, cotton_sign=args.cotton_sign, jet_order=args.jet_order)


# ----------------------------------------------------------------- commands


def cmd_curvature(args, cfg: RunConfig):
    f = _read_f(args)
    point = _floats(args.point, 2, "point")
    order = 2 if args.order is None else args.order
    tensors = [nabla_k_R(f, point, k, max(cfg.jet_order, order + 2)).to_json(cfg.zero_tol) for k in range(order + 1)]
    payload = {"f": E.to_infix(f), "point": list(point), "order": order, "tensors": tensors}
    n = sum(len(t["components"]) for t in tensors)
    return payload, None, f"curvature: {n} nonzero components up to order {order}"


def cmd_classify(args, cfg: RunConfig):
    f = _read_f(args)
    cls = classify_sampled(f, cfg.grid)
    return {"f": E.to_infix(f), **cls.to_json()}, None, f"classify: {cls}"


def cmd_model_match(args, cfg: RunConfig):
    f = _read_f(args)
    point = _floats(args.point, 2, "point")
    k = 2 if args.order is None else min(args.order, 2)
    if args.frame == "kv":
        lam, fr = kv_frame(f, point)
        w = kv_weighted_slots(f, point)
        payload = {"frame": "kv", "lambda": lam, "coeffs": fr.__dict__, "weighted_slots": list(w)}
        return payload, None, f"model-match: KV weighted slots {tuple(round(float(v), 12) for v in w)}"
    kind = args.frame
    if kind == "auto":
        kind = "1" if abs(jet_eval(f, point, 3).partial(0, 3)) > cfg.zero_tol else "0"
    fr = frame_1(f, point) if kind == "1" else frame_0(f, point)
    rec = model_invariants(f, point, fr, k)
    tag = match_model(rec)
    payload = {"frame": kind, "coeffs": fr.__dict__, "record": rec.to_json(), "model": tag.name, "parameter": tag.parameter}
    return payload, None, f"model-match: {tag}"


def cmd_geodesic(args, cfg: RunConfig):
    f = _read_f(args)
    init = _floats(args.init, 6, "initial state")
    state = GeodesicState(0.0, init[:3], init[3:])
    traj = integrate_geodesic(f, state, args.tmax, cfg.ode_tol)
    payload = {
        "termination": traj.termination,
        "steps": traj.nsteps,
        "t_end": float(traj.t[-1]),
        "energy": float(traj.energies[0]),
        "energy_drift": traj.energy_drift,
        "final": traj.states[-1].tolist(),
    }
    summary = f"geodesic: {traj.termination} at t = {traj.t[-1]:.6g}, energy drift {traj.energy_drift:.2e}"
    if args.nb_check is not None:
        b = args.nb_check
        C1, C2 = nb_constants(b, init[3], init[1], init[4])
        ya = nb_closed_form(b, init[3], C1, C2, traj.t)
        rel = float(np.max(np.abs(traj.states[:, 1] - ya) / np.maximum(np.abs(ya), 1e-300)))
        payload["nb_closed_form"] = {"b": b, "C1": C1, "C2": C2, "max_rel_err_y": rel}
        summary += f", closed-form rel err {rel:.2e}"
    csv_text = traj.to_csv() if args.format == "csv" else None
    return payload, csv_text, summary


def _xexpr(text, params):
    return E.loads(text, params)


def cmd_soliton(args, cfg: RunConfig):
    params = _params(args.param)
    samples = cfg.grid.points()
    if args.remark is not None:
        rep = cotton_remark_report(args.remark, args.gamma0, samples)
        payload = {
            "remark": True,
            "lambda": rep["lambda"],
            "label": rep["label"],
            "corrected": {f"{s:+d}": v for s, v in rep["corrected"].items()},
            "printed": {f"{s:+d},{n}": v for (s, n), v in rep["printed"].items()},
        }
        return payload, None, f"soliton remark: {rep['label']}, corrected residual {rep['corrected'][cfg.cotton_sign]:.2e}"
    case = args.build
    x = lambda name, default: _xexpr(getattr(args, name) or default, params)
    if case in ("R1", "R2"):
        rc = RicciCase(case, x("alpha", "1"), x("beta", "0"), x("gamma", "0"), args.kappa)
        f, h = build_ricci_soliton(rc, samples, cfg.residual_tol)
        cert = verify_soliton(f, h, 0.0, "Ricci", samples)
        payload = {"case": case, "f": E.to_infix(f), "mu": h.mu, "hxx": E.to_infix(h.hxx), "certificate": cert.to_json()}
        return payload, None, f"soliton {case}: residual {cert.residual:.2e}, {cert.label}"
    cc = CottonCase(case, x("alpha1", "1"), x("alpha2", "0"), x("beta", "0"), x("gamma", "0"), args.kappa)
    f, h, rep = build_cotton_soliton(cc, samples, cfg.cotton_sign, cfg.residual_tol)
    certs = {}
    for s in (1, -1):
        certs[f"{s:+d}"] = verify_soliton(f, h, 0.0, "Cotton", samples, s).to_json()
    payload = {
        "case": case,
        "f": E.to_infix(f),
        "cotton_sign": cfg.cotton_sign,
        "mu": h.mu,
        "hxx": E.to_infix(h.hxx),
        "certificates": certs,
        "report": rep.to_json(),
    }
    cert = certs[f"{cfg.cotton_sign:+d}"]
    return payload, None, f"soliton {case}: residual {cert['residual']:.2e}, printed potential agrees: {rep.printed_agrees}"


def cmd_blowup_pc(args, cfg: RunConfig):
    tol = args.tol if args.tol is not None else 1e-12
    res = blowup_experiment_pc(tol=tol, psi_t0=args.psi_t0)
    T = res.table
    payload = {
        "termination": res.termination,
        "t_star": res.t_star,
        "one_minus_t_star": 1.0 - res.t_star,
        "curvature_at_t_star": res.curvature_at_t_star,
        "rows": int(T.shape[0]),
        "max_rel_curvature_dev": float(np.max(np.abs(T[:, 8] / T[:, 9] - 1.0))),
        "max_energy_dev": float(np.max(np.abs(T[:, 7] - T[0, 7]))),
        "max_abs_g_vel_Y": float(np.max(np.abs(T[:, 10]))),
        "max_abs_g_Y_Y_minus_1": float(np.max(np.abs(T[:, 11] - 1.0))),
    }
    csv_text = res.to_csv() if args.format != "json" else None
    summary = f"blowup-pc: {res.termination} at 1 - t* = {1.0 - res.t_star:.3e}, curvature {res.curvature_at_t_star:.3e}"
    return payload, csv_text, summary


COMMANDS = {
    "curvature": cmd_curvature,
    "classify": cmd_classify,
    "model-match": cmd_model_match,
    "geodesic": cmd_geodesic,
    "soliton": cmd_soliton,
    "blowup-pc": cmd_blowup_pc,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f", metavar="FILE", help="expression file (JSON schema or infix text)")
    common.add_argument("--expr", help="expression as infix text, e.g. 'exp(y)'")
    common.add_argument("--param", action="append", metavar="NAME=VALUE", help="numeric parameter used in the expression")
    common.add_argument("--point", default="0,0", metavar="X,Y")
    common.add_argument("--order", type=int, metavar="K")
    common.add_argument("--tol", type=float, metavar="T", help="ODE tolerance")
    common.add_argument("--grid", metavar="NX,NY,X0,X1,Y0,Y1")
    common.add_argument("--cotton-sign", type=int, choices=(1, -1))
    common.add_argument("--jet-order", type=int)
    common.add_argument("--config", metavar="FILE", help="key = value file; flags win")
    common.add_argument("--out", metavar="FILE")
    common.add_argument("--format", choices=("json", "csv"))

    p = argparse.ArgumentParser(prog="walker3", description="Curvature, classification, solitons and geodesics of 3D Walker metrics.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("curvature", parents=[common], help="R and its covariant derivatives at a point")
    sub.add_parser("classify", parents=[common], help="curvature-homogeneity class on a grid")
    mm = sub.add_parser("model-match", parents=[common], help="frame record and matching model")
    mm.add_argument("--frame", choices=("auto", "0", "1", "kv"), default="auto")
    geo = sub.add_parser("geodesic", parents=[common], help="integrate a geodesic")
    geo.add_argument("--init", default="0,0,0,1,0,0", metavar="X,Y,XT,XP,YP,XTP")
    geo.add_argument("--tmax", type=float, default=10.0)
    geo.add_argument("--nb-check", type=float, metavar="B", help="compare y(t) with the closed form for f = b^-2 e^(b y)")
    sol = sub.add_parser("soliton", parents=[common], help="build and verify gradient solitons")
    sol.add_argument("--build", choices=("R1", "R2", "C1", "C2", "C3"), default="R1")
    sol.add_argument("--kappa", type=float, default=1.0)
    for name in ("alpha", "alpha1", "alpha2", "beta", "gamma"):
        sol.add_argument(f"--{name}", metavar="EXPR", help=f"{name}(x)")
    sol.add_argument("--remark", type=float, metavar="LAMBDA", help="check the non-gradient Cotton soliton field instead")
    sol.add_argument("--gamma0", type=float, default=0.0, help="constant gamma for --remark")
    bl = sub.add_parser("blowup-pc", parents=[common], help="incomplete geodesic of f = (1-x)^-2 y^2")
    bl.add_argument("--psi-t0", type=float, default=1.5)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        payload, csv_text, summary = COMMANDS[args.command](args, cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, OverflowError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except WalkerError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_OTHER
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _emit(args, csv_text if csv_text is not None else dump_json(payload))
    print(summary, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

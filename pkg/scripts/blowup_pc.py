"""Incomplete geodesic on f = (1 - x)^-2 y^2.

Writes the curvature table R(gamma', Y, Y, gamma') vs 2 (1 - t)^-2 as CSV and
prints where the integrator stopped.

    python scripts/blowup_pc.py --out results/blowup_pc.csv
"""

import argparse
from pathlib import Path

import numpy as np

from walker3.geodesics import blowup_experiment_pc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/blowup_pc.csv")
    ap.add_argument("--tol", type=float, default=1e-12)
    ap.add_argument("--psi-t0", type=float, default=1.5)
    args = ap.parse_args()

    res = blowup_experiment_pc(tol=args.tol, psi_t0=args.psi_t0)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(res.to_csv())

    T = res.table
    print(f"termination     {res.termination}")
    print(f"1 - t*          {1 - res.t_star:.3e}")
    print(f"curvature(t*)   {res.curvature_at_t_star:.3e}")
    print(f"rows            {T.shape[0]} -> {out}")
    print(f"curvature rel   {np.max(np.abs(T[:, 8] / T[:, 9] - 1)):.2e}")
    print(f"<g',g'> - E0    {np.max(np.abs(T[:, 7] - T[0, 7])):.2e}  (E0 = {T[0, 7]:.6g})")
    print(f"<g',Y>          {np.max(np.abs(T[:, 10])):.2e}")
    print(f"<Y,Y> - 1       {np.max(np.abs(T[:, 11] - 1)):.2e}")
    print(f"y - phi(t)      {np.max(np.abs(T[:, 2] - T[:, 12])):.2e}")
    for t in (0.0, 0.9, 0.99, 0.999):
        i = int(np.searchsorted(T[:, 0], t))
        if i < T.shape[0]:
            print(f"  t = {T[i, 0]:.6f}  curvature {T[i, 8]:.6e}  expected {T[i, 9]:.6e}")


if __name__ == "__main__":
    main()

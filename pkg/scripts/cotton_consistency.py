"""Gradient Cotton solitons: derived vs printed potentials, both orientations,
both (0,2) normalizations, and the non-gradient field on y^3 e^-lx + y^2 + y e^lx.

Also checks the homothety scalar equation against 𝓛_X g - mu g.

    python scripts/cotton_consistency.py
"""

import numpy as np

from walker3 import expr as E
from walker3.solitons import (
    CottonCase,
    Potential,
    VectorFieldAnsatz,
    build_cotton_soliton,
    cotton_remark_report,
    homothety_residual,
    homothety_scalar,
    verify_soliton,
)

CASES = [
    CottonCase("C1", E.parse("1 + x^2"), E.parse("exp(x)"), E.parse("sin(x)"), E.X, 1.3),
    CottonCase("C2", E.parse("cos(x)"), E.parse("x"), E.parse("1 + x"), E.const(0.0), 0.8),
    CottonCase("C3", E.parse("2 + x"), E.parse("x^2"), E.parse("x"), E.const(1.0)),
]
SAMPLES = [(x, y) for x in np.linspace(0.1, 0.9, 5) for y in np.linspace(-0.5, 0.5, 5)]


def main():
    print("case sign  mu(derived)   mu(printed)  corrected   printed(+1)  printed(-1)  printed hh_xx y-var")
    for case in CASES:
        for sign in (1, -1):
            _, _, rep = build_cotton_soliton(case, SAMPLES, sign)
            print(
                f"{case.case:<4s} {sign:+d}   {rep.mu:+.6f}    {rep.printed_mu:+.6f}    {rep.corrected_residual:.1e}"
                f"     {rep.printed_residual[1]:.2e}     {rep.printed_residual[-1]:.2e}     {rep.printed_hxx_y_variation:.2e}"
            )
    print()
    print("printed potentials under the doubled ('full') normalization:")
    for case in CASES:
        pmu, phxx, _ = case.printed()
        f = case.f()
        res = {
            s: verify_soliton(f, Potential(pmu, phxx), 0.0, "Cotton", SAMPLES, s, "full").residual for s in (1, -1)
        }
        print(f"  {case.case}: +1 {res[1]:.2e}   -1 {res[-1]:.2e}")
    print()
    for lam, g0 in ((0.7, 0.0), (-1.2, 0.0), (0.7, 0.3)):
        rep = cotton_remark_report(lam, g0)
        pr = "  ".join(f"{s:+d}/{n}: {v:.2e}" for (s, n), v in rep["printed"].items())
        cr = "  ".join(f"{s:+d}: {v:.1e}" for s, v in rep["corrected"].items())
        print(f"remark lambda={lam:+.1f} gamma0={g0}: {rep['label']}; corrected {cr}; printed {pr}")
    print()
    f = E.parse("exp(y)*(1 + x^2) + x*y^2")
    X = VectorFieldAnsatz(0.2, 0.1, 0.4, E.parse("x^2"), E.parse("x"))
    s, t = homothety_residual(X, f, SAMPLES)
    p = tuple(float(v) for v in SAMPLES[7])
    print(f"homothety: max|scalar| {s:.6f}, max|L_X g - mu g| {t:.6f} (ratio {t / s:.12f})")
    print(f"  scalar at {p}: {homothety_scalar(X, f, p):+.6f}; alternative form {homothety_scalar(X, f, p, printed=True):+.6f}")


if __name__ == "__main__":
    main()

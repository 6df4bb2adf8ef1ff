"""Isometries to the homogeneous models and the homogeneity maps, with their residuals.

Includes the variants with the alternative third component / ODE (P_c) and
psi_x = -phi^2 - phi_x^2/2 (CW) to show where they stop being isometries.

    python scripts/isometries.py
"""

import numpy as np

from walker3 import expr as E
from walker3.classify import (
    StructuredFamily,
    build_isometry_to_model,
    cw_homogeneity_map,
    cw_scaling_map,
    nb_beta,
    nb_homogeneity_map,
    pc_alpha,
    pc_homogeneity_map,
    profile_residual,
    verify_isometry,
)

rng = np.random.default_rng(0)
PTS = np.column_stack([rng.uniform(0.1, 0.9, 50), rng.uniform(-0.5, 0.5, 50)])


def row(name, T, extra=""):
    r = verify_isometry(T, T.target, T.source, PTS)
    print(f"{name:<44s} {r:10.2e} {extra}")


def main():
    print(f"{'map':<44s} {'residual':>10s}")
    alpha = E.parse("2 + sin(x)")
    fams = {
        "N_1.2 family -> model": StructuredFamily.exp_y(alpha, 1.2, nb_beta(alpha, 1.2), E.parse("x^3")),
        "P_c family -> model": StructuredFamily.quad_y(pc_alpha(2.0, -1.0), E.parse("cos(x)"), E.parse("x")),
        "CW_1.5 family -> model": StructuredFamily.quad_y(E.const(3.0), E.parse("x^2"), E.parse("exp(x)")),
    }
    for name, fam in fams.items():
        T = build_isometry_to_model(fam)
        row(name, T, f"(profile fd {profile_residual(T, PTS[:5, 0]):.1e})")
    row("N_1.2 homogeneity (0.3, -0.4, 0.7)", nb_homogeneity_map(1.2, 0.3, -0.4, 0.7))
    for a1 in (0.0, 0.4):
        row(f"P_c homogeneity a1={a1}", pc_homogeneity_map(1.5, a1, -0.6, 0.2))
        row(f"P_c homogeneity a1={a1}, alternative form", pc_homogeneity_map(1.5, a1, -0.6, 0.2, printed=True))
    row("CW homogeneity", cw_homogeneity_map(0.3, 0.8, -0.5))
    row("CW homogeneity, psi_x = -a2^2", cw_homogeneity_map(0.3, 0.8, -0.5, printed=True))
    row("CW scaling eps=3", cw_scaling_map(3.0))


if __name__ == "__main__":
    main()

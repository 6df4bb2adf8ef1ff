"""Classification of a panel of metric functions on the default grid.

    python scripts/classification_table.py [--grid NX,NY,X0,X1,Y0,Y1]
"""

import argparse

from walker3 import expr as E
from walker3.classify import Grid, classify_sampled, nb_beta
from walker3.errors import WalkerError

PANEL = [
    "exp(y)",
    "0.25*exp(2*y)",
    "exp(y)*(2 + sin(x))",
    "y^2",
    "3*y^2 + x*y + x^3",
    "0.5*y^2*(x+1)^-2",
    "0.5*y^2*(x-2)^-2",
    "exp(x*y)",
    "(y+2)^3",
    "x*y",
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", default=None)
    args = ap.parse_args()
    grid = Grid.parse(args.grid) if args.grid else Grid()
    alpha = E.parse("2 + sin(x)")
    panel = [(t, E.parse(t)) for t in PANEL]
    homog = E.exp(E.Y) * alpha + E.Y * nb_beta(alpha, 1.0)
    panel.append(("exp(y)(2+sin x) + y beta_hom(x)", homog))
    for text, f in panel:
        try:
            cls = str(classify_sampled(f, grid))
        except WalkerError as exc:
            cls = f"{type(exc).__name__}: {exc}"
        print(f"{text:<34s} {cls}")


if __name__ == "__main__":
    main()
